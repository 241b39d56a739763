#include "tbfid/excitation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace tbfid {

namespace {

using cd = std::complex<double>;

constexpr double kRichardsonTol = 1e-6;
const double kSqrt3Pi = std::sqrt(3.0) * kPi;

// Dimensionless pulse envelope on [0, tau_p].
struct Envelope {
    PulseShape shape;
    double tau_p;
    double omega0;       // peak Rabi frequency (units of gamma)
    double tau_fwhm;     // gaussian only
    double center;       // gaussian only

    double operator()(double tau) const {
        if (shape == PulseShape::square) return omega0;
        const double x = tau - center;
        return omega0 * std::exp(-4.0 * std::log(2.0) * x * x / (tau_fwhm * tau_fwhm));
    }
};

Envelope make_envelope(const PulseSpec& pulse, double gamma, double delta) {
    Envelope env{};
    env.shape = pulse.shape;
    if (pulse.shape == PulseShape::square) {
        const double dur = pulse.duration > 0.0 ? pulse.duration
                                                : square_pulse_optimal_duration(delta);
        env.tau_p = gamma * dur;
        env.omega0 = pulse.area / env.tau_p;
    } else {
        env.tau_fwhm = gamma * pulse.t_fwhm;
        env.tau_p = pulse.truncation * env.tau_fwhm;
        env.center = env.tau_p / 2.0;
        // Area condition over the truncated window, not the infinite one.
        const double sigma = env.tau_fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
        const double window = sigma * std::sqrt(2.0 * kPi) *
                              std::erf(env.center / (sigma * std::sqrt(2.0)));
        env.omega0 = pulse.area / window;
    }
    return env;
}

struct Pair {
    cd g, e;
};

// One RK4 step of d(g,e)/dtau = A(tau) (g,e).
Pair rk4_step(const Envelope& env, double delta_tilde, double tau, double h, Pair v) {
    auto deriv = [&](double t, Pair p) -> Pair {
        const double w = env(t);
        return {cd(0.0, 0.5 * w) * p.e,
                cd(0.0, 0.5 * w) * p.g - (cd(0.5, delta_tilde)) * p.e};
    };
    const Pair k1 = deriv(tau, v);
    const Pair k2 = deriv(tau + h / 2, {v.g + h / 2 * k1.g, v.e + h / 2 * k1.e});
    const Pair k3 = deriv(tau + h / 2, {v.g + h / 2 * k2.g, v.e + h / 2 * k2.e});
    const Pair k4 = deriv(tau + h, {v.g + h * k3.g, v.e + h * k3.e});
    return {v.g + h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g),
            v.e + h / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e)};
}

struct Mat {
    cd a, b, c, d; // row-major 2x2
};

// One RK4 step of dW/dtau = -W A(tau), integrating backward (h < 0 handled by caller).
Mat rk4_step_adjoint(const Envelope& env, double delta_tilde, double tau, double h, Mat w) {
    auto deriv = [&](double t, Mat m) -> Mat {
        const double x = env(t);
        const cd iw(0.0, 0.5 * x);
        const cd dec(0.5, delta_tilde);
        // -W A with A = [[0, iw], [iw, -dec]]
        return {-(m.b * iw), -(m.a * iw - m.b * dec), -(m.d * iw), -(m.c * iw - m.d * dec)};
    };
    auto axpy = [](Mat m, double s, Mat k) -> Mat {
        return {m.a + s * k.a, m.b + s * k.b, m.c + s * k.c, m.d + s * k.d};
    };
    const Mat k1 = deriv(tau, w);
    const Mat k2 = deriv(tau + h / 2, axpy(w, h / 2, k1));
    const Mat k3 = deriv(tau + h / 2, axpy(w, h / 2, k2));
    const Mat k4 = deriv(tau + h, axpy(w, h, k3));
    Mat r = axpy(w, h / 6.0, k1);
    r = axpy(r, h / 3.0, k2);
    r = axpy(r, h / 3.0, k3);
    r = axpy(r, h / 6.0, k4);
    return r;
}

BranchSolution solve_on_grid(const Envelope& env, double delta_tilde, int n) {
    const double h = env.tau_p / n;
    std::vector<cd> ce(n + 1);
    Pair v{1.0, 0.0};
    ce[0] = v.e;
    for (int i = 0; i < n; ++i) {
        v = rk4_step(env, delta_tilde, i * h, h, v);
        ce[i + 1] = v.e;
    }
    // Backward propagator W(tau) = U(tau_p <- tau); only the first column is
    // needed since the post-emission pair starts as (v0, 0).
    std::vector<cd> w00(n + 1), w10(n + 1);
    Mat w{1.0, 0.0, 0.0, 1.0};
    w00[n] = w.a;
    w10[n] = w.c;
    for (int i = n; i > 0; --i) {
        w = rk4_step_adjoint(env, delta_tilde, i * h, -h, w);
        w00[i - 1] = w.a;
        w10[i - 1] = w.c;
    }
    // Trapezoid over the emission time; the boundary phase e^{-i dt te} is a
    // global phase of the pair and drops out of the weights.
    double pg = 0.0, pe = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wq = (i == 0 || i == n) ? h / 2.0 : h;
        const double src = std::norm(ce[i]);
        pg += wq * src * std::norm(w00[i]);
        pe += wq * src * std::norm(w10[i]);
    }
    BranchSolution s;
    s.c_g = v.g;
    s.c_e = v.e;
    s.phi_g = pg;
    s.phi_e = pe;
    return s;
}

} // namespace

void PulseSpec::validate() const {
    if (shape == PulseShape::gaussian) {
        if (!(t_fwhm > 0.0)) throw validation_error("gaussian pulse requires t_fwhm > 0");
        if (!(truncation > 0.0)) throw validation_error("truncation factor must be > 0");
    } else if (duration < 0.0) {
        throw validation_error("square pulse duration must be >= 0");
    }
    if (!(area >= 0.0)) throw validation_error("pulse area must be >= 0");
}

BranchSolution solve_two_level_fixed(const PulseSpec& pulse, double gamma, double delta_tilde,
                                     int grid) {
    pulse.validate();
    if (grid < 50) throw validation_error("solver grid must be >= 50 steps");
    if (!(gamma > 0.0)) throw validation_error("gamma must be > 0");
    if (pulse.shape == PulseShape::square && pulse.duration <= 0.0 && delta_tilde <= 0.0)
        throw validation_error("square pulse needs an explicit duration on the resonant branch");
    return solve_on_grid(make_envelope(pulse, gamma, delta_tilde * gamma), delta_tilde, grid);
}

BranchSolution solve_two_level(const PulseSpec& pulse, double gamma, double delta_tilde,
                               int grid) {
    pulse.validate();
    if (grid < 200) throw validation_error("solver grid must be >= 200 steps");
    if (!(gamma > 0.0)) throw validation_error("gamma must be > 0");
    if (pulse.shape == PulseShape::square && pulse.duration <= 0.0 && delta_tilde <= 0.0)
        throw validation_error("square pulse needs an explicit duration on the resonant branch");
    const Envelope env = make_envelope(pulse, gamma, delta_tilde * gamma);
    const BranchSolution coarse = solve_on_grid(env, delta_tilde, grid);
    BranchSolution fine = solve_on_grid(env, delta_tilde, 2 * grid);
    double est = std::abs(fine.c_g - coarse.c_g);
    est = std::max(est, std::abs(fine.c_e - coarse.c_e));
    est = std::max(est, std::abs(fine.phi_g - coarse.phi_g));
    est = std::max(est, std::abs(fine.phi_e - coarse.phi_e));
    if (est > kRichardsonTol) {
        std::ostringstream os;
        os << "two-level solve not converged: grid-doubling estimate " << est;
        throw numerical_error(os.str(), est);
    }
    fine.richardson = est;
    return fine;
}

ExcitationAmplitudes excitation_amplitudes(const PulseSpec& pulse, const EmitterParams& params,
                                           int grid) {
    params.validate();
    PulseSpec p = pulse;
    if (p.shape == PulseShape::square && p.duration <= 0.0)
        p.duration = square_pulse_optimal_duration(params.delta);
    const double delta_tilde = params.delta / params.gamma;
    // One physical drive; only the detuning differs between the branches.
    const BranchSolution res = solve_two_level(p, params.gamma, 0.0, grid);
    const BranchSolution det = solve_two_level(p, params.gamma, delta_tilde, grid);
    ExcitationAmplitudes a;
    a.c1 = res.c_g;
    a.c2 = res.c_e;
    a.phi1 = res.phi_g;
    a.phi2 = res.phi_e;
    a.c0 = det.c_g;
    a.c3 = det.c_e;
    a.phi0 = det.phi_g;
    a.phi3 = det.phi_e;
    return a;
}

DetectionFactors detection_factors(const ExcitationAmplitudes& a, const CollectionParams& c) {
    c.validate();
    const double e2 = c.eta2();
    const double e3 = c.eta3();
    const double c0 = std::norm(a.c0), c1 = std::norm(a.c1), c2 = std::norm(a.c2),
                 c3 = std::norm(a.c3);
    DetectionFactors d;
    d.d1 = e2 * c0 * c2;
    d.d2 = e2 * (c0 * c2 + c0 * a.phi2 + a.phi0 * c2 + a.phi0 * a.phi2) +
           e2 * (1.0 - e3) * (c2 * c3 + a.phi2 * c3 + a.phi3 * c2 + a.phi3 * a.phi2);
    d.d3 = e3 * (c3 * c1 + c3 * a.phi1 + a.phi3 * c1 + a.phi3 * a.phi1 + c3 * c2 +
                 c3 * a.phi2 + a.phi3 * c2 + a.phi3 * a.phi2);
    // Structural bounds; violations mean the amplitudes were not normalized.
    if (d.d1 > d.d2 + 1e-12 || d.success() > 1.0 + 1e-6)
        throw validation_error("detection factors out of range: amplitudes are not physical");
    return d;
}

double excitation_fidelity(const DetectionFactors& d, const TargetState& target) {
    target.validate();
    const double succ = d.success();
    if (succ <= 0.0)
        throw postselect_error("zero detection probability; conditional fidelity undefined");
    const int n = target.n_photons;
    if (target.kind == StateKind::GHZ)
        return 0.5 * (std::pow(d.d1, n) + std::pow(d.d2, n)) / std::pow(succ, n);
    return std::pow(0.5 * (d.d1 + d.d2) / succ, n);
}

double excitation_fidelity_first_order(long n, const EmitterParams& params,
                                       const CollectionParams& c) {
    params.validate();
    c.validate();
    if (params.gamma / params.delta >= 0.2)
        throw validation_error("first-order excitation formula requires gamma/delta < 0.2");
    const double ratio = params.gamma / params.delta;
    if (c.xi3 == 0.0) return 1.0 - double(n) * kSqrt3Pi / 8.0 * ratio;
    return 1.0 - double(n) * ratio * kSqrt3Pi / 256.0 * (29.0 + 3.0 * (1.0 + c.xi3 / c.xi2));
}

SquarePulseCoefficients square_pulse_coefficients(double dt) {
    SquarePulseCoefficients r;
    const double s = kSqrt3Pi / dt; // gamma * T_opt
    r.c0 = 1.0;
    r.c3 = 0.0;
    r.c1 = s / 2.0;
    r.c2 = 1.0 - s / 2.0;
    r.phi2 = s / 8.0 * (1.0 - s / 2.0);
    r.phi1 = 3.0 * s / 8.0 - 1.5 * kPi * kPi / (dt * dt) * (3.0 / 8.0 - 1.0 / (kPi * kPi));
    r.phi3 = 3.0 / 16.0 * (s / 8.0 - 3.0 * kPi * kPi / (16.0 * dt * dt));
    r.phi0 = 13.0 * s / 128.0 * (1.0 - s / 2.0);
    return r;
}

} // namespace tbfid

#include "tbfid/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "tbfid/kernel.hpp"

namespace tbfid {

namespace {

using cd = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

SymbolSet sorted(SymbolSet s) {
    std::sort(s.begin(), s.end());
    return s;
}

// Appends the outcome of the final ground-state rotation R: X maps the
// pre-rotation spin s to 1-s, H splits it into both outputs with the
// (-1)^s sign on |1>.
void push_rotated(std::vector<RoundBranch>& out, StateKind kind, int spin_in, int spin_pre,
                  cd amp, SymbolSet syms) {
    syms = sorted(std::move(syms));
    if (kind == StateKind::GHZ) {
        out.push_back({spin_in, 1 - spin_pre, amp, std::move(syms)});
    } else {
        out.push_back({spin_in, 0, amp * kInvSqrt2, syms});
        out.push_back({spin_in, 1, amp * kInvSqrt2 * (spin_pre == 0 ? 1.0 : -1.0),
                       std::move(syms)});
    }
}

} // namespace

double SparseState::norm_sq() const {
    double s = 0.0;
    for (const auto& [label, amp] : amps) s += std::norm(amp);
    return s;
}

RoundOperator ideal_round_phased(StateKind kind, double phase) {
    const cd ph = std::polar(1.0, phase);
    RoundOperator op;
    // Spin |1>: early emission, spin X-flipped to |0> before R.
    push_rotated(op.branches, kind, 1, 0, ph, {ModeSymbol::det_res_early});
    // Spin |0>: X to |1>, late emission, still |1> before R.
    push_rotated(op.branches, kind, 0, 1, ph, {ModeSymbol::det_res_late});
    return op;
}

RoundOperator ideal_round(StateKind kind) { return ideal_round_phased(kind, 0.0); }

RoundOperator branching_round(const DetectionProbs& p, StateKind kind) {
    RoundOperator op;
    struct Outcome {
        double amp;
        int spin; // spin after the decay
        ModeSymbol sym;
    };
    const auto outcomes = [&p](bool early) -> std::array<Outcome, 4> {
        return {{{std::sqrt(p.p_par), 1, early ? ModeSymbol::det_res_early : ModeSymbol::det_res_late},
                 {std::sqrt(p.p_par_prime), 1,
                  early ? ModeSymbol::lost_par_early : ModeSymbol::lost_par_late},
                 {std::sqrt(p.p_perp), 0,
                  early ? ModeSymbol::det_diag_early : ModeSymbol::det_diag_late},
                 {std::sqrt(p.p_perp_prime), 0,
                  early ? ModeSymbol::lost_perp_early : ModeSymbol::lost_perp_late}}};
    };
    // Spin |1>: emits in the early half, X, then possibly again in the late half.
    for (const Outcome& e : outcomes(true)) {
        const int after_x = 1 - e.spin;
        if (after_x == 1) {
            for (const Outcome& l : outcomes(false))
                push_rotated(op.branches, kind, 1, l.spin, e.amp * l.amp, {e.sym, l.sym});
        } else {
            push_rotated(op.branches, kind, 1, 0, e.amp, {e.sym});
        }
    }
    // Spin |0>: idle early half, X to |1>, emits in the late half.
    for (const Outcome& l : outcomes(false))
        push_rotated(op.branches, kind, 0, l.spin, l.amp, {l.sym});
    return op;
}

RoundOperator truncated_branching_round(const DetectionProbs& p, StateKind kind,
                                        bool first_round) {
    RoundOperator op;
    const double a_par = std::sqrt(p.p_par);
    const double a_wrong_keep = std::sqrt(p.p_perp_prime * p.p_perp);
    const double a_wrong_flip = std::sqrt(p.p_perp_prime * p.p_par);
    // |1><1| (sqrt(p_par) A_e + sqrt(p_perp' p_perp) A_e' L): pre-R spin 0.
    push_rotated(op.branches, kind, 1, 0, a_par, {ModeSymbol::det_res_early});
    push_rotated(op.branches, kind, 1, 0, a_wrong_keep,
                 {ModeSymbol::det_diag_early, ModeSymbol::lost_perp_late});
    // |0><0| sqrt(p_par) A_l: pre-R spin 1.
    push_rotated(op.branches, kind, 0, 1, a_par, {ModeSymbol::det_res_late});
    // |0><1| sqrt(p_perp' p_par) A_l E: for the cluster only in the first round.
    if (kind == StateKind::GHZ || first_round)
        push_rotated(op.branches, kind, 1, 1, a_wrong_flip,
                     {ModeSymbol::det_res_late, ModeSymbol::lost_perp_early});
    return op;
}

RoundOperator phonon_round(double indistinguishability, StateKind kind) {
    if (indistinguishability < 0.0 || indistinguishability > 1.0)
        throw validation_error("indistinguishability must lie in [0, 1]");
    const double coh = std::sqrt(indistinguishability);
    const double inc = std::sqrt(1.0 - indistinguishability);
    RoundOperator op;
    push_rotated(op.branches, kind, 1, 0, coh, {ModeSymbol::det_res_early});
    push_rotated(op.branches, kind, 1, 0, inc,
                 {ModeSymbol::det_res_early, ModeSymbol::phonon_early});
    push_rotated(op.branches, kind, 0, 1, coh, {ModeSymbol::det_res_late});
    push_rotated(op.branches, kind, 0, 1, inc,
                 {ModeSymbol::det_res_late, ModeSymbol::phonon_late});
    return op;
}

SparseState run_protocol(const std::vector<RoundOperator>& ops, std::size_t cap) {
    SparseState state;
    state.amps[{0, {}}] = kInvSqrt2;
    state.amps[{1, {}}] = kInvSqrt2;
    for (const RoundOperator& op : ops) {
        std::map<StateLabel, cd> next;
        for (const auto& [label, amp] : state.amps) {
            for (const RoundBranch& br : op.branches) {
                if (br.spin_in != label.spin) continue;
                StateLabel nl;
                nl.spin = static_cast<std::uint8_t>(br.spin_out);
                nl.rounds = label.rounds;
                nl.rounds.push_back(br.emitted);
                next[nl] += amp * br.amp;
            }
        }
        // Prune amplitudes at rounding-noise level to bound growth.
        for (auto it = next.begin(); it != next.end();) {
            if (std::abs(it->second) < kPruneThreshold) {
                it = next.erase(it);
                ++state.pruned;
            } else {
                ++it;
            }
        }
        if (next.size() > cap) {
            std::ostringstream os;
            os << "protocol state grew to " << next.size() << " labels (cap " << cap << ")";
            throw validation_error(os.str());
        }
        state.amps = std::move(next);
    }
    return state;
}

SparseState run_protocol(const RoundOperator& op, int n, std::size_t cap) {
    if (n < 0 || n > 8) throw validation_error("enumeration supports 0 <= n <= 8 rounds");
    return run_protocol(std::vector<RoundOperator>(static_cast<std::size_t>(n), op), cap);
}

namespace {

// Ideal state as a map (spin, time-bin pattern) -> amplitude.
using BinPattern = std::vector<std::uint8_t>;
std::map<std::pair<std::uint8_t, BinPattern>, cd> ideal_amplitudes(const TargetState& target) {
    std::map<std::pair<std::uint8_t, BinPattern>, cd> st;
    st[{0, {}}] = kInvSqrt2;
    st[{1, {}}] = kInvSqrt2;
    const RoundOperator op = ideal_round(target.kind);
    for (int j = 0; j < target.n_photons; ++j) {
        std::map<std::pair<std::uint8_t, BinPattern>, cd> next;
        for (const auto& [key, amp] : st) {
            for (const RoundBranch& br : op.branches) {
                if (br.spin_in != key.first) continue;
                BinPattern bins = key.second;
                bins.push_back(static_cast<std::uint8_t>(symbol_bin(br.emitted.front())));
                next[{static_cast<std::uint8_t>(br.spin_out), std::move(bins)}] += amp * br.amp;
            }
        }
        st = std::move(next);
    }
    return st;
}

} // namespace

OracleResult conditional_fidelity(const SparseState& state, const TargetState& target) {
    target.validate();
    const auto ideal = ideal_amplitudes(target);

    // Environment configuration: per round, the transition flavor of the
    // detected photon plus every undetected symbol. Distinct configurations
    // are orthogonal; amplitudes within one interfere coherently.
    using RoundConfig = std::pair<std::uint8_t, SymbolSet>;
    using ConfigKey = std::vector<RoundConfig>;
    using SysKey = std::pair<std::uint8_t, BinPattern>;
    std::map<ConfigKey, std::map<SysKey, cd>> sectors;

    double success = 0.0;
    for (const auto& [label, amp] : state.amps) {
        bool all_detected = true;
        bool single_detected = true;
        for (const SymbolSet& syms : label.rounds) {
            int n_det = 0;
            for (ModeSymbol s : syms) n_det += symbol_is_detected(s) ? 1 : 0;
            if (n_det == 0) all_detected = false;
            if (n_det != 1) single_detected = false;
        }
        if (all_detected) success += std::norm(amp);
        if (!single_detected) continue; // orthogonal to the one-photon-per-round ideal
        ConfigKey config;
        BinPattern bins;
        config.reserve(label.rounds.size());
        bins.reserve(label.rounds.size());
        for (const SymbolSet& syms : label.rounds) {
            RoundConfig rc;
            for (ModeSymbol s : syms) {
                if (symbol_is_detected(s)) {
                    rc.first = symbol_is_diag(s) ? 1 : 0;
                    bins.push_back(static_cast<std::uint8_t>(symbol_bin(s)));
                } else {
                    rc.second.push_back(s);
                }
            }
            config.push_back(std::move(rc));
        }
        sectors[std::move(config)][{label.spin, std::move(bins)}] += amp;
    }

    if (success <= 0.0)
        throw postselect_error("no protocol run detected a photon in every round");

    double fid = 0.0;
    for (const auto& [config, vec] : sectors) {
        cd overlap = 0.0;
        for (const auto& [sys, amp] : vec) {
            auto it = ideal.find(sys);
            if (it != ideal.end()) overlap += std::conj(it->second) * amp;
        }
        fid += std::norm(overlap);
    }

    OracleResult r;
    r.fidelity = fid / success;
    r.success = success;
    r.n_terms = state.n_terms();
    return r;
}

std::vector<double> stabilizer_check(const SparseState& state, int n) {
    if (n < 1) throw validation_error("stabilizer_check requires n >= 1");
    const int nq = n + 1;
    const std::size_t dim = std::size_t{1} << nq;
    std::vector<cd> v(dim, 0.0);
    for (const auto& [label, amp] : state.amps) {
        if (static_cast<int>(label.rounds.size()) != n)
            throw validation_error("state round count does not match n");
        // Logical basis: spin relabel 0 <-> 1; early -> |0>, late -> -|1>.
        // Qubit order: [spin, photon_n, ..., photon_1], spin = most significant.
        std::size_t idx = label.spin == 0 ? 1 : 0;
        double sign = 1.0;
        for (auto it = label.rounds.rbegin(); it != label.rounds.rend(); ++it) {
            if (it->size() != 1 || !symbol_is_detected(it->front()) ||
                symbol_is_diag(it->front()))
                throw validation_error("stabilizer_check expects an ideal-protocol state");
            const int bit = symbol_bin(it->front());
            if (bit == 1) sign = -sign;
            idx = (idx << 1) | static_cast<std::size_t>(bit);
        }
        v[idx] += sign * amp;
    }

    auto expectation = [&](int x_qubit, std::vector<int> z_qubits) {
        cd acc = 0.0;
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (v[idx] == cd(0.0)) continue;
            double phase = 1.0;
            for (int q : z_qubits) {
                const int bitpos = nq - 1 - q;
                if ((idx >> bitpos) & 1U) phase = -phase;
            }
            const std::size_t flipped = idx ^ (std::size_t{1} << (nq - 1 - x_qubit));
            acc += std::conj(v[flipped]) * phase * v[idx];
        }
        return acc.real();
    };

    std::vector<double> evs;
    evs.reserve(static_cast<std::size_t>(nq));
    for (int i = 0; i <= n; ++i) {
        std::vector<int> zs;
        if (i > 0) zs.push_back(i - 1);
        if (i < n) zs.push_back(i + 1);
        evs.push_back(expectation(i, std::move(zs)));
    }
    return evs;
}

namespace {

// Dense operators over the two-round truncated basis of the two-qubit
// decomposition check: spin (x) slot_j (x) slot_{j+1}, slot in
// {vacuum, early, late}.
constexpr int kDim2 = 2 * 3 * 3;

struct DenseOp {
    std::array<std::array<cd, kDim2>, kDim2> m{};
};

int pack(int spin, int slot_j, int slot_j1) { return (spin * 3 + slot_j) * 3 + slot_j1; }

DenseOp matmul(const DenseOp& a, const DenseOp& b) {
    DenseOp r;
    for (int i = 0; i < kDim2; ++i)
        for (int k = 0; k < kDim2; ++k) {
            if (a.m[i][k] == cd(0.0)) continue;
            for (int j = 0; j < kDim2; ++j) r.m[i][j] += a.m[i][k] * b.m[k][j];
        }
    return r;
}

// Ideal single-round creation on the given slot: |+><1| a_e + |-><0| a_l.
DenseOp ideal_op_on_slot(int slot) {
    DenseOp op;
    for (int other = 0; other < 3; ++other) {
        auto idx = [&](int spin, int s) {
            return slot == 0 ? pack(spin, s, other) : pack(spin, other, s);
        };
        // from spin 1, vacuum slot: (|0> + |1>)/sqrt(2) with an early photon
        op.m[idx(0, 1)][idx(1, 0)] += kInvSqrt2;
        op.m[idx(1, 1)][idx(1, 0)] += kInvSqrt2;
        // from spin 0: (|0> - |1>)/sqrt(2) with a late photon
        op.m[idx(0, 2)][idx(0, 0)] += kInvSqrt2;
        op.m[idx(1, 2)][idx(0, 0)] -= kInvSqrt2;
    }
    return op;
}

} // namespace

DecompositionReport decomposition_check(const DetectionProbs& p) {
    const double w = std::sqrt(p.p_perp_prime * p.p_par);

    // O_tilde on slot j: w |-><1| a_l (the lost companion photon is a common
    // environment tag and is dropped from both sides of the identity).
    DenseOp wrong;
    for (int other = 0; other < 3; ++other) {
        wrong.m[pack(0, 2, other)][pack(1, 0, other)] += w * kInvSqrt2;
        wrong.m[pack(1, 2, other)][pack(1, 0, other)] -= w * kInvSqrt2;
    }

    const DenseOp o_j = ideal_op_on_slot(0);
    const DenseOp o_j1 = ideal_op_on_slot(1);

    // Z on photon j+1 (early -> +, late -> -) and a_l^dag a_e on photon j.
    DenseOp z_next, shift;
    for (int spin = 0; spin < 2; ++spin)
        for (int sj = 0; sj < 3; ++sj)
            for (int sj1 = 0; sj1 < 3; ++sj1) {
                z_next.m[pack(spin, sj, sj1)][pack(spin, sj, sj1)] = sj1 == 2 ? -1.0 : 1.0;
                if (sj == 1) shift.m[pack(spin, 2, sj1)][pack(spin, 1, sj1)] = 1.0;
            }

    const DenseOp lhs = matmul(o_j1, wrong);
    DenseOp rhs = matmul(shift, matmul(z_next, matmul(o_j1, o_j)));
    double residual = 0.0;
    for (int i = 0; i < kDim2; ++i)
        for (int j = 0; j < kDim2; ++j)
            residual = std::max(residual, std::abs(lhs.m[i][j] + w * rhs.m[i][j]));

    DecompositionReport rep;
    rep.residual = residual;
    rep.two_qubit_error_prob = p.p_perp_prime * p.p_par;
    return rep;
}

double kernel_oracle(KernelModel model, const EmitterParams& params, double delta21,
                     const TargetState& target) {
    params.validate();
    target.validate();
    if (target.n_photons > 8)
        throw validation_error("kernel oracle enumeration is limited to n <= 8");
    SparseState state;
    if (model == KernelModel::phonon) {
        const double ind = indistinguishability(params.gamma, params.gamma_d);
        state = run_protocol(phonon_round(ind, target.kind), target.n_photons);
    } else {
        // Per-round chirp phase, identical for the early and late branch.
        std::vector<RoundOperator> ops;
        ops.reserve(static_cast<std::size_t>(target.n_photons));
        for (int j = 1; j <= target.n_photons; ++j)
            ops.push_back(ideal_round_phased(target.kind, -delta21 * params.t_bin * j));
        state = run_protocol(ops);
    }
    return conditional_fidelity(state, target).fidelity;
}

} // namespace tbfid

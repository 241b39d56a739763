#pragma once

#include <stdexcept>
#include <string>

namespace tbfid {

// Input failed a domain-validity check (bad ranges, inconsistent sums, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine could not reach the requested accuracy.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& msg, double estimate)
        : std::runtime_error(msg), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

// Postselection on an event of probability zero.
class postselect_error : public std::runtime_error {
public:
    explicit postselect_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tbfid

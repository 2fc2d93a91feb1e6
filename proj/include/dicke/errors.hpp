// errors.hpp: exception types shared by all dicke modules

#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Phase tag or coupling outside the region where a formula or expansion applies.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raman channels not balanced within the requested tolerance.
class BalanceError : public std::invalid_argument {
public:
    BalanceError(const std::string& what, double detuning_residual, double coupling_residual)
        : std::invalid_argument(what)
        , detuning_residual_(detuning_residual)
        , coupling_residual_(coupling_residual) {}

    // g_r^2/Delta_r - g_s^2/Delta_s
    double detuning_residual() const noexcept { return detuning_residual_; }
    // g_r Omega_r/Delta_r - g_s Omega_s/Delta_s
    double coupling_residual() const noexcept { return coupling_residual_; }

private:
    double detuning_residual_;
    double coupling_residual_;
};

// A transfer function or spectrum was requested on (or within tolerance of) a real pole.
class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, double nu) : std::runtime_error(what), nu_(nu) {}
    double nu() const noexcept { return nu_; }

private:
    double nu_;
};

// Linear system has no unique stationary state (marginal or unstable drift).
class NoSteadyStateError : public std::runtime_error {
public:
    NoSteadyStateError(const std::string& what, double max_real_part)
        : std::runtime_error(what), max_real_part_(max_real_part) {}
    double max_real_part() const noexcept { return max_real_part_; }

private:
    double max_real_part_;
};

// A Bogoliubov mode frequency became imaginary.
class SoftModeError : public std::domain_error {
public:
    SoftModeError(const std::string& what, std::string mode)
        : std::domain_error(what), mode_(std::move(mode)) {}
    const std::string& mode() const noexcept { return mode_; }

private:
    std::string mode_;
};

}  // namespace dicke

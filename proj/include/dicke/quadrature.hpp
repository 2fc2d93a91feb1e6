// quadrature.hpp: globally adaptive Gauss-Kronrod (7/15) for vector-valued
// integrands. All components share the same nodes, which matters when one
// evaluation is a 4x4 complex solve feeding sixteen integrals.

#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

namespace dicke::quad {

using Integrand = std::function<Eigen::VectorXcd(double)>;

struct Result {
    Eigen::VectorXcd value;
    double error{0.0};       // max-norm error estimate
    int intervals{0};
    bool converged{false};
};

struct Options {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    int max_intervals{20000};
};

// Integral of f over [a, b].
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

// Integral of f over the whole real line. The line is cut at the sorted
// breakpoints; the two tails are mapped onto [0, 1). f must decay at least
// as 1/x^2.
Result integrate_real_line(const Integrand& f, std::span<const double> breakpoints,
                           const Options& opt = {});

}  // namespace dicke::quad

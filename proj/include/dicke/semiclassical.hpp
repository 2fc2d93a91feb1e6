// semiclassical.hpp: mean-field equations, fixed points and their stability
//
//   alpha' = -(kappa + i omega) alpha - i (lambda/sqrt N)(beta + beta*)
//   beta'  = -i omega0 beta + 2i (lambda/sqrt N)(alpha + alpha*) w
//   w'     = i (lambda/sqrt N)(alpha + alpha*)(beta - beta*)
//
// with alpha = <a>, beta = <J->, w = <Jz>. The flow conserves w^2 + |beta|^2.

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "dicke/model.hpp"

namespace dicke::semi {

using cplx = std::complex<double>;

struct SemiclassicalState {
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};
    double w{0.0};

    // w^2 + |beta|^2
    double pseudo_spin_norm() const { return w * w + std::norm(beta); }
};

// Time derivative at coupling p.lambda, same layout as the state.
SemiclassicalState rhs(const DickeParams& p, const SemiclassicalState& s);

enum class Stability { stable, unstable, marginal };

const char* to_string(Stability s) noexcept;

// Trivial branches carry Sign::none; the superradiant pair is +/- after the
// sign of Re(alpha).
enum class Sign { none, plus, minus };

struct SteadyBranch {
    SemiclassicalState state;
    double lambda{0.0};
    Phase phase{Phase::normal};
    Sign sign{Sign::none};
    Stability stability{Stability::stable};

    bool stable() const { return stability == Stability::stable; }
};

// Fixed points on the sphere w^2 + |beta|^2 = N^2/4. Below threshold the two
// trivial states, above it also the two superradiant ones. At lambda_c the
// lower trivial state is flagged marginal.
std::vector<SteadyBranch> steady_states(const DickeParams& p, double lambda);

struct Trajectory {
    std::vector<double> times;
    std::vector<SemiclassicalState> states;
    double max_conservation_drift{0.0};  // relative change of w^2 + |beta|^2
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double drift)
        : std::runtime_error(what), drift_(drift) {}
    double drift() const noexcept { return drift_; }

private:
    double drift_;
};

constexpr double kMaxConservationDrift = 1e-6;

// Adaptive Dormand-Prince integration sampled every dt up to t_final. The
// tolerance is tightened when the conservation drift exceeds 1e-6 relative;
// throws IntegrationError if that does not help.
Trajectory integrate(const DickeParams& p, const SemiclassicalState& s0,
                     double t_final, double dt);

struct StabilityReport {
    Stability stability{Stability::stable};
    std::vector<cplx> growth_rates;  // eigenvalues on the tangent space of the sphere
    double max_real{0.0};
};

// Linearizes rhs about a fixed point, restricted to the tangent space of the
// conserved sphere (the normal direction only carries a structural zero).
// Throws std::invalid_argument when `s` is not a fixed point.
StabilityReport stability(const DickeParams& p, const SemiclassicalState& s);

// Uses the branch's own coupling in place of p.lambda.
inline StabilityReport stability(const DickeParams& p, const SteadyBranch& b) {
    DickeParams q = p;
    q.lambda = b.lambda;
    return stability(q, b.state);
}

}  // namespace dicke::semi

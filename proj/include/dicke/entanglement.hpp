// entanglement.hpp: steady second moments and variance-based entanglement measures
//
// Moments are ordered products Sigma_ij = <v_i v_j> over v = (c, c^dag, d, d^dag),
// so vacuum has Sigma_01 = <c c^dag> = 1 and Sigma_10 = <c^dag c> = 0. Quadratures
// are X^theta = (e^{-i theta} c + e^{i theta} c^dag)/2 with vacuum variance 1/4.
//
// Above threshold the fluctuation Hamiltonian is the same about either
// superradiant branch, so every quantity here holds for both signs.

#pragma once

#include <optional>
#include <string>

#include "dicke/fluctuations.hpp"

namespace dicke::ent {

using cplx = std::complex<double>;
using fluct::Matrix4c;
using fluct::Vector4c;

enum class Method { lyapunov, frequency_integral };

const char* to_string(Method m) noexcept;

struct CovarianceReport {
    Matrix4c second_moments;
    Method method{Method::lyapunov};
    Phase phase{Phase::normal};
    double error_estimate{0.0};  // quadrature error bound; 0 for the Lyapunov solve
    bool converged{true};
};

// Solves M S + S M^T + D = 0. At lambda = 0 the atoms are undamped and
// decoupled; the decoupled vacuum is returned there. Throws NoSteadyStateError
// for any other marginal or unstable drift.
CovarianceReport covariance_lyapunov(const fluct::FluctuationSystem& sys);

// S_ij = (2 kappa / 2 pi) int R_i0(nu) R_j1(-nu) dnu by adaptive quadrature.
CovarianceReport covariance_integral(const DickeParams& p, double lambda, Phase phase,
                                     double abs_tol = 1e-10);

// Coefficient vector L with X = L^T v for X^theta of mode 0 (cavity) or 1 (atoms).
Vector4c quadrature(double theta, int mode);

// <X^2> for X = L^T v (fluctuation means vanish).
double variance(const Vector4c& l, const Matrix4c& sigma);

struct PhotonFlux {
    double fluctuation{0.0};  // 2 kappa <c^dag c>
    double coherent{0.0};     // 2 kappa |alpha_ss|^2, zero below threshold
};

PhotonFlux photon_flux(const DickeParams& p, double lambda);

struct EprVariance {
    double sum{0.0};      // <(du)^2> + <(dv)^2>, separable states give >= 1
    double product{0.0};  // <(du)^2><(dv)^2>, separable states give >= 1/4
    double theta{0.0};
    double phi{0.0};
};

// u = X_a^theta + X_b^phi, v = X_a^{theta+pi/2} - X_b^{phi+pi/2}, built from
// (c, d) above threshold.
EprVariance epr_variance(const DickeParams& p, double lambda, double theta, double phi);

// (2/kappa)(1/2pi)[int_{S<0} S_theta + int_{S<0} S_{theta+pi/2}] + 1
// Throws PoleError when a spectral line is narrower than the pole guard
// (atomic lines at lambda below about 1e-3 with omega0 = 1).
double v_est(const DickeParams& p, double lambda, double theta);

struct VEstComparison {
    double v_est{0.0};
    double epr_sum{0.0};  // internal EPR sum with phi = theta
    double gap{0.0};      // v_est - epr_sum
};

VEstComparison compare_v_est(const DickeParams& p, double lambda, double theta);

struct V12 {
    double v1{0.0};
    double v2{0.0};
    double gamma2{0.0};
    double omega0_tilde{0.0};
    double x_variance{0.0};  // <(dX_cd^{theta+pi/2})^2>
    double y_variance{0.0};  // <(dY_cd^theta)^2>

    // Same quantities recovered from band-integrated output spectra.
    double v1_output{0.0};
    double v2_output{0.0};
    double x_variance_output{0.0};
    double y_variance_output{0.0};
    bool windows_overlap{false};  // sign-region fallback was used
    // Output fields are NaN when a line is narrower than the spectral pole guard.
};

// Superradiant phase only (DomainError otherwise); requires omega == omega0.
V12 v1_v2(const DickeParams& p, double lambda, double theta);

}  // namespace dicke::ent

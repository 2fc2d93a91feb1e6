// fluctuations.hpp: linearized quantum fluctuations about the stable branch
//
// Basis ordering used by every matrix in this module (and downstream):
//
//     v = (c, c^dag, d, d^dag)
//
// In the normal phase c == a and d == b (Holstein-Primakoff boson); above
// threshold c and d are the fluctuations about the displaced mean fields.
// Both phases share the quadratic form
//
//     H = w_c c^dag c + w_d d^dag d + eta (d + d^dag)^2 + g (c + c^dag)(d + d^dag)
//
// with cavity damping kappa on c, so v' = M v + noise. The only nonzero noise
// correlation is <a_in(t) a_in^dag(t')> = delta(t - t'), which places the
// single diffusion entry D(0, 1) = 2 kappa (ordered products <v_i v_j>).

#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke::fluct {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;
using Matrix4d = Eigen::Matrix4d;

// Coefficients of the quadratic Hamiltonian above.
struct QuadraticHamiltonian {
    double cavity{0.0};   // w_c
    double atomic{0.0};   // w_d
    double squeeze{0.0};  // eta
    double coupling{0.0}; // g
};

QuadraticHamiltonian hamiltonian(const DickeParams& p, double lambda, Phase phase);

struct FluctuationSystem {
    Phase phase{Phase::normal};
    DickeParams params;   // lambda field holds the coupling used
    double mu{1.0};       // mu_tilde for this phase
    QuadraticHamiltonian h;
    Matrix4c drift;       // M
    Matrix4c diffusion;   // D
};

// Throws DomainError when the phase does not describe the stable branch at
// lambda (normal needs lambda <= lambda_c, superradiant lambda > lambda_c).
FluctuationSystem build_system(const DickeParams& p, double lambda, Phase phase);

// Same, with the phase picked by phase_for().
FluctuationSystem build_system(const DickeParams& p, double lambda);

// Drift in the real quadrature basis (x_c, p_c, x_d, p_d), x = (c + c^dag)/sqrt2.
Matrix4d real_drift(const FluctuationSystem& sys);

// Unitary T with real_drift = T M T^dag.
const Matrix4c& quadrature_transform();

struct EigenMode {
    cplx value;
    Vector4c vector;  // unit norm, (c, c^dag, d, d^dag) basis
};

// Unlabeled eigenpairs. Computed from the real quadrature form so that real
// eigenvalues carry an exactly zero imaginary part and complex ones come in
// exact conjugate pairs.
std::array<EigenMode, 4> eigenmodes(const FluctuationSystem& sys);

// Eigenvalues grouped into the photonic and atomic branches. Index 0 is the
// '+' member (positive imaginary part, or the more negative of a real pair),
// index 1 the '-' member.
struct BranchedEigenvalues {
    double lambda{0.0};
    Phase phase{Phase::normal};
    std::array<cplx, 2> photonic;
    std::array<cplx, 2> atomic;
    bool tie_broken{false};  // an exceptional-point tie was resolved on the way

    double max_real() const;
};

// Labels follow eigenvector-overlap continuation from the decoupled limit
// (lambda = 0 for the normal phase, large lambda for the superradiant phase).
BranchedEigenvalues eigenvalues(const FluctuationSystem& sys);

// Labeled eigenvalues at every grid point, phase chosen per point.
std::vector<BranchedEigenvalues> eigenvalue_sweep(const DickeParams& p,
                                                  std::span<const double> lambdas);

// Displayed closed forms, valid for omega == omega0 and 0 <= lambda <= lambda_c.
BranchedEigenvalues closed_form_eigenvalues(const DickeParams& p, double lambda);

// True when the photonic pair is purely real (at least two real eigenvalues).
bool photonic_pair_real(const FluctuationSystem& sys);

// Coefficients of one Bogoliubov mode, X = u_c c + u_d d + v_c c^dag + v_d d^dag.
struct ModeWeights {
    double u_c{0.0};
    double u_d{0.0};
    double v_c{0.0};
    double v_d{0.0};

    // |u_c|^2 + |u_d|^2 - |v_c|^2 - |v_d|^2, equal to 1 for a canonical mode.
    double symplectic_norm() const;
};

// [X, Y^dag] for two modes given by their weights.
double commutator_dagger(const ModeWeights& x, const ModeWeights& y);
// [X, Y] for two modes given by their weights.
double commutator(const ModeWeights& x, const ModeWeights& y);

struct NormalModes {
    Phase phase{Phase::normal};
    double omega_ph{0.0};
    double omega_at{0.0};
    ModeWeights photonic;
    ModeWeights atomic;
    double gamma2{0.0};        // superradiant mixing angle, 0 in the normal phase
    double omega0_tilde{0.0};  // superradiant only
};

// Bogoliubov diagonalization of the fluctuation Hamiltonian with the cavity
// damping left out. Requires omega == omega0. Throws SoftModeError when a
// mode frequency is not real and positive.
NormalModes normal_modes(const DickeParams& p, double lambda, Phase phase);

// tan(2 gamma) = 2 mu^2 / (1 - mu^2), gamma in [0, pi/4].
double mixing_angle(double mu);

// omega0 (1 + 1/mu) / 2
double omega0_tilde(double omega0, double mu);

}  // namespace dicke::fluct

// spectra.hpp: frequency-domain Langevin solution and cavity output spectra
//
// Fourier convention f(nu) = int f(t) e^{i nu t} dt. The fluctuation mode obeys
//
//     c(nu) = A(nu) a_in(nu) + B(nu) a_in^dag(-nu),
//     R(nu) = (-i nu - M)^{-1},  A = sqrt(2 kappa) R_00,  B = sqrt(2 kappa) R_01,
//
// and the output field a_out = sqrt(2 kappa) c - a_in has
//
//     F(nu) = sqrt(2 kappa) A(nu) - 1,  G(nu) = sqrt(2 kappa) B(nu).

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dicke/fluctuations.hpp"

namespace dicke::spectra {

using cplx = std::complex<double>;

enum class TransferPath {
    automatic,    // closed form on resonance, 4x4 solve otherwise
    closed_form,  // resonant closed forms only; DomainError when omega != omega0
    general,      // direct 4x4 frequency-domain solve
};

// Relative (to omega0) distance under which a grid point counts as a pole.
constexpr double kPoleTolerance = 1e-6;

class TransferFunctions {
public:
    TransferFunctions(const DickeParams& p, double lambda, Phase phase,
                      TransferPath path = TransferPath::automatic);
    // Phase picked by phase_for().
    TransferFunctions(const DickeParams& p, double lambda,
                      TransferPath path = TransferPath::automatic);

    const fluct::FluctuationSystem& system() const { return sys_; }
    Phase phase() const { return sys_.phase; }
    double mu() const { return sys_.mu; }
    bool uses_closed_form() const { return closed_form_; }

    // True when -i nu lies within kPoleTolerance * omega0 of an eigenvalue of M
    // that the cavity sees (all of them unless the coupling is zero).
    bool near_pole(double nu) const;

    // All of these throw PoleError near a pole.
    cplx A(double nu) const;
    cplx B(double nu) const;
    cplx F(double nu) const;
    cplx G(double nu) const;
    fluct::Matrix4c resolvent(double nu) const;

    // Eigenvalues of M; the poles of every transfer function sit at nu = i s.
    const std::array<cplx, 4>& poles() const { return eig_; }

private:
    bool decoupled() const { return sys_.h.coupling == 0.0; }
    void check_pole(double nu) const;
    std::array<cplx, 2> closed_ab(double nu) const;

    fluct::FluctuationSystem sys_;
    std::array<cplx, 4> eig_{};
    bool closed_form_{false};
};

enum class SpectrumKind { fluorescence, transmission, homodyne };

const char* to_string(SpectrumKind kind) noexcept;

enum PointFlag : int { kOk = 0, kPole = 1, kDomain = 2 };

struct SpectrumSeries {
    SpectrumKind kind{SpectrumKind::fluorescence};
    std::optional<double> theta;     // homodyne only
    std::vector<double> grid;
    std::vector<double> values;      // NaN where flagged
    std::vector<int> flags;          // PointFlag per grid point
    double coherent_weight{0.0};     // fluorescence: 2 kappa |alpha_ss|^2 delta weight at nu = 0
};

// 2001 points over [-3 omega0/mu, 3 omega0/mu].
std::vector<double> default_nu_grid(const DickeParams& p, double lambda);

// |G(nu)|^2
SpectrumSeries fluorescence(const DickeParams& p, double lambda, std::span<const double> nu,
                            TransferPath path = TransferPath::automatic);

// kappa^2 |R_00(nu_p)|^2, a unit-height Lorentzian at lambda = 0.
SpectrumSeries transmission(const DickeParams& p, double lambda, std::span<const double> nu,
                            TransferPath path = TransferPath::automatic);

// Normally ordered spectrum of X_theta = (a_out e^{-i theta} + h.c.)/2:
//   (1/4)[2 Re(e^{-2i theta} F(nu) G(-nu)) + |G(nu)|^2 + |G(-nu)|^2]
double homodyne_value(const TransferFunctions& tf, double theta, double nu);

SpectrumSeries homodyne(const DickeParams& p, double lambda, double theta,
                        std::span<const double> nu,
                        TransferPath path = TransferPath::automatic);

struct OptimalSqueezing {
    double theta_min{0.0};  // in [0, pi); NaN when flat
    double s_min{0.0};
    bool flat{false};       // objective independent of theta (G(0) = 0)
};

// Minimum over theta of the homodyne spectrum at nu = 0. Throws PoleError at lambda_c.
OptimalSqueezing optimal_squeezing(const DickeParams& p, double lambda,
                                   TransferPath path = TransferPath::automatic);

}  // namespace dicke::spectra

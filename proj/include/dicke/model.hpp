// model.hpp: parameter records, Raman-to-Dicke mapping, and critical couplings
//
// All library computations work in normalized units where omega0 is the unit of
// frequency. Hardware numbers live only in RamanPhysicalParams and are mapped
// once through to_dicke() (and optionally normalized()).

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dicke {

enum class Phase { normal, superradiant };

const char* to_string(Phase phase) noexcept;

// Raw hardware parameters of the balanced-Raman scheme. Every field is an
// angular frequency in `unit`, except N.
struct RamanPhysicalParams {
    double g_r{0.0};
    double g_s{0.0};
    double Omega_r{0.0};
    double Omega_s{0.0};
    double Delta_r{1.0};
    double Delta_s{1.0};
    double kappa{0.0};        // cavity amplitude decay
    double N{1.0};            // atom count
    double gamma{0.0};        // excited-state linewidth
    double delta_cav{0.0};    // cavity detuning
    double omega1{0.0};       // ground-state splitting
    double omega1_prime{0.0}; // reference splitting
    std::string unit{"rad/s"};
};

// Throws std::invalid_argument when a RamanPhysicalParams invariant is violated.
void validate(const RamanPhysicalParams& raman);

struct DickeParams {
    double omega{1.0};   // field-mode frequency
    double omega0{1.0};  // atomic splitting
    double lambda{0.0};  // coupling strength
    double kappa{0.2};   // cavity amplitude decay
    double N{1.0};       // atom number; only explicit sqrt(N) and N factors use it
};

void validate(const DickeParams& p);

// Pre-balance effective Hamiltonian coefficients.
struct EffectiveHamiltonianParams {
    double omega{0.0};
    double omega0{0.0};
    double delta{0.0};    // coefficient of a^dag a J_z
    double lambda_r{0.0};
    double lambda_s{0.0};
};

EffectiveHamiltonianParams effective_params(const RamanPhysicalParams& raman);

constexpr double kDefaultBalanceTolerance = 1e-9;

// Dicke-form parameters (same unit as the input). Throws BalanceError when
// either balance condition fails by more than `balance_tol` relative.
DickeParams to_dicke(const RamanPhysicalParams& raman,
                     double balance_tol = kDefaultBalanceTolerance);

// Rescales every frequency by omega0 so that omega0 == 1.
DickeParams normalized(const DickeParams& p);

struct RegimeCheck {
    std::string label;  // e.g. "|Delta_r|/Omega_r"
    double ratio{0.0};  // +inf when the compared scale is zero
    bool pass{false};
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    double margin{100.0};
    bool adiabatic{false};           // all checks pass
    double spontaneous_rate{0.0};    // gamma/4 (Omega_r/Delta_r)^2, same unit as gamma
};

constexpr double kDefaultAdiabaticMargin = 100.0;

RegimeReport validate_regime(const RamanPhysicalParams& raman,
                             double margin = kDefaultAdiabaticMargin);

// lambda_c = (1/2) sqrt((omega0/omega)(kappa^2 + omega^2))
double critical_coupling(const DickeParams& p);

struct CriticalValue {
    std::optional<double> closed_form;
    std::optional<double> numerical;
};

struct CriticalPoints {
    double lambda_c{0.0};
    CriticalValue lambda_prime;         // photonic pair turns real
    CriticalValue lambda_double_prime;  // photonic pair turns complex again
};

// Closed-form window values are only populated when omega == omega0. The
// numerical values come from the linearized drift matrix in either case.
CriticalPoints critical_window(const DickeParams& p);

// 1 in the normal phase, lambda_c^2/lambda^2 in the superradiant phase.
double mu_tilde(const DickeParams& p, double lambda, Phase phase);

// Phase of the stable semiclassical branch: normal for lambda <= lambda_c.
Phase phase_for(const DickeParams& p, double lambda);

// True when omega and omega0 agree to relative 1e-12.
bool resonant(const DickeParams& p);

}  // namespace dicke

#include "dicke/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dicke/errors.hpp"
#include "dicke/fluctuations.hpp"

namespace dicke {

const char* to_string(Phase phase) noexcept {
    return phase == Phase::normal ? "normal" : "superradiant";
}

void validate(const RamanPhysicalParams& r) {
    if (r.Delta_r == 0.0 || r.Delta_s == 0.0) {
        throw std::invalid_argument("RamanPhysicalParams: excited-state detunings must be nonzero");
    }
    if (!(r.N >= 1.0)) {
        throw std::invalid_argument("RamanPhysicalParams: N must be >= 1");
    }
    if (r.kappa < 0.0 || r.gamma < 0.0) {
        throw std::invalid_argument("RamanPhysicalParams: kappa and gamma must be >= 0");
    }
}

void validate(const DickeParams& p) {
    if (!(p.omega > 0.0) || !(p.omega0 > 0.0)) {
        throw std::invalid_argument("DickeParams: omega and omega0 must be positive");
    }
    if (p.kappa < 0.0 || p.lambda < 0.0) {
        throw std::invalid_argument("DickeParams: kappa and lambda must be >= 0");
    }
    if (!(p.N >= 1.0)) {
        throw std::invalid_argument("DickeParams: N must be >= 1");
    }
}

EffectiveHamiltonianParams effective_params(const RamanPhysicalParams& r) {
    validate(r);
    const double shift_r = r.g_r * r.g_r / r.Delta_r;
    const double shift_s = r.g_s * r.g_s / r.Delta_s;
    const double sqrtN = std::sqrt(r.N);

    EffectiveHamiltonianParams e;
    e.omega = 0.5 * r.N * (shift_r + shift_s) + r.delta_cav;
    e.omega0 = 0.25 * (r.Omega_r * r.Omega_r / r.Delta_r - r.Omega_s * r.Omega_s / r.Delta_s)
             + (r.omega1 - r.omega1_prime);
    e.delta = shift_r - shift_s;
    e.lambda_r = 0.5 * sqrtN * r.g_r * r.Omega_r / r.Delta_r;
    e.lambda_s = 0.5 * sqrtN * r.g_s * r.Omega_s / r.Delta_s;
    return e;
}

namespace {

double relative_residual(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

DickeParams to_dicke(const RamanPhysicalParams& r, double balance_tol) {
    validate(r);
    const double shift_r = r.g_r * r.g_r / r.Delta_r;
    const double shift_s = r.g_s * r.g_s / r.Delta_s;
    const double raman_r = r.g_r * r.Omega_r / r.Delta_r;
    const double raman_s = r.g_s * r.Omega_s / r.Delta_s;

    if (relative_residual(shift_r, shift_s) > balance_tol
        || relative_residual(raman_r, raman_s) > balance_tol) {
        std::ostringstream msg;
        msg << "Raman channels are not balanced: g_r^2/Delta_r - g_s^2/Delta_s = "
            << (shift_r - shift_s) << ", g_r Omega_r/Delta_r - g_s Omega_s/Delta_s = "
            << (raman_r - raman_s);
        throw BalanceError(msg.str(), shift_r - shift_s, raman_r - raman_s);
    }

    DickeParams p;
    p.omega = r.N * shift_r + r.delta_cav;
    p.omega0 = r.omega1 - r.omega1_prime;
    p.lambda = 0.5 * std::sqrt(r.N) * raman_r;
    p.kappa = r.kappa;
    p.N = r.N;
    return p;
}

DickeParams normalized(const DickeParams& p) {
    if (!(p.omega0 > 0.0)) {
        throw std::invalid_argument("normalized: omega0 must be positive");
    }
    DickeParams q = p;
    q.omega /= p.omega0;
    q.lambda /= p.omega0;
    q.kappa /= p.omega0;
    q.omega0 = 1.0;
    return q;
}

RegimeReport validate_regime(const RamanPhysicalParams& r, double margin) {
    validate(r);
    RegimeReport report;
    report.margin = margin;

    auto add = [&](const std::string& label, double detuning, double scale) {
        const double s = std::abs(scale);
        const double ratio = s == 0.0 ? std::numeric_limits<double>::infinity()
                                      : std::abs(detuning) / s;
        report.checks.push_back({label, ratio, ratio >= margin});
    };

    const struct {
        const char* name;
        double Delta;
        double Omega;
        double g;
    } channels[] = {{"r", r.Delta_r, r.Omega_r, r.g_r}, {"s", r.Delta_s, r.Omega_s, r.g_s}};

    for (const auto& ch : channels) {
        const std::string d = std::string("|Delta_") + ch.name + "|/";
        add(d + "Omega_r", ch.Delta, r.Omega_r);
        add(d + "Omega_s", ch.Delta, r.Omega_s);
        add(d + "g_r", ch.Delta, r.g_r);
        add(d + "g_s", ch.Delta, r.g_s);
        add(d + "kappa", ch.Delta, r.kappa);
        add(d + "delta_cav", ch.Delta, r.delta_cav);
        add(d + "gamma", ch.Delta, r.gamma);
    }

    report.adiabatic = std::all_of(report.checks.begin(), report.checks.end(),
                                   [](const RegimeCheck& c) { return c.pass; });
    const double x = r.Omega_r / r.Delta_r;
    report.spontaneous_rate = 0.25 * r.gamma * x * x;
    return report;
}

double critical_coupling(const DickeParams& p) {
    return 0.5 * std::sqrt((p.omega0 / p.omega) * (p.kappa * p.kappa + p.omega * p.omega));
}

bool resonant(const DickeParams& p) {
    return std::abs(p.omega - p.omega0) <= 1e-12 * std::max(std::abs(p.omega), std::abs(p.omega0));
}

Phase phase_for(const DickeParams& p, double lambda) {
    return lambda <= critical_coupling(p) ? Phase::normal : Phase::superradiant;
}

double mu_tilde(const DickeParams& p, double lambda, Phase phase) {
    if (phase == Phase::normal) {
        return 1.0;
    }
    const double lc = critical_coupling(p);
    if (!(lambda > lc)) {
        throw DomainError("mu_tilde: superradiant phase requires lambda > lambda_c");
    }
    return (lc * lc) / (lambda * lambda);
}

namespace {

// Bisection on the "photonic pair is real" predicate; `lo` and `hi` must
// bracket a change of the predicate.
double bisect_window_edge(const DickeParams& p, double lo, double hi, Phase phase) {
    const bool lo_real = fluct::photonic_pair_real(fluct::build_system(p, lo, phase));
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        const bool mid_real = fluct::photonic_pair_real(fluct::build_system(p, mid, phase));
        if (mid_real == lo_real) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

CriticalPoints critical_window(const DickeParams& p) {
    validate(p);
    CriticalPoints cp;
    const double lc = critical_coupling(p);
    cp.lambda_c = lc;

    if (resonant(p)) {
        const double k2 = p.kappa * p.kappa;
        cp.lambda_prime.closed_form = lc - k2 / (8.0 * p.omega0 * p.omega0);
        cp.lambda_double_prime.closed_form = lc + k2 / (16.0 * p.omega0);
    }

    if (p.kappa == 0.0) {
        cp.lambda_prime.numerical = lc;
        cp.lambda_double_prime.numerical = lc;
        return cp;
    }

    // Below threshold: complex at lambda = 0, real just below lambda_c.
    const double below = lc * (1.0 - 1e-12);
    if (!fluct::photonic_pair_real(fluct::build_system(p, 0.0, Phase::normal))
        && fluct::photonic_pair_real(fluct::build_system(p, below, Phase::normal))) {
        cp.lambda_prime.numerical = bisect_window_edge(p, 0.0, below, Phase::normal);
    }

    // Above threshold: real just above lambda_c, complex again further out.
    const double above = lc * (1.0 + 1e-12);
    if (fluct::photonic_pair_real(fluct::build_system(p, above, Phase::superradiant))) {
        double hi = 2.0 * lc;
        for (int i = 0; i < 40; ++i, hi *= 2.0) {
            if (!fluct::photonic_pair_real(fluct::build_system(p, hi, Phase::superradiant))) {
                cp.lambda_double_prime.numerical =
                    bisect_window_edge(p, above, hi, Phase::superradiant);
                break;
            }
        }
    }
    return cp;
}

}  // namespace dicke

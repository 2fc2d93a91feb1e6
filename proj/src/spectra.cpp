#include "dicke/spectra.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dicke/errors.hpp"
#include "dicke/semiclassical.hpp"

namespace dicke::spectra {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TransferFunctions::TransferFunctions(const DickeParams& p, double lambda, Phase phase,
                                     TransferPath path)
    : sys_(fluct::build_system(p, lambda, phase)) {
    Eigen::ComplexEigenSolver<fluct::Matrix4c> es(sys_.drift, false);
    for (int i = 0; i < 4; ++i) eig_[i] = es.eigenvalues()(i);

    switch (path) {
        case TransferPath::automatic:
            closed_form_ = resonant(p);
            break;
        case TransferPath::closed_form:
            if (!resonant(p)) {
                throw DomainError("TransferFunctions: closed forms require omega == omega0");
            }
            closed_form_ = true;
            break;
        case TransferPath::general:
            closed_form_ = false;
            break;
    }
}

TransferFunctions::TransferFunctions(const DickeParams& p, double lambda, TransferPath path)
    : TransferFunctions(p, lambda, phase_for(p, lambda), path) {}

bool TransferFunctions::near_pole(double nu) const {
    const double tol = kPoleTolerance * sys_.params.omega0;
    if (decoupled()) {
        // Undamped atomic poles sit on the real axis but never reach the cavity.
        const double k = sys_.params.kappa;
        const double w = sys_.params.omega;
        return std::abs(cplx(k, w - nu)) < tol || std::abs(cplx(k, -w - nu)) < tol;
    }
    for (const cplx& s : eig_) {
        if (std::abs(-I * nu - s) < tol) return true;
    }
    return false;
}

void TransferFunctions::check_pole(double nu) const {
    if (near_pole(nu)) {
        std::ostringstream msg;
        msg << "transfer function evaluated on a pole at nu = " << nu;
        throw PoleError(msg.str(), nu);
    }
}

fluct::Matrix4c TransferFunctions::resolvent(double nu) const {
    check_pole(nu);
    if (decoupled()) {
        for (const cplx& s : eig_) {
            if (std::abs(-I * nu - s) < kPoleTolerance * sys_.params.omega0) {
                throw PoleError("atomic block of the resolvent is singular at zero coupling", nu);
            }
        }
    }
    const fluct::Matrix4c lhs = -I * nu * fluct::Matrix4c::Identity() - sys_.drift;
    return lhs.partialPivLu().inverse();
}

std::array<cplx, 2> TransferFunctions::closed_ab(double nu) const {
    const double k = sys_.params.kappa;
    const double w0 = sys_.params.omega0;
    const double lam = sys_.params.lambda;
    const double mu = sys_.mu;
    const double rt = std::sqrt(2.0 * k);

    const cplx minus = k - I * (nu - w0);
    const cplx plus = k - I * (nu + w0);
    const double atom = nu * nu - w0 * w0 / (mu * mu);
    const cplx cross = -2.0 * I * w0 * lam * lam * mu;
    const cplx den = minus * plus * atom + 4.0 * w0 * w0 * lam * lam * mu;
    return {rt * (plus * atom + cross) / den, rt * cross / den};
}

cplx TransferFunctions::A(double nu) const {
    check_pole(nu);
    const double rt = std::sqrt(2.0 * sys_.params.kappa);
    if (decoupled()) return rt / (sys_.params.kappa - I * (nu - sys_.params.omega));
    if (closed_form_) return closed_ab(nu)[0];
    return rt * resolvent(nu)(0, 0);
}

cplx TransferFunctions::B(double nu) const {
    check_pole(nu);
    if (decoupled()) return 0.0;
    if (closed_form_) return closed_ab(nu)[1];
    return std::sqrt(2.0 * sys_.params.kappa) * resolvent(nu)(0, 1);
}

cplx TransferFunctions::F(double nu) const {
    return std::sqrt(2.0 * sys_.params.kappa) * A(nu) - 1.0;
}

cplx TransferFunctions::G(double nu) const {
    return std::sqrt(2.0 * sys_.params.kappa) * B(nu);
}

const char* to_string(SpectrumKind kind) noexcept {
    switch (kind) {
        case SpectrumKind::fluorescence: return "fluorescence";
        case SpectrumKind::transmission: return "transmission";
        case SpectrumKind::homodyne: return "homodyne";
    }
    return "unknown";
}

std::vector<double> default_nu_grid(const DickeParams& p, double lambda) {
    const double mu = mu_tilde(p, lambda, phase_for(p, lambda));
    const double half = 3.0 * p.omega0 / mu;
    constexpr int n = 2001;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = -half + 2.0 * half * i / (n - 1);
    }
    return grid;
}

namespace {

template <class Fn>
SpectrumSeries sample(SpectrumKind kind, std::span<const double> nu, const TransferFunctions& tf,
                      Fn&& value) {
    SpectrumSeries s;
    s.kind = kind;
    s.grid.assign(nu.begin(), nu.end());
    s.values.resize(nu.size());
    s.flags.resize(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (tf.near_pole(nu[i])) {
            s.values[i] = kNaN;
            s.flags[i] = kPole;
        } else {
            s.values[i] = value(nu[i]);
            s.flags[i] = kOk;
        }
    }
    return s;
}

}  // namespace

SpectrumSeries fluorescence(const DickeParams& p, double lambda, std::span<const double> nu,
                            TransferPath path) {
    const TransferFunctions tf(p, lambda, path);
    SpectrumSeries s = sample(SpectrumKind::fluorescence, nu, tf,
                              [&](double v) { return std::norm(tf.G(v)); });
    if (tf.phase() == Phase::superradiant) {
        for (const auto& b : semi::steady_states(p, lambda)) {
            if (b.sign == semi::Sign::plus) {
                s.coherent_weight = 2.0 * p.kappa * std::norm(b.state.alpha);
            }
        }
    }
    return s;
}

SpectrumSeries transmission(const DickeParams& p, double lambda, std::span<const double> nu,
                            TransferPath path) {
    const TransferFunctions tf(p, lambda, path);
    return sample(SpectrumKind::transmission, nu, tf,
                  [&](double v) { return 0.5 * p.kappa * std::norm(tf.A(v)); });
}

double homodyne_value(const TransferFunctions& tf, double theta, double nu) {
    const cplx f = tf.F(nu);
    const cplx g = tf.G(nu);
    const cplx gm = tf.G(-nu);
    return 0.25 * (2.0 * std::real(std::exp(-2.0 * I * theta) * f * gm) + std::norm(g)
                   + std::norm(gm));
}

SpectrumSeries homodyne(const DickeParams& p, double lambda, double theta,
                        std::span<const double> nu, TransferPath path) {
    const TransferFunctions tf(p, lambda, path);
    SpectrumSeries s = sample(SpectrumKind::homodyne, nu, tf, [&](double v) {
        if (tf.near_pole(-v)) return kNaN;
        return homodyne_value(tf, theta, v);
    });
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (std::isnan(s.values[i])) s.flags[i] = kPole;
    }
    s.theta = theta;
    return s;
}

OptimalSqueezing optimal_squeezing(const DickeParams& p, double lambda, TransferPath path) {
    const TransferFunctions tf(p, lambda, path);
    const cplx f = tf.F(0.0);
    const cplx g = tf.G(0.0);
    OptimalSqueezing out;
    out.s_min = 0.5 * std::abs(g) * (std::abs(g) - std::abs(f));
    if (std::abs(f * g) <= 1e-300) {
        out.flat = true;
        out.theta_min = kNaN;
        return out;
    }
    double theta = 0.5 * (std::arg(f * g) + std::numbers::pi);
    theta = std::fmod(theta, std::numbers::pi);
    if (theta < 0.0) theta += std::numbers::pi;
    out.theta_min = theta;
    return out;
}

}  // namespace dicke::spectra

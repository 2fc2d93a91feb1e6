#include "dicke/semiclassical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace dicke::semi {

namespace {

using Vec5 = std::array<double, 5>;  // (Re alpha, Im alpha, Re beta, Im beta, w)

Vec5 pack(const SemiclassicalState& s) {
    return {s.alpha.real(), s.alpha.imag(), s.beta.real(), s.beta.imag(), s.w};
}

SemiclassicalState unpack(const Vec5& x) {
    return {cplx(x[0], x[1]), cplx(x[2], x[3]), x[4]};
}

void real_rhs(const DickeParams& p, const Vec5& x, Vec5& dx) {
    const double s = p.lambda / std::sqrt(p.N);
    dx[0] = -p.kappa * x[0] + p.omega * x[1];
    dx[1] = -p.omega * x[0] - p.kappa * x[1] - 2.0 * s * x[2];
    dx[2] = p.omega0 * x[3];
    dx[3] = -p.omega0 * x[2] + 4.0 * s * x[0] * x[4];
    dx[4] = -4.0 * s * x[0] * x[3];
}

Eigen::Matrix<double, 5, 5> jacobian(const DickeParams& p, const Vec5& x) {
    const double s = p.lambda / std::sqrt(p.N);
    Eigen::Matrix<double, 5, 5> j = Eigen::Matrix<double, 5, 5>::Zero();
    j(0, 0) = -p.kappa;
    j(0, 1) = p.omega;
    j(1, 0) = -p.omega;
    j(1, 1) = -p.kappa;
    j(1, 2) = -2.0 * s;
    j(2, 3) = p.omega0;
    j(3, 0) = 4.0 * s * x[4];
    j(3, 2) = -p.omega0;
    j(3, 4) = 4.0 * s * x[0];
    j(4, 0) = -4.0 * s * x[3];
    j(4, 3) = -4.0 * s * x[0];
    return j;
}

}  // namespace

const char* to_string(Stability s) noexcept {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "unknown";
}

SemiclassicalState rhs(const DickeParams& p, const SemiclassicalState& s) {
    Vec5 dx{};
    real_rhs(p, pack(s), dx);
    return unpack(dx);
}

std::vector<SteadyBranch> steady_states(const DickeParams& p, double lambda) {
    validate(p);
    DickeParams q = p;
    q.lambda = lambda;
    const double lc = critical_coupling(q);
    const double half = 0.5 * p.N;

    std::vector<SteadyBranch> out;
    SteadyBranch lower;
    lower.lambda = lambda;
    lower.state.w = -half;
    lower.phase = Phase::normal;
    lower.stability = lambda < lc ? Stability::stable
                    : lambda == lc ? Stability::marginal
                                   : Stability::unstable;
    SteadyBranch upper;
    upper.lambda = lambda;
    upper.state.w = half;
    upper.phase = Phase::normal;
    upper.stability = Stability::unstable;
    out.push_back(lower);
    out.push_back(upper);

    if (lambda > lc) {
        const double mu = lc * lc / (lambda * lambda);
        const double r = std::sqrt(1.0 - mu * mu);
        const cplx amp = std::sqrt(p.N) * lambda / cplx(p.omega, -p.kappa) * r;
        for (const Sign sign : {Sign::plus, Sign::minus}) {
            const double sg = sign == Sign::plus ? 1.0 : -1.0;
            SteadyBranch b;
            b.lambda = lambda;
            b.state.alpha = sg * amp;
            b.state.beta = -sg * half * r;
            b.state.w = -half * mu;
            b.phase = Phase::superradiant;
            b.sign = sign;
            b.stability = Stability::stable;
            out.push_back(b);
        }
    }
    return out;
}

Trajectory integrate(const DickeParams& p, const SemiclassicalState& s0,
                     double t_final, double dt) {
    validate(p);
    if (!(dt > 0.0) || !(t_final > 0.0)) {
        throw std::invalid_argument("integrate: dt and t_final must be positive");
    }
    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<Vec5>;

    const double c0 = s0.pseudo_spin_norm();
    const auto system = [&p](const Vec5& x, Vec5& dx, double) { real_rhs(p, x, dx); };
    const auto drift_of = [c0](const Vec5& x) {
        const double c = x[4] * x[4] + x[2] * x[2] + x[3] * x[3];
        return c0 > 0.0 ? std::abs(c - c0) / c0 : std::abs(c - c0);
    };

    double tol = 1e-12;
    double worst = 0.0;
    for (int attempt = 0; attempt < 3; ++attempt, tol *= 1e-1) {
        Trajectory traj;
        Vec5 x = pack(s0);
        const auto observer = [&](const Vec5& state, double t) {
            traj.times.push_back(t);
            traj.states.push_back(unpack(state));
            traj.max_conservation_drift = std::max(traj.max_conservation_drift, drift_of(state));
        };
        const std::size_t steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
        odeint::integrate_n_steps(odeint::make_dense_output(tol, tol, Stepper()), system, x,
                                  0.0, t_final / static_cast<double>(steps), steps, observer);
        worst = traj.max_conservation_drift;
        if (worst <= kMaxConservationDrift) {
            return traj;
        }
    }
    throw IntegrationError("integrate: conservation drift exceeds 1e-6", worst);
}

StabilityReport stability(const DickeParams& p, const SemiclassicalState& s) {
    validate(p);
    const Vec5 x = pack(s);
    Vec5 dx{};
    real_rhs(p, x, dx);
    double residual = 0.0;
    for (double v : dx) residual = std::max(residual, std::abs(v));
    const double scale = std::max({1.0, p.N, p.omega, p.omega0});
    if (residual > 1e-8 * scale) {
        throw std::invalid_argument("stability: state is not a fixed point");
    }

    // Orthonormal basis of the tangent space: complement of grad(w^2 + |beta|^2).
    Eigen::Matrix<double, 5, 1> grad;
    grad << 0.0, 0.0, 2.0 * x[2], 2.0 * x[3], 2.0 * x[4];
    Eigen::Matrix<double, 5, 5> j = jacobian(p, x);
    Eigen::MatrixXd restricted;
    if (grad.norm() > 0.0) {
        Eigen::HouseholderQR<Eigen::Matrix<double, 5, 1>> qr(grad);
        const Eigen::Matrix<double, 5, 5> q = qr.householderQ();
        const Eigen::Matrix<double, 5, 4> t = q.rightCols<4>();
        restricted = t.transpose() * j * t;
    } else {
        restricted = j;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(restricted, false);
    StabilityReport report;
    report.max_real = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        report.growth_rates.push_back(es.eigenvalues()(i));
        report.max_real = std::max(report.max_real, es.eigenvalues()(i).real());
    }
    std::sort(report.growth_rates.begin(), report.growth_rates.end(),
              [](cplx a, cplx b) { return a.real() > b.real(); });

    const double tol = 1e-12 * std::max({p.omega, p.omega0, p.kappa, p.lambda, 1.0});
    report.stability = report.max_real < -tol ? Stability::stable
                     : report.max_real > tol  ? Stability::unstable
                                              : Stability::marginal;
    return report;
}

}  // namespace dicke::semi

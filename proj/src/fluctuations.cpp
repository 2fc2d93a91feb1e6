#include "dicke/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dicke/errors.hpp"

namespace dicke::fluct {

namespace {

constexpr cplx I{0.0, 1.0};

}  // namespace

QuadraticHamiltonian hamiltonian(const DickeParams& p, double lambda, Phase phase) {
    QuadraticHamiltonian h;
    h.cavity = p.omega;
    if (phase == Phase::normal) {
        h.atomic = p.omega0;
        h.squeeze = 0.0;
        h.coupling = lambda;
        return h;
    }
    const double mu = mu_tilde(p, lambda, phase);
    h.atomic = p.omega0 * (1.0 + mu) / (2.0 * mu);
    h.squeeze = p.omega0 * (1.0 - mu) * (3.0 + mu) / (8.0 * mu * (1.0 + mu));
    h.coupling = lambda * mu * std::sqrt(2.0 / (1.0 + mu));
    return h;
}

FluctuationSystem build_system(const DickeParams& p, double lambda, Phase phase) {
    validate(p);
    if (!(lambda >= 0.0)) {
        throw DomainError("build_system: lambda must be >= 0");
    }
    const double lc = critical_coupling(p);
    if (phase == Phase::normal && lambda > lc) {
        throw DomainError("build_system: normal phase is unstable for lambda > lambda_c");
    }
    if (phase == Phase::superradiant && !(lambda > lc)) {
        throw DomainError("build_system: superradiant phase requires lambda > lambda_c");
    }

    FluctuationSystem sys;
    sys.phase = phase;
    sys.params = p;
    sys.params.lambda = lambda;
    sys.mu = mu_tilde(p, lambda, phase);
    sys.h = hamiltonian(p, lambda, phase);

    const double k = p.kappa;
    const double wc = sys.h.cavity;
    const double wd = sys.h.atomic;
    const double eta = sys.h.squeeze;
    const double g = sys.h.coupling;

    Matrix4c& m = sys.drift;
    m << -k - I * wc, 0.0, -I * g, -I * g,
         0.0, -k + I * wc, I * g, I * g,
         -I * g, -I * g, -I * (wd + 2.0 * eta), -2.0 * I * eta,
         I * g, I * g, 2.0 * I * eta, I * (wd + 2.0 * eta);

    sys.diffusion.setZero();
    sys.diffusion(0, 1) = 2.0 * k;
    return sys;
}

FluctuationSystem build_system(const DickeParams& p, double lambda) {
    return build_system(p, lambda, phase_for(p, lambda));
}

const Matrix4c& quadrature_transform() {
    static const Matrix4c t = [] {
        const double r = 1.0 / std::sqrt(2.0);
        Matrix4c m = Matrix4c::Zero();
        for (int k = 0; k < 2; ++k) {
            m(2 * k, 2 * k) = r;
            m(2 * k, 2 * k + 1) = r;
            m(2 * k + 1, 2 * k) = -I * r;
            m(2 * k + 1, 2 * k + 1) = I * r;
        }
        return m;
    }();
    return t;
}

Matrix4d real_drift(const FluctuationSystem& sys) {
    const Matrix4c& t = quadrature_transform();
    return (t * sys.drift * t.adjoint()).real();
}

std::array<EigenMode, 4> eigenmodes(const FluctuationSystem& sys) {
    Eigen::EigenSolver<Matrix4d> es(real_drift(sys), true);
    const Matrix4c back = quadrature_transform().adjoint();
    std::array<EigenMode, 4> out;
    for (int i = 0; i < 4; ++i) {
        out[i].value = es.eigenvalues()(i);
        out[i].vector = (back * es.eigenvectors().col(i)).normalized();
    }
    return out;
}

bool photonic_pair_real(const FluctuationSystem& sys) {
    Eigen::EigenSolver<Matrix4d> es(real_drift(sys), false);
    int real_count = 0;
    for (int i = 0; i < 4; ++i) {
        if (es.eigenvalues()(i).imag() == 0.0) {
            ++real_count;
        }
    }
    return real_count >= 2;
}

double BranchedEigenvalues::max_real() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& z : photonic) m = std::max(m, z.real());
    for (const auto& z : atomic) m = std::max(m, z.real());
    return m;
}

namespace {

using Basis = Eigen::Matrix<cplx, 4, 2>;

// '+' member first: positive imaginary part, or the more negative real one.
std::array<cplx, 2> ordered_pair(cplx a, cplx b) {
    if (a.imag() != b.imag()) {
        return a.imag() > b.imag() ? std::array{a, b} : std::array{b, a};
    }
    return a.real() <= b.real() ? std::array{a, b} : std::array{b, a};
}

// Invariant subspace belonging to the eigenvalue pair {a, b}: the kernel of
// (M - a)(M - b). Unlike the eigenvectors themselves it stays continuous
// through a collision of a and b.
Basis pair_subspace(const Matrix4c& m, cplx a, cplx b) {
    const Matrix4c id = Matrix4c::Identity();
    const Matrix4c p = (m - a * id) * (m - b * id);
    Eigen::JacobiSVD<Matrix4c> svd(p, Eigen::ComputeFullV);
    return svd.matrixV().rightCols<2>();
}

double subspace_overlap(const Basis& x, const Basis& y) {
    return (x.adjoint() * y).squaredNorm();
}

bool conjugation_compatible(cplx a, cplx b) {
    if (a.imag() == 0.0 && b.imag() == 0.0) {
        return true;
    }
    return a.imag() != 0.0 && a == std::conj(b);
}

struct TrackState {
    double lambda{0.0};
    std::array<cplx, 2> photonic;
    std::array<cplx, 2> atomic;
    Basis photonic_space;
    Basis atomic_space;
};

struct Candidate {
    std::array<int, 2> ph;
    std::array<int, 2> at;
    double score{0.0};
};

constexpr std::array<std::array<int, 4>, 3> kPartitions{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};

// Tie rule at a branch collision: the photonic pair has the smaller Re + |Im|.
double tie_key(cplx a, cplx b) {
    return 0.5 * (a.real() + b.real()) + 0.5 * (std::abs(a.imag()) + std::abs(b.imag()));
}

class BranchTracker {
public:
    BranchTracker(const DickeParams& p, Phase phase) : p_(p), phase_(phase) {}

    // Seeds from the decoupled cavity and atom blocks at lambda = 0.
    void seed_decoupled() {
        state_.lambda = 0.0;
        state_.photonic = ordered_pair(cplx(-p_.kappa, p_.omega), cplx(-p_.kappa, -p_.omega));
        state_.atomic = ordered_pair(cplx(0.0, p_.omega0), cplx(0.0, -p_.omega0));
        state_.photonic_space.setZero();
        state_.atomic_space.setZero();
        state_.photonic_space(0, 0) = 1.0;
        state_.photonic_space(1, 1) = 1.0;
        state_.atomic_space(2, 0) = 1.0;
        state_.atomic_space(3, 1) = 1.0;
    }

    // Seeds far above threshold where the atomic pair has the larger |Im|.
    void seed_far(double lambda) {
        const FluctuationSystem sys = build_system(p_, lambda, phase_);
        const auto modes = eigenmodes(sys);
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::abs(modes[a].value.imag()) < std::abs(modes[b].value.imag());
        });
        set_state(sys, modes, {idx[0], idx[1]}, {idx[2], idx[3]}, lambda);
    }

    const TrackState& state() const { return state_; }
    bool tie_broken() const { return tie_broken_; }

    void advance_to(double target) {
        const double lc = critical_coupling(p_);
        double h = target - state_.lambda;
        while (state_.lambda != target) {
            const double hmax = 0.05 * std::max(std::abs(state_.lambda), lc);
            const double hmin = 1e-11 * std::max(std::abs(state_.lambda), lc);
            if (std::abs(h) > hmax) h = std::copysign(hmax, h);
            double next = state_.lambda + h;
            if ((h > 0 && next > target) || (h < 0 && next < target)) {
                next = target;
                h = target - state_.lambda;
            }
            if (try_step(next, std::abs(h) <= hmin)) {
                h *= 1.5;
            } else {
                h *= 0.5;
            }
        }
    }

private:
    bool try_step(double next, bool force) {
        const FluctuationSystem sys = build_system(p_, next, phase_);
        const auto modes = eigenmodes(sys);

        std::vector<Candidate> candidates;
        // Rounding can break exact conjugation right at a four-fold collision;
        // then every partition is scored.
        for (const bool strict : {true, false}) {
            for (const auto& part : kPartitions) {
                const int i = part[0], j = part[1], k = part[2], l = part[3];
                if (strict && (!conjugation_compatible(modes[i].value, modes[j].value)
                               || !conjugation_compatible(modes[k].value, modes[l].value))) {
                    continue;
                }
                const Basis s1 = pair_subspace(sys.drift, modes[i].value, modes[j].value);
                const Basis s2 = pair_subspace(sys.drift, modes[k].value, modes[l].value);
                candidates.push_back({{i, j}, {k, l},
                                      subspace_overlap(state_.photonic_space, s1)
                                          + subspace_overlap(state_.atomic_space, s2)});
                candidates.push_back({{k, l}, {i, j},
                                      subspace_overlap(state_.photonic_space, s2)
                                          + subspace_overlap(state_.atomic_space, s1)});
            }
            if (!candidates.empty()) break;
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

        const double margin = candidates.size() > 1
                                  ? candidates[0].score - candidates[1].score
                                  : std::numeric_limits<double>::infinity();
        constexpr double kMinMargin = 0.5;
        if (margin >= kMinMargin) {
            set_state(sys, modes, candidates[0].ph, candidates[0].at, next);
            return true;
        }
        // Next to an exceptional point between the branches the two pair
        // subspaces nearly coincide and overlaps cannot tell them apart.
        const bool degenerate =
            subspace_overlap(state_.photonic_space, state_.atomic_space) > 1.0;
        if (!force && !degenerate) {
            return false;
        }

        // Fall back to the tie rule.
        const Candidate* best = &candidates[0];
        double best_key = std::numeric_limits<double>::infinity();
        for (const auto& c : candidates) {
            const double key = tie_key(modes[c.ph[0]].value, modes[c.ph[1]].value)
                             - tie_key(modes[c.at[0]].value, modes[c.at[1]].value);
            if (key < best_key) {
                best_key = key;
                best = &c;
            }
        }
        tie_broken_ = true;
        set_state(sys, modes, best->ph, best->at, next);
        return true;
    }

    void set_state(const FluctuationSystem& sys, const std::array<EigenMode, 4>& modes,
                   std::array<int, 2> ph, std::array<int, 2> at, double lambda) {
        state_.lambda = lambda;
        state_.photonic = ordered_pair(modes[ph[0]].value, modes[ph[1]].value);
        state_.atomic = ordered_pair(modes[at[0]].value, modes[at[1]].value);
        state_.photonic_space = pair_subspace(sys.drift, modes[ph[0]].value, modes[ph[1]].value);
        state_.atomic_space = pair_subspace(sys.drift, modes[at[0]].value, modes[at[1]].value);
    }

    DickeParams p_;
    Phase phase_;
    TrackState state_;
    bool tie_broken_{false};
};

double far_seed(const DickeParams& p) {
    return 10.0 * critical_coupling(p);
}

BranchedEigenvalues to_result(const BranchTracker& t, Phase phase) {
    BranchedEigenvalues out;
    out.lambda = t.state().lambda;
    out.phase = phase;
    out.photonic = t.state().photonic;
    out.atomic = t.state().atomic;
    out.tie_broken = t.tie_broken();
    return out;
}

}  // namespace

BranchedEigenvalues eigenvalues(const FluctuationSystem& sys) {
    const double lambda = sys.params.lambda;
    BranchTracker tracker(sys.params, sys.phase);
    if (sys.phase == Phase::normal) {
        tracker.seed_decoupled();
    } else {
        tracker.seed_far(std::max(lambda, far_seed(sys.params)));
    }
    tracker.advance_to(lambda);
    return to_result(tracker, sys.phase);
}

std::vector<BranchedEigenvalues> eigenvalue_sweep(const DickeParams& p,
                                                  std::span<const double> lambdas) {
    std::vector<BranchedEigenvalues> out(lambdas.size());
    std::vector<std::size_t> below, above;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        (phase_for(p, lambdas[i]) == Phase::normal ? below : above).push_back(i);
    }
    std::sort(below.begin(), below.end(),
              [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
    std::sort(above.begin(), above.end(),
              [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });

    if (!below.empty()) {
        BranchTracker t(p, Phase::normal);
        t.seed_decoupled();
        for (std::size_t i : below) {
            if (lambdas[i] < 0.0) throw DomainError("eigenvalue_sweep: lambda must be >= 0");
            t.advance_to(lambdas[i]);
            out[i] = to_result(t, Phase::normal);
        }
    }
    if (!above.empty()) {
        BranchTracker t(p, Phase::superradiant);
        t.seed_far(std::max(lambdas[above.front()], far_seed(p)));
        for (std::size_t i : above) {
            t.advance_to(lambdas[i]);
            out[i] = to_result(t, Phase::superradiant);
        }
    }
    return out;
}

BranchedEigenvalues closed_form_eigenvalues(const DickeParams& p, double lambda) {
    validate(p);
    if (!resonant(p)) {
        throw DomainError("closed_form_eigenvalues: requires omega == omega0");
    }
    if (lambda < 0.0 || lambda > critical_coupling(p)) {
        throw DomainError("closed_form_eigenvalues: requires 0 <= lambda <= lambda_c");
    }
    const double w0 = p.omega0;
    const double k = p.kappa;
    const cplx big = std::sqrt(cplx(w0 * w0 * (4.0 * lambda * lambda - k * k), 0.0));
    const cplx base(w0 * w0 - 0.25 * k * k, 0.0);

    // Upper member takes the upper sign inside the radical, lower the lower;
    // below kappa/2 Lambda is imaginary and this keeps the pairs conjugate.
    auto pair = [&](cplx upper, cplx lower) {
        return ordered_pair(-0.5 * k + I * std::sqrt(base + upper),
                            -0.5 * k - I * std::sqrt(base + lower));
    };

    BranchedEigenvalues out;
    out.lambda = lambda;
    out.phase = Phase::normal;
    if (lambda < 0.5 * k) {
        out.photonic = pair(big, -big);
        out.atomic = pair(-big, big);
    } else {
        out.photonic = pair(-big, -big);
        out.atomic = pair(big, big);
    }
    return out;
}

double ModeWeights::symplectic_norm() const {
    return u_c * u_c + u_d * u_d - v_c * v_c - v_d * v_d;
}

double commutator_dagger(const ModeWeights& x, const ModeWeights& y) {
    return x.u_c * y.u_c + x.u_d * y.u_d - x.v_c * y.v_c - x.v_d * y.v_d;
}

double commutator(const ModeWeights& x, const ModeWeights& y) {
    return x.u_c * y.v_c - x.v_c * y.u_c + x.u_d * y.v_d - x.v_d * y.u_d;
}

double mixing_angle(double mu) {
    return 0.5 * std::atan2(2.0 * mu * mu, 1.0 - mu * mu);
}

double omega0_tilde(double omega0, double mu) {
    return 0.5 * omega0 * (1.0 + 1.0 / mu);
}

NormalModes normal_modes(const DickeParams& p, double lambda, Phase phase) {
    validate(p);
    if (!resonant(p)) {
        throw DomainError("normal_modes: requires omega == omega0");
    }
    const double w0 = p.omega0;
    NormalModes nm;
    nm.phase = phase;

    if (phase == Phase::normal) {
        if (lambda < 0.0 || lambda > critical_coupling(p)) {
            throw DomainError("normal_modes: normal phase requires 0 <= lambda <= lambda_c");
        }
        const double ph2 = w0 * (w0 - 2.0 * lambda);
        if (!(ph2 > 0.0)) {
            throw SoftModeError("normal_modes: photonic mode frequency is not real", "photonic");
        }
        nm.omega_ph = std::sqrt(ph2);
        nm.omega_at = std::sqrt(w0 * (w0 + 2.0 * lambda));

        auto weights = [&](double wx, double sign) {
            const double s = 2.0 * std::sqrt(2.0 * w0 * wx);
            return ModeWeights{(wx + w0) / s, sign * (wx + w0) / s,
                               (wx - w0) / s, sign * (wx - w0) / s};
        };
        nm.photonic = weights(nm.omega_ph, -1.0);
        nm.atomic = weights(nm.omega_at, 1.0);
        return nm;
    }

    const double mu = mu_tilde(p, lambda, phase);
    const QuadraticHamiltonian h = hamiltonian(p, lambda, phase);
    // Squared frequencies: eigenvalues of [[w^2, 2g sqrt(w wd)], [., w0^2/mu^2]].
    const double a = h.cavity * h.cavity;
    const double d = w0 * w0 / (mu * mu);
    const double b = 2.0 * h.coupling * std::sqrt(h.cavity * h.atomic);
    const double mean = 0.5 * (a + d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    const double ph2 = mean - half_gap;
    const double at2 = mean + half_gap;
    if (!(ph2 > 0.0)) {
        throw SoftModeError("normal_modes: photonic mode frequency is not real", "photonic");
    }
    nm.omega_ph = std::sqrt(ph2);
    nm.omega_at = std::sqrt(at2);
    nm.gamma2 = mixing_angle(mu);
    nm.omega0_tilde = omega0_tilde(w0, mu);

    const double c = std::cos(nm.gamma2);
    const double s = std::sin(nm.gamma2);
    const double wt = nm.omega0_tilde;
    auto weights = [&](double wx, double cc, double cd) {
        const double rc = 0.5 * cc / std::sqrt(w0 * wx);
        const double rd = 0.5 * cd / std::sqrt(wt * wx);
        return ModeWeights{rc * (wx + w0), rd * (wx + wt), rc * (wx - w0), rd * (wx - wt)};
    };
    nm.photonic = weights(nm.omega_ph, c, -s);
    nm.atomic = weights(nm.omega_at, s, c);
    return nm;
}

}  // namespace dicke::fluct

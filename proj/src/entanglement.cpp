#include "dicke/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "dicke/errors.hpp"
#include "dicke/quadrature.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/spectra.hpp"

namespace dicke::ent {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

Matrix4c decoupled_vacuum() {
    Matrix4c s = Matrix4c::Zero();
    s(0, 1) = 1.0;
    s(2, 3) = 1.0;
    return s;
}

std::array<cplx, 4> drift_eigenvalues(const Matrix4c& m) {
    Eigen::ComplexEigenSolver<Matrix4c> es(m, false);
    std::array<cplx, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

}  // namespace

const char* to_string(Method m) noexcept {
    return m == Method::lyapunov ? "lyapunov" : "frequency_integral";
}

CovarianceReport covariance_lyapunov(const fluct::FluctuationSystem& sys) {
    CovarianceReport r;
    r.method = Method::lyapunov;
    r.phase = sys.phase;
    if (sys.params.lambda == 0.0) {
        r.second_moments = decoupled_vacuum();
        return r;
    }

    double max_re = -std::numeric_limits<double>::infinity();
    for (const cplx& e : drift_eigenvalues(sys.drift)) max_re = std::max(max_re, e.real());
    const double scale = std::max({sys.params.omega, sys.params.omega0, sys.params.kappa});
    if (!(max_re < -1e-14 * scale)) {
        throw NoSteadyStateError("covariance_lyapunov: drift matrix is not strictly stable",
                                 max_re);
    }

    // (I (x) M + M (x) I) vec(S) = -vec(D), column-major vec. Deep in the
    // superradiant phase the atomic damping falls like mu^4 and the solve loses
    // most of its digits in double, so it runs in long double.
    using cld = std::complex<long double>;
    using Matrix4l = Eigen::Matrix<cld, 4, 4>;
    using Matrix16l = Eigen::Matrix<cld, 16, 16>;
    using Vector16l = Eigen::Matrix<cld, 16, 1>;
    const Matrix4l m = sys.drift.cast<cld>();
    const Matrix4l id = Matrix4l::Identity();
    Matrix16l op;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            op.block<4, 4>(4 * i, 4 * j) = id(i, j) * m + m(i, j) * id;
        }
    }
    const Matrix4l d = sys.diffusion.cast<cld>();
    const Vector16l rhs = -Eigen::Map<const Vector16l>(d.data());
    const Vector16l x = op.fullPivLu().solve(rhs);
    r.second_moments = Eigen::Map<const Matrix4l>(x.data()).cast<cplx>();
    return r;
}

CovarianceReport covariance_integral(const DickeParams& p, double lambda, Phase phase,
                                     double abs_tol) {
    const fluct::FluctuationSystem sys = fluct::build_system(p, lambda, phase);
    CovarianceReport r;
    r.method = Method::frequency_integral;
    r.phase = phase;
    if (lambda == 0.0) {
        r.second_moments = decoupled_vacuum();
        return r;
    }

    const double k = p.kappa;
    const Matrix4c m = sys.drift;
    const auto integrand = [&](double nu) {
        const Matrix4c rp = (-I * nu * Matrix4c::Identity() - m).partialPivLu().inverse();
        const Matrix4c rm = (I * nu * Matrix4c::Identity() - m).partialPivLu().inverse();
        // S_ij += R_i0(nu) R_j1(-nu)
        const Matrix4c outer = rp.col(0) * rm.col(1).transpose();
        return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(outer.data(), 16));
    };

    std::vector<double> cuts{0.0};
    for (const cplx& e : drift_eigenvalues(m)) cuts.push_back(-e.imag());

    quad::Options opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 50000;
    const quad::Result q = quad::integrate_real_line(integrand, cuts, opt);

    const double pref = 2.0 * k / (2.0 * kPi);
    r.second_moments = pref * Eigen::Map<const Matrix4c>(q.value.data());
    r.error_estimate = pref * q.error;
    r.converged = q.converged;
    return r;
}

Vector4c quadrature(double theta, int mode) {
    Vector4c l = Vector4c::Zero();
    l(2 * mode) = 0.5 * std::exp(-I * theta);
    l(2 * mode + 1) = 0.5 * std::exp(I * theta);
    return l;
}

double variance(const Vector4c& l, const Matrix4c& sigma) {
    return (l.transpose() * sigma * l).value().real();
}

PhotonFlux photon_flux(const DickeParams& p, double lambda) {
    const auto sys = fluct::build_system(p, lambda);
    const CovarianceReport cov = covariance_lyapunov(sys);
    PhotonFlux f;
    f.fluctuation = 2.0 * p.kappa * cov.second_moments(1, 0).real();
    if (sys.phase == Phase::superradiant) {
        for (const auto& b : semi::steady_states(p, lambda)) {
            if (b.sign == semi::Sign::plus) f.coherent = 2.0 * p.kappa * std::norm(b.state.alpha);
        }
    }
    return f;
}

EprVariance epr_variance(const DickeParams& p, double lambda, double theta, double phi) {
    const CovarianceReport cov = covariance_lyapunov(fluct::build_system(p, lambda));
    const Vector4c u = quadrature(theta, 0) + quadrature(phi, 1);
    const Vector4c v = quadrature(theta + 0.5 * kPi, 0) - quadrature(phi + 0.5 * kPi, 1);
    const double du = variance(u, cov.second_moments);
    const double dv = variance(v, cov.second_moments);
    return {du + dv, du * dv, theta, phi};
}

namespace {

std::vector<double> spectral_cuts(const spectra::TransferFunctions& tf) {
    std::vector<double> cuts{0.0};
    for (const cplx& e : tf.poles()) {
        cuts.push_back(e.imag());
        cuts.push_back(-e.imag());
    }
    return cuts;
}

}  // namespace

double v_est(const DickeParams& p, double lambda, double theta) {
    const spectra::TransferFunctions tf(p, lambda);
    if (lambda == 0.0) {
        return 1.0;
    }
    const auto integrand = [&](double nu) {
        Eigen::VectorXcd out(2);
        out(0) = std::min(spectra::homodyne_value(tf, theta, nu), 0.0);
        out(1) = std::min(spectra::homodyne_value(tf, theta + 0.5 * kPi, nu), 0.0);
        return out;
    };
    const auto cuts = spectral_cuts(tf);
    quad::Options opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-9;
    const quad::Result q = quad::integrate_real_line(integrand, cuts, opt);
    return (2.0 / p.kappa) / (2.0 * kPi) * (q.value(0).real() + q.value(1).real()) + 1.0;
}

VEstComparison compare_v_est(const DickeParams& p, double lambda, double theta) {
    VEstComparison c;
    c.v_est = v_est(p, lambda, theta);
    c.epr_sum = epr_variance(p, lambda, theta, theta).sum;
    c.gap = c.v_est - c.epr_sum;
    return c;
}

namespace {

struct Band {
    double center{0.0};
    double half_width{0.0};
};

// Resonance |Im| and half-width 5 max|Re| of one labeled eigenvalue pair.
Band band_of(const std::array<cplx, 2>& pair) {
    Band b;
    b.center = std::abs(pair[0].imag());
    b.half_width = 5.0 * std::max(std::abs(pair[0].real()), std::abs(pair[1].real()));
    return b;
}

// (1/2pi) int over {nu : ||nu| - center| <= half_width} of S_theta.
double band_variance(const spectra::TransferFunctions& tf, double theta, const Band& b,
                     const std::vector<double>& cuts) {
    const double lo = std::max(0.0, b.center - b.half_width);
    const double hi = b.center + b.half_width;
    const auto integrand = [&](double nu) {
        Eigen::VectorXcd out(1);
        out(0) = spectra::homodyne_value(tf, theta, nu);
        return out;
    };
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    double total = 0.0;
    std::vector<double> pts{lo};
    for (double c : cuts) {
        if (c > lo && c < hi) pts.push_back(c);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] > pts[i]) total += quad::integrate(integrand, pts[i], pts[i + 1], opt).value(0).real();
    }
    return 2.0 * total / (2.0 * kPi);
}

// (1/2pi) int over the real line of min(S_theta, 0).
double negative_part(const spectra::TransferFunctions& tf, double theta,
                     const std::vector<double>& cuts) {
    const auto integrand = [&](double nu) {
        Eigen::VectorXcd out(1);
        out(0) = std::min(spectra::homodyne_value(tf, theta, nu), 0.0);
        return out;
    };
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-10;
    return quad::integrate_real_line(integrand, cuts, opt).value(0).real() / (2.0 * kPi);
}

}  // namespace

V12 v1_v2(const DickeParams& p, double lambda, double theta) {
    if (!(lambda > critical_coupling(p))) {
        throw DomainError("v1_v2: defined in the superradiant phase only");
    }
    if (!resonant(p)) {
        throw DomainError("v1_v2: requires omega == omega0");
    }
    const auto sys = fluct::build_system(p, lambda, Phase::superradiant);
    const double mu = sys.mu;
    const double w0 = p.omega0;

    V12 out;
    out.gamma2 = fluct::mixing_angle(mu);
    out.omega0_tilde = fluct::omega0_tilde(w0, mu);
    const double c = std::cos(out.gamma2);
    const double s = std::sin(out.gamma2);
    const double r = std::sqrt(w0 / out.omega0_tilde);

    const auto d_part = [&](double t) {
        return Vector4c(std::cos(t) * r * quadrature(0.0, 1)
                        + std::sin(t) / r * quadrature(0.5 * kPi, 1));
    };
    const auto x_cd = [&](double t) {
        return Vector4c(c * c * quadrature(t, 0) - c * s * d_part(t));
    };
    const auto y_cd = [&](double t) {
        return Vector4c(s * s * quadrature(t, 0) + c * s * d_part(t));
    };

    const CovarianceReport cov = covariance_lyapunov(sys);
    out.x_variance = variance(x_cd(theta + 0.5 * kPi), cov.second_moments);
    out.y_variance = variance(y_cd(theta), cov.second_moments);

    const double cs2 = c * c * s * s;
    const auto measures = [&](double xv, double yv) {
        return std::array<double, 2>{(xv + yv) / cs2, xv * yv / (0.25 * cs2 * cs2)};
    };
    const auto internal = measures(out.x_variance, out.y_variance);
    out.v1 = internal[0];
    out.v2 = internal[1];

    // Output route: band-integrated normally ordered output variances.
    const spectra::TransferFunctions tf(p, lambda, Phase::superradiant);
    const fluct::BranchedEigenvalues eig = fluct::eigenvalues(sys);
    const Band ph = band_of(eig.photonic);
    const Band at = band_of(eig.atomic);
    const auto cuts = spectral_cuts(tf);
    out.windows_overlap = ph.center + ph.half_width > at.center - at.half_width;

    // |-i nu - e| >= |Re e|, so only lines narrower than the pole guard are unsampleable.
    const double guard = 2.0 * spectra::kPoleTolerance * w0;
    bool resolvable = true;
    for (const cplx& e : tf.poles()) resolvable = resolvable && std::abs(e.real()) >= guard;
    if (!resolvable) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.x_variance_output = out.y_variance_output = nan;
        out.v1_output = out.v2_output = nan;
        return out;
    }

    double ph_out = 0.0;
    double at_out = 0.0;
    if (out.windows_overlap) {
        ph_out = negative_part(tf, theta + 0.5 * kPi, cuts);
        at_out = negative_part(tf, theta, cuts);
    } else {
        ph_out = band_variance(tf, theta + 0.5 * kPi, ph, cuts);
        at_out = band_variance(tf, theta, at, cuts);
    }

    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double ratio = w0 / out.omega0_tilde;
    const double k = p.kappa;
    out.x_variance_output =
        ph_out / (2.0 * k)
        + 0.25 * (std::pow(c, 4) + cs2 * (ratio * st * st + ct * ct / ratio));
    out.y_variance_output =
        at_out / (2.0 * k)
        + 0.25 * (std::pow(s, 4) + cs2 * (ratio * ct * ct + st * st / ratio));
    const auto output = measures(out.x_variance_output, out.y_variance_output);
    out.v1_output = output[0];
    out.v2_output = output[1];
    return out;
}

}  // namespace dicke::ent

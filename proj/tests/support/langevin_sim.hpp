// Wigner-picture Langevin simulation of the cavity output field.
//
// State z = (x_c, p_c, x_d, p_d) with c = x_c + i p_c, d = x_d + i p_d, driven by
// the cavity input xi = (w1 + i w2)/2, <xi(t) xi*(t')> = delta/2. The output is
// y = sqrt(2 kappa) c - xi. Each step is sampled exactly from the augmented linear
// SDE for (z, int z dt, int dw), so the bin averages of y carry no discretization
// error beyond the sinc^2 of the averaging itself.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/fluctuations.hpp"

namespace langevin {

using cplx = std::complex<double>;
constexpr int kDim = 10;
using MatrixA = Eigen::Matrix<double, kDim, kDim>;
using VectorA = Eigen::Matrix<double, kDim, 1>;

struct Probe {
    bool homodyne{false};
    double nu{0.0};
    double theta{0.0};
};

struct Estimate {
    double mean{0.0};   // symmetrized spectral density of the bin-averaged output
    double sigma{0.0};  // standard error over independent segments
};

struct Point {
    double lambda;
    Probe probe;
};

// Ten (lambda, nu, theta) checks at omega = omega0 = 1, kappa = 0.2: three
// couplings across both phases, peaks, valleys and squeezed quadratures.
inline std::vector<Point> spectrum_points() {
    const double half_pi = 0.5 * std::acos(-1.0);
    const double sq = std::atan(0.2) + half_pi;
    return {
        {0.3, {false, 0.0, 0.0}},
        {0.3, {false, 0.6, 0.0}},
        {0.3, {true, 1.0, 0.7}},
        {0.45, {false, 0.45, 0.0}},
        {0.45, {false, 1.3, 0.0}},
        {0.45, {true, 0.0, sq}},
        {0.45, {true, 0.4, 0.0}},
        {0.7, {false, 0.9, 0.0}},
        {0.7, {true, 0.0, 1.2}},
        {0.7, {true, 0.6, half_pi}},
    };
}

struct Options {
    double dt{0.05};
    int segment{8192};
    int segments{200};
    int burn_in{16384};
    unsigned long long seed{20240611ULL};
};

// Real drift of z from the complex drift on (c, c^dag, d, d^dag).
inline Eigen::Matrix4d real_drift(const dicke::fluct::Matrix4c& m) {
    // v = T z with c = x + i p, c^dag = x - i p.
    dicke::fluct::Matrix4c t = dicke::fluct::Matrix4c::Zero();
    const cplx i{0.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        t(2 * k, 2 * k) = 1.0;
        t(2 * k, 2 * k + 1) = i;
        t(2 * k + 1, 2 * k) = 1.0;
        t(2 * k + 1, 2 * k + 1) = -i;
    }
    const dicke::fluct::Matrix4c a = t.inverse() * m * t;
    return a.real();
}

class Simulator {
public:
    Simulator(const dicke::fluct::FluctuationSystem& sys, Options opt)
        : opt_(opt), kappa_(sys.params.kappa), rng_(opt.seed) {
        const Eigen::Matrix4d a = real_drift(sys.drift);
        MatrixA aug = MatrixA::Zero();
        aug.block<4, 4>(0, 0) = a;
        aug.block<4, 4>(4, 0) = Eigen::Matrix4d::Identity();
        Eigen::Matrix<double, kDim, 2> b = Eigen::Matrix<double, kDim, 2>::Zero();
        const double s = std::sqrt(2.0 * kappa_) / 2.0;
        b(0, 0) = s;
        b(1, 1) = s;
        b(8, 0) = 1.0;
        b(9, 1) = 1.0;

        // Van Loan: exp([[-A, B B^T], [0, A^T]] dt) gives Phi and Q.
        Eigen::Matrix<double, 2 * kDim, 2 * kDim> c = Eigen::Matrix<double, 2 * kDim, 2 * kDim>::Zero();
        c.block<kDim, kDim>(0, 0) = -aug;
        c.block<kDim, kDim>(0, kDim) = b * b.transpose();
        c.block<kDim, kDim>(kDim, kDim) = aug.transpose();
        const Eigen::Matrix<double, 2 * kDim, 2 * kDim> e = (c * opt_.dt).exp();
        phi_ = e.block<kDim, kDim>(kDim, kDim).transpose();
        MatrixA q = phi_ * e.block<kDim, kDim>(0, kDim);
        q = 0.5 * (q + q.transpose());
        Eigen::SelfAdjointEigenSolver<MatrixA> es(q);
        const VectorA root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        noise_ = es.eigenvectors() * root.asDiagonal();
    }

    std::vector<Estimate> run(const std::vector<Probe>& probes) {
        std::vector<double> sum(probes.size(), 0.0);
        std::vector<double> sum2(probes.size(), 0.0);
        Eigen::Vector4d z = Eigen::Vector4d::Zero();
        for (int k = 0; k < opt_.burn_in; ++k) z = step(z).z;

        const int n = opt_.segment;
        double wsum = 0.0;
        std::vector<double> hann(n);
        for (int k = 0; k < n; ++k) {
            hann[k] = 0.5 * (1.0 - std::cos(2.0 * std::acos(-1.0) * k / n));
            wsum += hann[k] * hann[k];
        }

        std::vector<cplx> y(n);
        for (int s = 0; s < opt_.segments; ++s) {
            for (int k = 0; k < n; ++k) {
                const Sample smp = step(z);
                z = smp.z;
                y[k] = smp.y;
            }
            for (std::size_t p = 0; p < probes.size(); ++p) {
                const double val = periodogram(y, hann, wsum, probes[p]);
                sum[p] += val;
                sum2[p] += val * val;
            }
        }

        std::vector<Estimate> out(probes.size());
        const double m = opt_.segments;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            const double mean = sum[p] / m;
            const double var = (sum2[p] / m - mean * mean) * m / (m - 1.0);
            out[p] = {mean, std::sqrt(var / m)};
        }
        return out;
    }

    // Expected estimate for a normally ordered spectrum value s at nu.
    double expected(const Probe& p, double s) const {
        const double x = 0.5 * p.nu * opt_.dt;
        const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
        return (p.homodyne ? 0.25 : 0.5) + s * sinc * sinc;
    }

private:
    struct Sample {
        Eigen::Vector4d z;
        cplx y;
    };

    Sample step(const Eigen::Vector4d& z) {
        VectorA x = VectorA::Zero();
        x.head<4>() = z;
        VectorA w;
        for (int i = 0; i < kDim; ++i) w(i) = normal_(rng_);
        x = phi_ * x + noise_ * w;
        const double dt = opt_.dt;
        const cplx c_bar{x(4) / dt, x(5) / dt};
        const cplx xi_bar{0.5 * x(8) / dt, 0.5 * x(9) / dt};
        return {x.head<4>(), std::sqrt(2.0 * kappa_) * c_bar - xi_bar};
    }

    double periodogram(const std::vector<cplx>& y, const std::vector<double>& hann, double wsum,
                       const Probe& p) const {
        const double dt = opt_.dt;
        const cplx rot = std::exp(cplx{0.0, p.nu * dt});
        const cplx phase = std::exp(cplx{0.0, -p.theta});
        cplx acc = 0.0;
        cplx e = 1.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const cplx v = p.homodyne ? cplx{std::real(phase * y[k]), 0.0} : y[k];
            acc += hann[k] * v * e;
            e *= rot;
        }
        return dt * std::norm(acc) / wsum;
    }

    Options opt_;
    double kappa_;
    MatrixA phi_;
    MatrixA noise_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
};

}  // namespace langevin

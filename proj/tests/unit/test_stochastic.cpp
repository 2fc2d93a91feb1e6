#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "dicke/spectra.hpp"
#include "langevin_sim.hpp"

using namespace dicke;

namespace {

const DickeParams kCanon{1.0, 1.0, 0.0, 0.2, 1.0};

double closed_form(const spectra::TransferFunctions& tf, const langevin::Probe& p) {
    if (p.homodyne) return spectra::homodyne_value(tf, p.theta, p.nu);
    return std::norm(tf.G(p.nu));
}

}  // namespace

TEST_CASE("real drift keeps the complex eigenvalues", "[stochastic]") {
    for (double lambda : {0.0, 0.3, 0.7}) {
        const auto sys = fluct::build_system(kCanon, lambda);
        const Eigen::Matrix4d a = langevin::real_drift(sys.drift);
        const Eigen::Matrix4cd ac = a.cast<std::complex<double>>();
        const auto ev = Eigen::ComplexEigenSolver<Eigen::Matrix4cd>(ac, false).eigenvalues();
        const auto em = Eigen::ComplexEigenSolver<fluct::Matrix4c>(sys.drift, false).eigenvalues();
        for (int i = 0; i < 4; ++i) {
            double best = 1e9;
            for (int j = 0; j < 4; ++j) best = std::min(best, std::abs(ev(i) - em(j)));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("vacuum output is white", "[stochastic]") {
    langevin::Options opt;
    opt.segments = 60;
    langevin::Simulator sim(fluct::build_system(kCanon, 0.0), opt);
    const std::vector<langevin::Probe> probes{{false, 0.0, 0.0}, {false, 1.0, 0.0},
                                              {true, 0.3, 0.0}, {true, 1.0, 1.1}};
    const auto est = sim.run(probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        CHECK(std::abs(est[i].mean - sim.expected(probes[i], 0.0)) < 3.0 * est[i].sigma);
    }
}

TEST_CASE("periodograms match the closed-form spectra", "[stochastic]") {
    std::map<double, std::vector<langevin::Probe>> by_lambda;
    for (const auto& pt : langevin::spectrum_points()) by_lambda[pt.lambda].push_back(pt.probe);

    int checked = 0;
    for (const auto& [lambda, probes] : by_lambda) {
        const auto sys = fluct::build_system(kCanon, lambda);
        const spectra::TransferFunctions tf(kCanon, lambda);
        langevin::Simulator sim(sys, {});
        const auto est = sim.run(probes);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double want = sim.expected(probes[i], closed_form(tf, probes[i]));
            INFO("lambda " << lambda << " nu " << probes[i].nu << " theta " << probes[i].theta
                           << " homodyne " << probes[i].homodyne << " est " << est[i].mean
                           << " sigma " << est[i].sigma << " want " << want);
            CHECK(std::abs(est[i].mean - want) < 3.0 * est[i].sigma);
            CHECK(est[i].sigma < 0.15 * want);
            ++checked;
        }
    }
    CHECK(checked == 10);
}

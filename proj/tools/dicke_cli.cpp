// dicke: command-line front end for the dissipative Dicke model library.
//
//   dicke map-params --g-r ... --Omega-r ... --Delta-r ... --N ...
//   dicke steady-state --lambda 0.6
//   dicke eigenvalues --lambda-min 0 --lambda-max 0.7 --lambda-steps 141
//   dicke spectrum fluorescence --lambda 0.4
//   dicke entanglement epr --lambda-min 0.3 --lambda-max 0.7 --lambda-steps 41
//   dicke sweep --quantity photon_flux --kappa 0.5 --lambda-min 0 --lambda-max 1
//   dicke sweep --replay previous.csv
//
// Exit status: 0 success, 1 input error, 2 I/O error.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/sweep.hpp"

namespace {

using namespace dicke;

struct CommonOptions {
    DickeParams params;
    std::optional<double> lambda;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    int lambda_steps{101};
    std::optional<double> nu_min;
    std::optional<double> nu_max;
    int nu_steps{2001};
    double theta{0.0};
    double phi{0.0};
    std::string format{"csv"};
    std::string output;
};

void add_model_flags(CLI::App* app, CommonOptions& o) {
    app->add_option("--omega", o.params.omega, "field-mode frequency")->capture_default_str();
    app->add_option("--omega0", o.params.omega0, "atomic splitting")->capture_default_str();
    app->add_option("--kappa", o.params.kappa, "cavity amplitude decay rate")->capture_default_str();
    app->add_option("--N", o.params.N, "atom number")->capture_default_str();
    app->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app->add_option("--output", o.output, "output file (default: stdout)");
}

void add_lambda_flags(CLI::App* app, CommonOptions& o) {
    app->add_option("--lambda", o.lambda, "single coupling value");
    app->add_option("--lambda-min", o.lambda_min, "first coupling of the sweep");
    app->add_option("--lambda-max", o.lambda_max, "last coupling of the sweep");
    app->add_option("--lambda-steps", o.lambda_steps, "number of sweep points")
        ->capture_default_str();
}

void add_nu_flags(CLI::App* app, CommonOptions& o) {
    app->add_option("--nu-min", o.nu_min, "first frequency (default -3 omega0/mu)");
    app->add_option("--nu-max", o.nu_max, "last frequency (default +3 omega0/mu)");
    app->add_option("--nu-steps", o.nu_steps, "number of frequencies")->capture_default_str();
}

io::GridSpec lambda_grid(const CommonOptions& o) {
    if (o.lambda_min || o.lambda_max) {
        if (!o.lambda_min || !o.lambda_max) {
            throw std::invalid_argument("--lambda-min and --lambda-max must be given together");
        }
        return {*o.lambda_min, *o.lambda_max, o.lambda_steps};
    }
    if (!o.lambda) {
        throw std::invalid_argument("give --lambda or --lambda-min/--lambda-max");
    }
    return {*o.lambda, *o.lambda, 1};
}

std::optional<io::GridSpec> nu_grid(const CommonOptions& o) {
    if (!o.nu_min && !o.nu_max) return std::nullopt;
    if (!o.nu_min || !o.nu_max) {
        throw std::invalid_argument("--nu-min and --nu-max must be given together");
    }
    return io::GridSpec{*o.nu_min, *o.nu_max, o.nu_steps};
}

void write(const io::ResultTable& t, const CommonOptions& o) {
    const io::Format f = io::parse_format(o.format);
    if (o.output.empty()) {
        io::emit(t, f, std::cout);
    } else {
        io::emit(t, f, o.output);
    }
}

io::SweepRequest lambda_request(io::Quantity q, const CommonOptions& o) {
    io::SweepRequest r;
    r.quantity = q;
    r.params = o.params;
    r.lambda_grid = lambda_grid(o);
    r.theta = o.theta;
    r.phi = o.phi;
    return r;
}

io::SweepRequest spectrum_request(io::Quantity q, const CommonOptions& o) {
    if (!o.lambda) throw std::invalid_argument("spectra need --lambda");
    io::SweepRequest r;
    r.quantity = q;
    r.params = o.params;
    r.params.lambda = *o.lambda;
    r.lambda_grid = {*o.lambda, *o.lambda, 1};
    r.nu_grid = nu_grid(o);
    r.theta = o.theta;
    return r;
}

struct RamanOptions {
    RamanPhysicalParams raman;
    double margin{kDefaultAdiabaticMargin};
    double balance_tol{kDefaultBalanceTolerance};
};

io::ResultTable map_params_table(const RamanOptions& ro) {
    const RamanPhysicalParams& r = ro.raman;
    const EffectiveHamiltonianParams e = effective_params(r);
    const RegimeReport rep = validate_regime(r, ro.margin);

    io::ResultTable t;
    t.columns = {"omega", "omega0", "delta", "lambda_r", "lambda_s", "spontaneous_rate",
                 "adiabatic", "balanced", "lambda", "flag"};
    double lambda = std::nan("");
    double balanced = 0.0;
    double flag = io::kRowOk;
    try {
        lambda = to_dicke(r, ro.balance_tol).lambda;
        balanced = 1.0;
    } catch (const BalanceError&) {
        flag = io::kRowDomain;
    }
    t.rows.push_back({e.omega, e.omega0, e.delta, e.lambda_r, e.lambda_s, rep.spontaneous_rate,
                      rep.adiabatic ? 1.0 : 0.0, balanced, lambda, flag});

    t.metadata.emplace_back("tool", "dicke");
    t.metadata.emplace_back("version", io::kToolVersion);
    t.metadata.emplace_back("command", "map-params");
    t.metadata.emplace_back("unit", r.unit);
    t.metadata.emplace_back("margin", io::format_number(ro.margin));
    for (const auto& c : rep.checks) {
        t.metadata.emplace_back("check " + c.label,
                                io::format_number(c.ratio) + (c.pass ? " pass" : " fail"));
    }
    return t;
}

io::ResultTable steady_state_table(const CommonOptions& o) {
    if (!o.lambda) throw std::invalid_argument("steady-state needs --lambda");
    DickeParams p = o.params;
    p.lambda = *o.lambda;
    io::ResultTable t;
    t.columns = {"phase", "sign", "re_alpha", "im_alpha", "re_beta", "im_beta", "w",
                 "stability", "max_growth", "flag"};
    for (const auto& b : semi::steady_states(p, p.lambda)) {
        const semi::StabilityReport s = semi::stability(p, b);
        const double sign = b.sign == semi::Sign::plus ? 1.0 : b.sign == semi::Sign::minus ? -1.0 : 0.0;
        const double stab = b.stability == semi::Stability::stable ? 1.0
                          : b.stability == semi::Stability::unstable ? -1.0 : 0.0;
        t.rows.push_back({b.phase == Phase::normal ? 1.0 : 2.0, sign, b.state.alpha.real(),
                          b.state.alpha.imag(), b.state.beta.real(), b.state.beta.imag(),
                          b.state.w, stab, s.max_real, static_cast<double>(io::kRowOk)});
    }
    t.metadata.emplace_back("tool", "dicke");
    t.metadata.emplace_back("version", io::kToolVersion);
    t.metadata.emplace_back("command", "steady-state");
    t.metadata.emplace_back("omega", io::format_number(p.omega));
    t.metadata.emplace_back("omega0", io::format_number(p.omega0));
    t.metadata.emplace_back("kappa", io::format_number(p.kappa));
    t.metadata.emplace_back("N", io::format_number(p.N));
    t.metadata.emplace_back("lambda", io::format_number(p.lambda));
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative Dicke model: steady states, fluctuation spectra and entanglement"};
    app.require_subcommand(1);
    CommonOptions o;

    RamanOptions ro;
    auto* map = app.add_subcommand("map-params", "map Raman hardware parameters to Dicke form");
    map->add_option("--g-r", ro.raman.g_r, "cavity coupling, r channel")->required();
    map->add_option("--g-s", ro.raman.g_s, "cavity coupling, s channel")->required();
    map->add_option("--Omega-r", ro.raman.Omega_r, "Rabi frequency, r channel")->required();
    map->add_option("--Omega-s", ro.raman.Omega_s, "Rabi frequency, s channel")->required();
    map->add_option("--Delta-r", ro.raman.Delta_r, "detuning, r channel")->required();
    map->add_option("--Delta-s", ro.raman.Delta_s, "detuning, s channel")->required();
    map->add_option("--kappa", ro.raman.kappa, "cavity decay rate");
    map->add_option("--N", ro.raman.N, "atom count");
    map->add_option("--gamma", ro.raman.gamma, "excited-state linewidth");
    map->add_option("--delta-cav", ro.raman.delta_cav, "cavity detuning");
    map->add_option("--omega1", ro.raman.omega1, "ground-state splitting");
    map->add_option("--omega1-prime", ro.raman.omega1_prime, "reference splitting");
    map->add_option("--unit", ro.raman.unit, "frequency unit label")->capture_default_str();
    map->add_option("--margin", ro.margin, "adiabaticity margin")->capture_default_str();
    map->add_option("--balance-tol", ro.balance_tol, "relative balance tolerance")
        ->capture_default_str();
    map->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    map->add_option("--output", o.output, "output file (default: stdout)");

    auto* steady = app.add_subcommand("steady-state", "fixed points and their stability");
    add_model_flags(steady, o);
    steady->add_option("--lambda", o.lambda, "coupling")->required();

    auto* eig = app.add_subcommand("eigenvalues", "branch-labeled drift eigenvalues");
    add_model_flags(eig, o);
    add_lambda_flags(eig, o);

    std::string kind;
    auto* spec = app.add_subcommand("spectrum", "cavity output spectra");
    spec->add_option("kind", kind, "fluorescence, transmission or homodyne")
        ->required()
        ->check(CLI::IsMember({"fluorescence", "transmission", "homodyne"}));
    add_model_flags(spec, o);
    spec->add_option("--lambda", o.lambda, "coupling")->required();
    spec->add_option("--theta", o.theta, "homodyne phase")->capture_default_str();
    add_nu_flags(spec, o);

    std::string measure;
    auto* ent = app.add_subcommand("entanglement", "entanglement measures");
    ent->add_option("measure", measure, "epr, v_est, v1v2, photon_flux or optimal_squeezing")
        ->required()
        ->check(CLI::IsMember({"epr", "v_est", "v1v2", "photon_flux", "optimal_squeezing"}));
    add_model_flags(ent, o);
    add_lambda_flags(ent, o);
    ent->add_option("--theta", o.theta, "quadrature phase of the cavity mode")->capture_default_str();
    ent->add_option("--phi", o.phi, "quadrature phase of the atomic mode")->capture_default_str();

    std::string quantity;
    std::string replay;
    auto* sweep = app.add_subcommand("sweep", "generic sweep of any quantity");
    sweep->add_option("--quantity", quantity, "quantity to sweep");
    sweep->add_option("--replay", replay, "re-run the request stored in an emitted file");
    add_model_flags(sweep, o);
    add_lambda_flags(sweep, o);
    add_nu_flags(sweep, o);
    sweep->add_option("--theta", o.theta, "quadrature phase")->capture_default_str();
    sweep->add_option("--phi", o.phi, "atomic quadrature phase")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*map) {
            write(map_params_table(ro), o);
        } else if (*steady) {
            write(steady_state_table(o), o);
        } else if (*eig) {
            write(io::run_sweep(lambda_request(io::Quantity::eigenvalues, o)), o);
        } else if (*spec) {
            write(io::run_sweep(spectrum_request(io::parse_quantity(kind), o)), o);
        } else if (*ent) {
            write(io::run_sweep(lambda_request(io::parse_quantity(measure), o)), o);
        } else if (*sweep) {
            io::SweepRequest req;
            if (!replay.empty()) {
                req = io::request_from_metadata(io::read_metadata(replay));
            } else {
                if (quantity.empty()) throw std::invalid_argument("give --quantity or --replay");
                const io::Quantity q = io::parse_quantity(quantity);
                req = io::is_spectrum(q) ? spectrum_request(q, o) : lambda_request(q, o);
            }
            write(io::run_sweep(req), o);
        }
    } catch (const io::IoError& e) {
        std::cerr << "dicke: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dicke: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

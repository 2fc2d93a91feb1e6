#include "dicke/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dicke/entanglement.hpp"
#include "dicke/errors.hpp"
#include "dicke/fluctuations.hpp"
#include "dicke/semiclassical.hpp"
#include "dicke/spectra.hpp"

namespace dicke::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::pair<Quantity, const char*> kQuantityNames[] = {
    {Quantity::steady_state, "steady_state"},
    {Quantity::eigenvalues, "eigenvalues"},
    {Quantity::fluorescence, "fluorescence"},
    {Quantity::transmission, "transmission"},
    {Quantity::homodyne, "homodyne"},
    {Quantity::photon_flux, "photon_flux"},
    {Quantity::epr, "epr"},
    {Quantity::v_est, "v_est"},
    {Quantity::v1v2, "v1v2"},
    {Quantity::optimal_squeezing, "optimal_squeezing"},
};

}  // namespace

const char* to_string(Quantity q) noexcept {
    for (const auto& [k, name] : kQuantityNames) {
        if (k == q) return name;
    }
    return "unknown";
}

Quantity parse_quantity(const std::string& name) {
    for (const auto& [k, n] : kQuantityNames) {
        if (name == n) return k;
    }
    throw std::invalid_argument("unknown quantity: " + name);
}

bool is_spectrum(Quantity q) noexcept {
    return q == Quantity::fluorescence || q == Quantity::transmission
        || q == Quantity::homodyne;
}

std::vector<double> linspace(const GridSpec& g) {
    std::vector<double> out(static_cast<std::size_t>(std::max(g.steps, 0)));
    if (g.steps == 1) {
        out[0] = g.min;
        return out;
    }
    for (int i = 0; i < g.steps; ++i) {
        out[i] = g.min + (g.max - g.min) * i / (g.steps - 1);
    }
    return out;
}

namespace {

void check_grid(const GridSpec& g, const char* name) {
    if (g.steps < 1) {
        throw std::invalid_argument(std::string(name) + " grid is empty");
    }
    if (!std::isfinite(g.min) || !std::isfinite(g.max)) {
        throw std::invalid_argument(std::string(name) + " grid bounds must be finite");
    }
    if (g.steps > 1 && !(g.max > g.min)) {
        throw std::invalid_argument(std::string(name) + " grid must be strictly increasing");
    }
}

GridSpec default_nu(const SweepRequest& req) {
    const DickeParams& p = req.params;
    const double mu = mu_tilde(p, p.lambda, phase_for(p, p.lambda));
    const double half = 3.0 * p.omega0 / mu;
    return {-half, half, 2001};
}

}  // namespace

void validate(const SweepRequest& req) {
    dicke::validate(req.params);
    if (is_spectrum(req.quantity)) {
        if (req.nu_grid) check_grid(*req.nu_grid, "nu");
    } else {
        check_grid(req.lambda_grid, "lambda");
        if (req.lambda_grid.min < 0.0) {
            throw std::invalid_argument("lambda grid must be >= 0");
        }
    }
}

namespace {

std::vector<std::string> columns_for(Quantity q) {
    switch (q) {
        case Quantity::steady_state:
            return {"lambda", "re_alpha", "im_alpha", "re_beta", "im_beta", "w", "phase"};
        case Quantity::eigenvalues:
            return {"lambda", "re_ph_plus", "im_ph_plus", "re_ph_minus", "im_ph_minus",
                    "re_at_plus", "im_at_plus", "re_at_minus", "im_at_minus", "phase"};
        case Quantity::fluorescence:
        case Quantity::transmission:
        case Quantity::homodyne:
            return {"nu", "value"};
        case Quantity::photon_flux:
            return {"lambda", "fluctuation", "coherent"};
        case Quantity::epr:
            return {"lambda", "epr_sum", "epr_product"};
        case Quantity::v_est:
            return {"lambda", "v_est", "epr_sum", "gap"};
        case Quantity::v1v2:
            return {"lambda", "v1", "v2", "v1_output", "v2_output"};
        case Quantity::optimal_squeezing:
            return {"lambda", "theta_min", "s_min"};
    }
    return {};
}

double phase_value(Phase ph) {
    return ph == Phase::normal ? 1.0 : 2.0;
}

// Values for one lambda point, without the leading lambda or trailing flag.
std::vector<double> lambda_point(const SweepRequest& req, double lambda) {
    const DickeParams& p = req.params;
    switch (req.quantity) {
        case Quantity::steady_state: {
            for (const auto& b : semi::steady_states(p, lambda)) {
                if (b.stability != semi::Stability::unstable
                    && (b.sign == semi::Sign::none || b.sign == semi::Sign::plus)) {
                    return {b.state.alpha.real(), b.state.alpha.imag(), b.state.beta.real(),
                            b.state.beta.imag(), b.state.w, phase_value(b.phase)};
                }
            }
            throw DomainError("no stable branch");
        }
        case Quantity::photon_flux: {
            const auto f = ent::photon_flux(p, lambda);
            return {f.fluctuation, f.coherent};
        }
        case Quantity::epr: {
            const auto e = ent::epr_variance(p, lambda, req.theta, req.phi);
            return {e.sum, e.product};
        }
        case Quantity::v_est: {
            const auto c = ent::compare_v_est(p, lambda, req.theta);
            return {c.v_est, c.epr_sum, c.gap};
        }
        case Quantity::v1v2: {
            const auto v = ent::v1_v2(p, lambda, req.theta);
            return {v.v1, v.v2, v.v1_output, v.v2_output};
        }
        case Quantity::optimal_squeezing: {
            const auto o = spectra::optimal_squeezing(p, lambda);
            return {o.theta_min, o.s_min};
        }
        default:
            break;
    }
    throw std::logic_error("lambda_point: not a per-lambda quantity");
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<double> failed_row(double x, std::size_t width, int flag) {
    std::vector<double> row(width, kNaN);
    row.front() = x;
    row.back() = flag;
    return row;
}

void run_lambda_rows(const SweepRequest& req, ResultTable& t) {
    const auto grid = linspace(req.lambda_grid);
    const std::size_t width = t.columns.size();
    t.rows.assign(grid.size(), {});

    if (req.quantity == Quantity::eigenvalues) {
        const auto eig = fluct::eigenvalue_sweep(req.params, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& e = eig[i];
            t.rows[i] = {grid[i],
                         e.photonic[0].real(), e.photonic[0].imag(),
                         e.photonic[1].real(), e.photonic[1].imag(),
                         e.atomic[0].real(), e.atomic[0].imag(),
                         e.atomic[1].real(), e.atomic[1].imag(),
                         phase_value(e.phase), static_cast<double>(kRowOk)};
        }
        return;
    }

    parallel_for(grid.size(), [&](std::size_t i) {
        try {
            std::vector<double> row{grid[i]};
            const auto vals = lambda_point(req, grid[i]);
            row.insert(row.end(), vals.begin(), vals.end());
            // Unresolvable lines and flat phases come back as NaN.
            const bool finite = std::all_of(vals.begin(), vals.end(),
                                            [](double v) { return std::isfinite(v); });
            row.push_back(finite ? kRowOk : kRowPole);
            t.rows[i] = std::move(row);
        } catch (const PoleError&) {
            t.rows[i] = failed_row(grid[i], width, kRowPole);
        } catch (const std::domain_error&) {
            t.rows[i] = failed_row(grid[i], width, kRowDomain);
        } catch (const NoSteadyStateError&) {
            t.rows[i] = failed_row(grid[i], width, kRowDomain);
        }
    });
}

void run_spectrum_rows(const SweepRequest& req, ResultTable& t) {
    const DickeParams& p = req.params;
    const auto grid = linspace(req.nu_grid ? *req.nu_grid : default_nu(req));
    t.rows.assign(grid.size(), {});
    try {
        spectra::SpectrumSeries s;
        switch (req.quantity) {
            case Quantity::fluorescence: s = spectra::fluorescence(p, p.lambda, grid); break;
            case Quantity::transmission: s = spectra::transmission(p, p.lambda, grid); break;
            default: s = spectra::homodyne(p, p.lambda, req.theta, grid); break;
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.rows[i] = {grid[i], s.values[i], static_cast<double>(s.flags[i])};
        }
    } catch (const std::domain_error&) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.rows[i] = failed_row(grid[i], t.columns.size(), kRowDomain);
        }
    }
}

}  // namespace

ResultTable run_sweep(const SweepRequest& req) {
    validate(req);
    ResultTable t;
    t.columns = columns_for(req.quantity);
    t.columns.push_back("flag");
    SweepRequest resolved = req;
    if (is_spectrum(req.quantity) && !req.nu_grid) {
        resolved.nu_grid = default_nu(req);
    }
    t.metadata = metadata_for(resolved);
    if (is_spectrum(req.quantity)) {
        run_spectrum_rows(resolved, t);
    } else {
        run_lambda_rows(resolved, t);
    }
    return t;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> metadata_for(const SweepRequest& req) {
    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("tool", "dicke");
    m.emplace_back("version", kToolVersion);
    m.emplace_back("quantity", to_string(req.quantity));
    m.emplace_back("omega", format_number(req.params.omega));
    m.emplace_back("omega0", format_number(req.params.omega0));
    m.emplace_back("kappa", format_number(req.params.kappa));
    m.emplace_back("N", format_number(req.params.N));
    m.emplace_back("lambda", format_number(req.params.lambda));
    m.emplace_back("theta", format_number(req.theta));
    m.emplace_back("phi", format_number(req.phi));
    m.emplace_back("lambda_min", format_number(req.lambda_grid.min));
    m.emplace_back("lambda_max", format_number(req.lambda_grid.max));
    m.emplace_back("lambda_steps", std::to_string(req.lambda_grid.steps));
    if (req.nu_grid) {
        m.emplace_back("nu_min", format_number(req.nu_grid->min));
        m.emplace_back("nu_max", format_number(req.nu_grid->max));
        m.emplace_back("nu_steps", std::to_string(req.nu_grid->steps));
    }
    return m;
}

SweepRequest request_from_metadata(const std::vector<std::pair<std::string, std::string>>& meta) {
    std::map<std::string, std::string> kv(meta.begin(), meta.end());
    const auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("metadata is missing '" + key + "'");
        return it->second;
    };
    const auto num = [&](const std::string& key) { return std::stod(get(key)); };

    SweepRequest r;
    r.quantity = parse_quantity(get("quantity"));
    r.params.omega = num("omega");
    r.params.omega0 = num("omega0");
    r.params.kappa = num("kappa");
    r.params.N = num("N");
    r.params.lambda = num("lambda");
    r.theta = num("theta");
    r.phi = num("phi");
    r.lambda_grid = {num("lambda_min"), num("lambda_max"), std::stoi(get("lambda_steps"))};
    if (kv.count("nu_steps")) {
        r.nu_grid = GridSpec{num("nu_min"), num("nu_max"), std::stoi(get("nu_steps"))};
    }
    return r;
}

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw std::invalid_argument("unknown format: " + name);
}

void emit(const ResultTable& table, Format format, std::ostream& out) {
    if (format == Format::csv) {
        for (const auto& [k, v] : table.metadata) out << "# " << k << '=' << v << '\n';
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << table.columns[i];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << format_number(row[i]);
            }
            out << '\n';
        }
        return;
    }

    nlohmann::ordered_json j;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) j["metadata"][k] = v;
    j["columns"] = table.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v)) r.push_back(v);
            else r.push_back(nullptr);
        }
        j["rows"].push_back(std::move(r));
    }
    out << j.dump(1) << '\n';
}

void emit(const ResultTable& table, Format format, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file: " + path, path);
    emit(table, format, f);
    f.flush();
    if (!f) throw IoError("failed writing output file: " + path, path);
}

std::vector<std::pair<std::string, std::string>> read_metadata(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open file: " + path, path);
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    std::vector<std::pair<std::string, std::string>> meta;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const auto j = nlohmann::ordered_json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.contains("metadata")) {
            throw std::invalid_argument("not an emitted JSON table: " + path);
        }
        for (const auto& [k, v] : j["metadata"].items()) meta.emplace_back(k, v.get<std::string>());
        return meta;
    }
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line) && line.rfind("# ", 0) == 0) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    }
    return meta;
}

}  // namespace dicke::io

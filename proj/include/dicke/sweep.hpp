// sweep.hpp: parameter sweeps and deterministic CSV/JSON output

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke/model.hpp"

namespace dicke::io {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Quantity {
    steady_state,
    eigenvalues,
    fluorescence,
    transmission,
    homodyne,
    photon_flux,
    epr,
    v_est,
    v1v2,
    optimal_squeezing,
};

const char* to_string(Quantity q) noexcept;
// Throws std::invalid_argument for unknown names.
Quantity parse_quantity(const std::string& name);

// True for quantities sampled over nu at a single lambda.
bool is_spectrum(Quantity q) noexcept;

struct GridSpec {
    double min{0.0};
    double max{0.0};
    int steps{1};
};

// min + (max - min) i / (steps - 1); a single point when steps == 1.
std::vector<double> linspace(const GridSpec& g);

struct SweepRequest {
    Quantity quantity{Quantity::eigenvalues};
    DickeParams params;           // params.lambda is the coupling for spectra
    GridSpec lambda_grid;
    std::optional<GridSpec> nu_grid;  // spectra; default 2001 points over +-3 omega0/mu
    double theta{0.0};
    double phi{0.0};
};

// Throws std::invalid_argument when the request cannot be run.
void validate(const SweepRequest& req);

// Per-row status in the trailing `flag` column.
enum RowFlag : int { kRowOk = 0, kRowPole = 1, kRowDomain = 2 };

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;  // ordered
};

// One row per grid point, computed concurrently and assembled in grid order.
// Per-point failures become NaN values with a nonzero flag.
ResultTable run_sweep(const SweepRequest& req);

// Metadata block that reconstructs `req`.
std::vector<std::pair<std::string, std::string>> metadata_for(const SweepRequest& req);
SweepRequest request_from_metadata(const std::vector<std::pair<std::string, std::string>>& meta);

enum class Format { csv, json };

Format parse_format(const std::string& name);

class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, std::string path)
        : std::runtime_error(what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// %.17g with literal `nan`.
std::string format_number(double v);

void emit(const ResultTable& table, Format format, std::ostream& out);
// Throws IoError with the path when it cannot be written.
void emit(const ResultTable& table, Format format, const std::string& path);

// Reads the metadata block of a previously emitted CSV or JSON file.
std::vector<std::pair<std::string, std::string>> read_metadata(const std::string& path);

}  // namespace dicke::io

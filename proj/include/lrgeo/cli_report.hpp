#pragma once

// CSV ingestion, orchestration of fit -> diagnostic -> sampling study, and
// emission of report.json plus plot-data CSV files.

#include "lrgeo/diagnostics.hpp"
#include "lrgeo/logistic_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrgeo {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    std::filesystem::path input_path;
    std::string response_column = "y";
    std::vector<std::string> covariate_columns;
    bool center = true;
    double level = 0.99;
    double marginal_factor = 1.5;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::size_t edgeworth_grid_resolution = 101;
    double edgeworth_grid_half_width = 4.0;  // in standard deviations per axis
    std::size_t contour_points = 200;
    unsigned threads = 0;
    std::filesystem::path output_dir = ".";
};

/// Input problem reported with a stable machine-readable code.
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Reads a headered CSV. The design gets an intercept column of ones
/// followed by the named covariates. Error codes: FileNotFound, EmptyFile,
/// MissingColumn, MalformedCsv, NonBinaryResponse, RankDeficient.
Dataset parse_csv(const std::filesystem::path& path, const std::string& response_column,
                  const std::vector<std::string>& covariate_columns);

/// Exit codes: 0 success (including a separated fit), 2 input error,
/// 3 numerical failure. Errors go to `err` as one line "error: <code>: <msg>".
int run(const RunConfig& config, std::ostream& err);

/// 17 significant digits (round-trip exact); non-finite values become
/// "inf", "-inf" or "nan".
std::string format_double(double v);

/// Serializes with format_double for every floating-point value.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Validates `doc` against a JSON Schema subset (type, required,
/// properties, items, enum, minimum, const). Returns violations, empty if valid.
std::vector<std::string> validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema);

/// The report schema shipped with the tool.
const nlohmann::json& report_schema();

}  // namespace lrgeo

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alm/rates.hpp"

namespace alm::cli {

/// Malformed or unusable input data (exit code 65).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char *kTraceColumns = "k,rho,eps,residual,step_norm,inner_iters,dist_primal,dist_dual,q_ratio";

struct TraceRow {
    int k = 0;
    double rho = 0;
    double eps = 0;
    double residual = 0;
    double step_norm = 0;
    int inner_iters = 0;
    std::optional<double> dist_primal;
    std::optional<double> dist_dual;
    std::optional<double> q_ratio;
};

struct TraceFile {
    std::vector<std::pair<std::string, std::string>> header; // "# key=value" lines before the table
    std::vector<TraceRow> rows;
    std::vector<std::pair<std::string, std::string>> footer; // "# key=value" lines after the table

    std::optional<std::string> header_value(const std::string &key) const;
};

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string &s);

/// d_k used for q_ratio: hypot of the distances when both are present, else the residual.
double trace_distance(const TraceRow &r);

TraceFile trace_from_run(const RunTrace &run, std::vector<std::pair<std::string, std::string>> header);
std::string format_trace(const TraceFile &t);
/// Throws DataError on anything that is not a well-formed trace.
TraceFile parse_trace(std::istream &in);
TraceFile read_trace(const std::filesystem::path &path);

/// Rates from the stored columns. With `use_distances`, every row must carry
/// both distances; otherwise residuals are used.
RateReport rates_from_trace(const TraceFile &t, bool use_distances);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace alm::cli

#pragma once

#include "lstmsv/bpm.hpp"
#include "lstmsv/models.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lstmsv::io {

/// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_double(double x);

/// Parse a whole field as a double; false on failure.
[[nodiscard]] bool parse_double(std::string_view field, double& out) noexcept;

struct SeriesFile {
    std::vector<double> values;
    std::vector<std::string> labels;  // empty when the file has no timestamp column
};

/// One value per line, or `label,value` when the first field is not numeric.
/// A first line whose value field is not numeric is a header. Blank lines are
/// skipped. Throws ParseError with the 1-based line of the first bad row.
[[nodiscard]] SeriesFile read_series(const std::filesystem::path& path);

/// Rows `name,value` (an optional `name,value` header is skipped).
[[nodiscard]] std::vector<std::pair<std::string, double>> read_named(const std::filesystem::path& path);

/// Parameters from `name,value` rows; every model parameter must be present
/// exactly once. Throws ParseError or ConfigError.
[[nodiscard]] models::ModelParams read_params(const std::filesystem::path& path, models::Model model);

/// `key=value` lines; `#` starts a comment. Throws ParseError on a line
/// without '='.
[[nodiscard]] std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Single column with header `column`.
void write_series(const std::filesystem::path& path, std::span<const double> values, const std::string& column);

void write_named(const std::filesystem::path& path, const std::vector<std::pair<std::string, double>>& rows);

void write_params(const std::filesystem::path& path, const models::ModelParams& p);

/// Rows of a table with a header line.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& columns);

/// Chain CSV: one row per index in `rows`, columns = parameter names, loglik,
/// accepted.
void write_chain(const std::filesystem::path& path, const mcmc::ChainDraws& chain,
                 std::span<const std::size_t> rows);

/// Constrained draws and logliks from a chain CSV. Column names must match
/// `names`, followed by loglik and accepted.
struct ChainFile {
    std::vector<std::string> names;
    std::vector<std::vector<double>> draws;
    std::vector<double> logliks;
};
[[nodiscard]] ChainFile read_chain(const std::filesystem::path& path);

/// `key=value` sidecar, keys in sorted order.
void write_sidecar(const std::filesystem::path& path, const std::map<std::string, std::string>& entries);

}  // namespace lstmsv::io

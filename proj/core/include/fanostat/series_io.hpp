#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fanostat/fitting.hpp"

namespace fanostat {

enum class SeriesFormat { kCsv, kJson };

SeriesFormat parse_format(std::string_view name);

/// Column-oriented numeric table with an optional per-row flag string and an
/// ordered metadata block.
struct Series {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Empty, or one entry per row ("" for a clean row).
    std::vector<std::string> flags;

    void add_row(std::vector<double> row, std::string flag = {});
    void add_metadata(std::string key, std::string value);
};

/// Shortest representation that parses back to the same double; inf, -inf and nan spelled out.
std::string format_double(double value);

/// Tool version and unit conventions every emitted series carries.
std::vector<std::pair<std::string, std::string>> standard_metadata(
    units::FrequencyConvention convention = units::FrequencyConvention::kOrdinary);

std::string render_series(const Series& series, SeriesFormat format);
/// `path` "-" writes to stdout. Throws Error(kIo) with the path on failure.
void write_series(const Series& series, const std::string& path, SeriesFormat format);
/// Reads a CSV produced by write_series.
Series read_series_csv(const std::string& path);

struct RowDiagnostic {
    std::size_t line = 0;
    std::string message;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::size_t rows_accepted = 0;
    std::vector<RowDiagnostic> rejected;
};

/// Three numeric columns: detuning (µeV), value, uncertainty. An optional header
/// line and `#` metadata lines are skipped. Rows with NaN or non-positive
/// uncertainty are rejected with a diagnostic; non-numeric cells, wrong column
/// counts and files without data raise Error(kParse) with the line number.
std::vector<DataPoint> load_points(const std::string& path, LoadReport* report = nullptr);
/// Two columns: delay (ps), counts. The detuning is read from a `# detuning_uev: x`
/// metadata line unless given.
Histogram load_histogram(const std::string& path, std::optional<double> detuning_uev = std::nullopt,
                         LoadReport* report = nullptr);

struct MeasurementSources {
    std::string transmission;
    std::string g2zero;
    std::vector<std::string> histograms;
    std::optional<double> reference_energy_uev;
};

MeasurementSet load_measurements(const MeasurementSources& sources, LoadReport* report = nullptr);

/// Writes points in the load_points layout.
void write_points(const std::vector<DataPoint>& points, const std::string& path, const std::string& value_name);

}  // namespace fanostat

#include "fanostat/series_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "fanostat/config.hpp"
#include "fanostat/error.hpp"

#ifndef FANOSTAT_VERSION
#define FANOSTAT_VERSION "unknown"
#endif

namespace fanostat {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_cell(std::string_view cell) {
    cell = trim(cell);
    std::string lower(cell);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "nan" || lower == "-nan") return std::numeric_limits<double>::quiet_NaN();
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return std::numeric_limits<double>::infinity();
    if (lower == "-inf" || lower == "-infinity") return -std::numeric_limits<double>::infinity();
    return parse_number(cell);
}

std::vector<std::string_view> split(std::string_view line) {
    const char sep = line.find(',') != std::string_view::npos ? ',' : '\t';
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = line.find(sep);
        out.push_back(trim(line.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        line = line.substr(pos + 1);
    }
    return out;
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::kIo, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> lines_of(std::string_view text) {
    std::vector<Line> out;
    std::size_t n = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        out.push_back({++n, trim(text.substr(0, nl))});
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    return out;
}

// "# key: value" or "# key = value"
std::optional<std::pair<std::string, std::string>> metadata_entry(std::string_view line) {
    if (line.empty() || line.front() != '#') return std::nullopt;
    line = trim(line.substr(1));
    const auto sep = line.find_first_of(":=");
    if (sep == std::string_view::npos) return std::nullopt;
    return std::make_pair(std::string(trim(line.substr(0, sep))), std::string(trim(line.substr(sep + 1))));
}

[[noreturn]] void parse_error(const std::string& path, std::size_t line, const std::string& what) {
    fail(ErrorCategory::kParse, path + ":" + std::to_string(line) + ": " + what);
}

// Numeric rows with exactly `columns` cells. The first non-comment line may be a header.
std::vector<std::pair<std::size_t, std::vector<double>>> numeric_rows(
    const std::string& path, const std::vector<Line>& lines, std::size_t columns) {
    std::vector<std::pair<std::size_t, std::vector<double>>> rows;
    bool first = true;
    for (const Line& l : lines) {
        if (l.text.empty() || l.text.front() == '#') continue;
        const auto cells = split(l.text);
        std::vector<double> values;
        bool numeric = true;
        for (std::string_view c : cells) {
            const auto v = parse_cell(c);
            if (!v) {
                numeric = false;
                break;
            }
            values.push_back(*v);
        }
        if (first && !numeric) {
            first = false;
            if (cells.size() != columns) {
                parse_error(path, l.number, "header has " + std::to_string(cells.size()) + " columns, expected " +
                                                std::to_string(columns));
            }
            continue;
        }
        first = false;
        if (cells.size() != columns) {
            parse_error(path, l.number,
                        "expected " + std::to_string(columns) + " columns, found " + std::to_string(cells.size()));
        }
        if (!numeric) parse_error(path, l.number, "non-numeric cell");
        rows.emplace_back(l.number, std::move(values));
    }
    if (rows.empty()) fail(ErrorCategory::kParse, path + ": no data rows");
    return rows;
}

}  // namespace

SeriesFormat parse_format(std::string_view name) {
    if (name == "csv") return SeriesFormat::kCsv;
    if (name == "json") return SeriesFormat::kJson;
    fail(ErrorCategory::kInvalidArgument, "format must be csv or json, got '" + std::string(name) + "'");
}

void Series::add_row(std::vector<double> row, std::string flag) {
    require(row.size() == columns.size(), "row width does not match the column count");
    if (!flag.empty() && flags.size() < rows.size()) flags.resize(rows.size());
    if (!flags.empty() || !flag.empty()) flags.push_back(std::move(flag));
    rows.push_back(std::move(row));
}

void Series::add_metadata(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::vector<std::pair<std::string, std::string>> standard_metadata(units::FrequencyConvention convention) {
    return {
        {"tool", std::string("fanostat ") + FANOSTAT_VERSION},
        {"detuning_convention", "laser minus emitter energy, µeV"},
        {"tau_convention", "reduced delay tau_tilde = tau * gamma / 2"},
        {"frequency_convention", units::convention_name(convention)},
        {"g2_normalization", "g2(tau -> infinity) = 1"},
    };
}

std::string render_series(const Series& s, SeriesFormat format) {
    const bool flagged = !s.flags.empty();
    if (flagged) require(s.flags.size() == s.rows.size(), "flag column length mismatch");
    if (format == SeriesFormat::kCsv) {
        std::string out;
        for (const auto& [k, v] : s.metadata) out += "# " + k + ": " + sanitize(v) + "\n";
        for (std::size_t c = 0; c < s.columns.size(); ++c) out += (c ? "," : "") + s.columns[c];
        if (flagged) out += s.columns.empty() ? "flag" : ",flag";
        out += "\n";
        for (std::size_t r = 0; r < s.rows.size(); ++r) {
            for (std::size_t c = 0; c < s.rows[r].size(); ++c) out += (c ? "," : "") + format_double(s.rows[r][c]);
            if (flagged) out += (s.rows[r].empty() ? "" : ",") + sanitize(s.flags[r]);
            out += "\n";
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.metadata) j["metadata"][k] = v;
    j["columns"] = s.columns;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : s.rows) {
        nlohmann::ordered_json jr = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v)) {
                jr.push_back(v);
            } else {
                jr.push_back(format_double(v));
            }
        }
        j["rows"].push_back(std::move(jr));
    }
    if (flagged) j["flags"] = s.flags;
    return j.dump(2) + "\n";
}

void write_series(const Series& series, const std::string& path, SeriesFormat format) {
    const std::string text = render_series(series, format);
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCategory::kIo, "cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) fail(ErrorCategory::kIo, "write to '" + path + "' failed");
}

Series read_series_csv(const std::string& path) {
    const std::string text = read_file(path);
    Series s;
    bool header = false;
    bool flagged = false;
    for (const Line& l : lines_of(text)) {
        if (l.text.empty()) continue;
        if (l.text.front() == '#') {
            if (!header) {
                if (auto m = metadata_entry(l.text)) s.metadata.push_back(*m);
            }
            continue;
        }
        const auto cells = split(l.text);
        if (!header) {
            for (std::string_view c : cells) s.columns.emplace_back(c);
            if (!s.columns.empty() && s.columns.back() == "flag") {
                flagged = true;
                s.columns.pop_back();
            }
            header = true;
            continue;
        }
        const std::size_t expected = s.columns.size() + (flagged ? 1 : 0);
        if (cells.size() != expected) {
            parse_error(path, l.number, "expected " + std::to_string(expected) + " cells");
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < s.columns.size(); ++c) {
            const auto v = parse_cell(cells[c]);
            if (!v) parse_error(path, l.number, "non-numeric cell '" + std::string(cells[c]) + "'");
            row.push_back(*v);
        }
        s.rows.push_back(std::move(row));
        if (flagged) s.flags.emplace_back(cells.back());
    }
    if (!header) fail(ErrorCategory::kParse, path + ": missing header");
    return s;
}

std::vector<DataPoint> load_points(const std::string& path, LoadReport* report) {
    const std::string text = read_file(path);
    const auto rows = numeric_rows(path, lines_of(text), 3);
    std::vector<DataPoint> out;
    LoadReport local;
    for (const auto& [line, v] : rows) {
        ++local.rows_read;
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
            local.rejected.push_back({line, "non-finite value"});
            continue;
        }
        if (!(v[2] > 0.0)) {
            local.rejected.push_back({line, "uncertainty must be > 0"});
            continue;
        }
        out.push_back({v[0], v[1], v[2]});
    }
    local.rows_accepted = out.size();
    if (out.empty()) fail(ErrorCategory::kParse, path + ": every data row was rejected");
    if (report) {
        report->rows_read += local.rows_read;
        report->rows_accepted += local.rows_accepted;
        report->rejected.insert(report->rejected.end(), local.rejected.begin(), local.rejected.end());
    }
    return out;
}

Histogram load_histogram(const std::string& path, std::optional<double> detuning_uev, LoadReport* report) {
    const std::string text = read_file(path);
    const auto lines = lines_of(text);
    Histogram h;
    if (!detuning_uev) {
        for (const Line& l : lines) {
            const auto m = metadata_entry(l.text);
            if (m && m->first == "detuning_uev") {
                detuning_uev = parse_number(m->second);
                if (!detuning_uev) parse_error(path, l.number, "detuning_uev is not a number");
            }
        }
    }
    if (!detuning_uev) fail(ErrorCategory::kParse, path + ": histogram needs a '# detuning_uev: x' line");
    h.detuning_uev = *detuning_uev;
    LoadReport local;
    for (const auto& [line, v] : numeric_rows(path, lines, 2)) {
        ++local.rows_read;
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || v[1] < 0.0) {
            local.rejected.push_back({line, "delay must be finite and counts finite and >= 0"});
            continue;
        }
        h.tau_ps.push_back(v[0]);
        h.counts.push_back(v[1]);
    }
    local.rows_accepted = h.tau_ps.size();
    if (h.tau_ps.empty()) fail(ErrorCategory::kParse, path + ": every data row was rejected");
    if (report) {
        report->rows_read += local.rows_read;
        report->rows_accepted += local.rows_accepted;
        report->rejected.insert(report->rejected.end(), local.rejected.begin(), local.rejected.end());
    }
    return h;
}

MeasurementSet load_measurements(const MeasurementSources& sources, LoadReport* report) {
    MeasurementSet m;
    m.reference_energy_uev = sources.reference_energy_uev;
    if (!sources.transmission.empty()) m.transmission = load_points(sources.transmission, report);
    if (!sources.g2zero.empty()) m.g2zero = load_points(sources.g2zero, report);
    for (const std::string& p : sources.histograms) m.histograms.push_back(load_histogram(p, std::nullopt, report));
    if (m.empty()) fail(ErrorCategory::kConfig, "no measurement files given");
    m.validate();
    return m;
}

void write_points(const std::vector<DataPoint>& points, const std::string& path, const std::string& value_name) {
    Series s;
    s.columns = {"detuning_uev", value_name, "uncertainty"};
    for (const DataPoint& p : points) s.add_row({p.detuning_uev, p.value, p.uncertainty});
    write_series(s, path, SeriesFormat::kCsv);
}

}  // namespace fanostat

// fanostat: scans, fits and consistency checks from a flat key = value config.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fanostat/config.hpp"
#include "fanostat/error.hpp"
#include "fanostat/fit_report.hpp"
#include "fanostat/scan.hpp"

namespace {

using namespace fanostat;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string grid;
    std::string out = "-";
    std::string format;
    std::string average;
    std::string convolve;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "key = value config file");
    cmd->add_option("--set", a.overrides, "override one key (repeatable)")->type_name("KEY=VALUE");
    cmd->add_option("--grid", a.grid, "start:stop:count");
    cmd->add_option("--out", a.out, "output path, - for stdout");
    cmd->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--average", a.average, "spectral wandering average")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--convolve", a.convolve, "detector convolution")->check(CLI::IsMember({"on", "off"}));
}

// Precedence: config file, then --set, then the dedicated flags.
Config build_config(const CommonArgs& a) {
    Config c = a.config_path.empty() ? Config{} : Config::load(a.config_path);
    for (const std::string& o : a.overrides) c.apply_override(o);
    if (!a.grid.empty()) c.set("grid", a.grid);
    if (!a.average.empty()) c.set("average", a.average);
    if (!a.convolve.empty()) c.set("convolve", a.convolve);
    c.reject_unknown_keys();
    return c;
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCategory::kIo, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) fail(ErrorCategory::kIo, "write to '" + path + "' failed");
}

SeriesFormat format_or(const CommonArgs& a, SeriesFormat fallback) {
    return a.format.empty() ? fallback : parse_format(a.format);
}

int run_scan_command(const CommonArgs& a, std::optional<ScanMode> mode) {
    const Config c = build_config(a);
    const ScanRequest req = scan_request_from(c, mode);
    const Series s = run_scan(req);
    write_series(s, a.out, format_or(a, SeriesFormat::kCsv));
    if (req.mode == ScanMode::kOracleCheck) {
        double g1 = 0.0, g2 = 0.0;
        std::size_t flagged = 0;
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            if (!s.flags.empty() && !s.flags[i].empty()) {
                ++flagged;
                continue;
            }
            g1 = std::max(g1, s.rows[i][5]);
            g2 = std::max(g2, s.rows[i][8]);
        }
        nlohmann::ordered_json summary = {{"max_g1_abs_diff", g1}, {"max_g2_abs_diff", g2},
                                          {"rows", s.rows.size()}, {"flagged_rows", flagged}};
        std::cerr << summary.dump() << "\n";
    }
    return 0;
}

int run_fit_command(const CommonArgs& a) {
    const Config c = build_config(a);
    const units::FrequencyConvention convention = frequency_convention_from(c);
    const PhysicalParams initial = physical_params_from(c);
    const FitOptions options = fit_options_from(c);
    LoadReport load;
    const MeasurementSet data = load_measurements(measurement_sources_from(c), &load);

    FitResult result;
    std::optional<MultistartResult> multi;
    if (c.get_bool("multistart", false)) {
        multi = fit_multistart(data, default_starts(initial), options);
        result = multi->runs[multi->best];
    } else {
        result = fit_full_model(data, initial, options);
    }

    if (format_or(a, SeriesFormat::kJson) == SeriesFormat::kCsv) {
        Series s = residual_table(result);
        for (const auto& [k, v] : standard_metadata(convention)) s.add_metadata(k, v);
        write_series(s, a.out, SeriesFormat::kCsv);
    } else {
        FitReportContext ctx;
        ctx.data = &data;
        ctx.options = &options;
        ctx.load = &load;
        ctx.multistart = multi ? &*multi : nullptr;
        ctx.convention = convention;
        write_text(fit_report_json(result, ctx), a.out);
    }
    return 0;
}

int report_error(std::string_view category, const std::string& message, int code) {
    const nlohmann::ordered_json j = {{"error", {{"category", category}, {"message", message}}}};
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon statistics of a waveguide-coupled two-level emitter with a Fano background"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(FANOSTAT_CLI_VERSION));

    CommonArgs scan_args, fit_args, oracle_args, fp_args;
    std::string scan_mode;
    CLI::App* scan = app.add_subcommand("scan", "evaluate a model quantity on a grid");
    scan->add_option("mode", scan_mode, "transmission, g2zero, g2trace or decompose (default: config key mode)");
    add_common(scan, scan_args);
    CLI::App* fit = app.add_subcommand("fit", "fit the full model to measured data");
    add_common(fit, fit_args);
    CLI::App* oracle = app.add_subcommand("oracle-check", "compare closed forms with the Bloch-equation oracle");
    add_common(oracle, oracle_args);
    CLI::App* fp = app.add_subcommand("fp-background", "Fabry-Perot background transmission and t0 per wavelength");
    add_common(fp, fp_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(category_name(ErrorCategory::kInvalidArgument), e.what(),
                            exit_code(ErrorCategory::kInvalidArgument));
    }

    try {
        if (scan->parsed()) {
            std::optional<ScanMode> mode;
            if (!scan_mode.empty()) mode = parse_scan_mode(scan_mode);
            return run_scan_command(scan_args, mode);
        }
        if (fit->parsed()) return run_fit_command(fit_args);
        if (oracle->parsed()) return run_scan_command(oracle_args, ScanMode::kOracleCheck);
        if (fp->parsed()) return run_scan_command(fp_args, ScanMode::kFpBackground);
    } catch (const Error& e) {
        return report_error(category_name(e.category()), e.what(), exit_code(e.category()));
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 70);
    }
    return 0;
}

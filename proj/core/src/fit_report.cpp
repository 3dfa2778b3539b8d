#include "fanostat/fit_report.hpp"

#include <cmath>

#include "json.hpp"

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

ParameterBounds bounds_from(const Config& c, const std::string& key, ParameterBounds fallback) {
    const auto v = c.get_list(key, {fallback.lo, fallback.hi});
    if (v.size() != 2) fail(ErrorCategory::kConfig, "'" + key + "' needs exactly two values lo,hi");
    return {v[0], v[1]};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto a = item.find_first_not_of(' ');
        const auto b = item.find_last_not_of(' ');
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

FitOptions fit_options_from(const Config& c) {
    FitOptions o;
    o.model = model_settings_from(c);
    const std::string mode = c.get_string("fit_mode", "joint");
    if (mode == "joint") {
        o.mode = FitMode::kJoint;
    } else if (mode == "sequential") {
        o.mode = FitMode::kSequential;
    } else {
        fail(ErrorCategory::kConfig, "fit_mode must be joint or sequential, got '" + mode + "'");
    }
    o.g2_weight = c.get_double("g2_weight", o.g2_weight);
    if (!(o.g2_weight >= 0.0) || !std::isfinite(o.g2_weight)) fail(ErrorCategory::kConfig, "g2_weight must be >= 0");
    o.solver.max_iterations = c.get_int("max_iterations", o.solver.max_iterations);
    if (o.solver.max_iterations < 1) fail(ErrorCategory::kConfig, "max_iterations must be >= 1");
    o.bounds.omega0_window_uev = c.get_double("omega0_window_uev", o.bounds.omega0_window_uev);
    o.bounds.lifetime_ps = bounds_from(c, "lifetime_bounds_ps", o.bounds.lifetime_ps);
    o.bounds.dephasing_time_ps = bounds_from(c, "dephasing_bounds_ps", o.bounds.dephasing_time_ps);
    o.bounds.sigma_uev = bounds_from(c, "sigma_bounds_uev", o.bounds.sigma_uev);
    o.bounds.t0 = bounds_from(c, "t0_bounds", o.bounds.t0);
    o.bounds.beta = bounds_from(c, "beta_bounds", o.bounds.beta);
    if (const auto free = c.get("fit_free")) {
        o.free.fill(false);
        for (const std::string& name : split_list(*free)) {
            bool found = false;
            for (int i = 0; i < kFitParameterCount; ++i) {
                if (name == fit_parameter_name(static_cast<FitParameter>(i))) {
                    o.free[i] = true;
                    found = true;
                }
            }
            if (!found) fail(ErrorCategory::kConfig, "fit_free: unknown parameter '" + name + "'");
        }
    }
    return o;
}

MeasurementSources measurement_sources_from(const Config& c) {
    MeasurementSources s;
    s.transmission = c.get_string("transmission_data", "");
    s.g2zero = c.get_string("g2_data", "");
    if (const auto h = c.get("histogram_data")) s.histograms = split_list(*h);
    if (c.has("reference_energy_uev")) s.reference_energy_uev = c.get_double("reference_energy_uev", 0.0);
    return s;
}

std::string fit_report_json(const FitResult& r, const FitReportContext& ctx) {
    const PhysicalParams& p = r.params;
    Json j;
    std::string tool;
    for (const auto& [k, v] : standard_metadata(ctx.convention)) {
        if (k == "tool") tool = v;
    }
    j["tool"] = tool;
    j["converged"] = r.converged;
    j["stop_reason"] = r.stop_reason;
    j["degenerate"] = r.degenerate;
    j["iterations"] = r.iterations;
    j["evaluations"] = r.evaluations;
    j["gradient_norm"] = number(r.gradient_norm);
    if (ctx.options) {
        j["mode"] = ctx.options->mode == FitMode::kJoint ? "joint" : "sequential";
        j["g2_weight"] = ctx.options->g2_weight;
        j["average"] = ctx.options->model.average;
        j["convolve"] = ctx.options->model.convolve;
    }
    j["objective"] = {{"total", number(r.breakdown.total)},
                      {"transmission", number(r.breakdown.transmission)},
                      {"g2zero", number(r.breakdown.g2zero)},
                      {"histograms", number(r.breakdown.histograms)}};

    Json params = Json::object();
    for (int i = 0; i < kFitParameterCount; ++i) {
        const auto id = static_cast<FitParameter>(i);
        double value = 0.0;
        switch (id) {
            case kOmega0: value = p.omega0_uev; break;
            case kLifetime: value = p.lifetime_ps; break;
            case kDephasingTime: value = p.dephasing_time_ps; break;
            case kSigma: value = p.sigma_wander_uev; break;
            case kT0: value = p.t0; break;
            case kBeta: value = p.beta; break;
            case kFitParameterCount: break;
        }
        params[fit_parameter_name(id)] = {{"value", number(value)},
                                          {"std_error", number(r.std_error[i])},
                                          {"free", r.free[i]},
                                          {"bound_hit", r.bound_hit[i]}};
    }
    params["omega0_thz"] = {{"value", number(units::frequency_thz_from_energy(p.omega0_uev, ctx.convention))}};
    params["detector_resp_ps"] = {{"value", number(p.detector_resp_ps)}};
    j["parameters"] = params;

    const DimensionlessParams d = to_dimensionless(p, p.omega0_uev);
    j["dimensionless"] = {{"hbar_gamma_uev", number(p.hbar_gamma_uev())},
                          {"zeta", number(d.zeta)},
                          {"beta", number(d.beta)},
                          {"phi", number(d.phi)},
                          {"T0", number(d.T0)},
                          {"sigma", number(d.sigma)},
                          {"t_resp", number(d.t_resp)}};

    Json rows = Json::array();
    for (const PointResidual& pr : r.breakdown.points) {
        rows.push_back({{"dataset", pr.dataset},
                        {"index", pr.index},
                        {"detuning_uev", number(pr.detuning_uev)},
                        {"tau_ps", number(pr.tau_ps)},
                        {"measured", number(pr.measured)},
                        {"model", number(pr.model)},
                        {"residual", number(pr.residual)},
                        {"excluded", pr.excluded}});
    }
    j["residuals"] = rows;
    j["warnings"] = r.breakdown.warnings;

    if (ctx.load) {
        Json rejected = Json::array();
        for (const RowDiagnostic& rd : ctx.load->rejected) rejected.push_back({{"line", rd.line}, {"message", rd.message}});
        j["load"] = {{"rows_read", ctx.load->rows_read},
                     {"rows_accepted", ctx.load->rows_accepted},
                     {"rejected", rejected}};
    }
    if (ctx.multistart) {
        Json runs = Json::array();
        for (const FitResult& run : ctx.multistart->runs) {
            runs.push_back({{"objective", number(run.objective)},
                            {"converged", run.converged},
                            {"t0", number(run.params.t0)},
                            {"sigma_wander_uev", number(run.params.sigma_wander_uev)}});
        }
        j["multistart"] = {{"best", ctx.multistart->best}, {"runs", runs}};
    }

    Json ledger = Json::object();
    for (const auto& [k, v] : standard_metadata(ctx.convention)) {
        if (k != "tool") ledger[k] = v;
    }
    if (ctx.options) ledger["fit_mode"] = ctx.options->mode == FitMode::kJoint ? "joint" : "sequential";
    ledger["dephasing_identifiability"] =
        "dephasing_time_ps enters only through zeta = 1 + 2 lifetime / dephasing_time; check its std_error";
    j["assumptions"] = ledger;
    return j.dump(2) + "\n";
}

Series residual_table(const FitResult& r) {
    Series s;
    s.columns = {"dataset", "index", "detuning_uev", "tau_ps", "measured", "model", "residual"};
    for (const PointResidual& pr : r.breakdown.points) {
        const double dataset = pr.dataset == "transmission" ? 0.0 : pr.dataset == "g2zero" ? 1.0 : 2.0;
        s.add_row({dataset, static_cast<double>(pr.index), pr.detuning_uev, pr.tau_ps, pr.measured, pr.model,
                   pr.residual},
                  pr.excluded ? "excluded" : "");
    }
    s.add_metadata("dataset_codes", "0 transmission; 1 g2zero; 2 histogram");
    return s;
}

}  // namespace fanostat

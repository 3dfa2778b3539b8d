#include "fanostat/scan.hpp"

#include <cmath>
#include <limits>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/bloch_oracle.hpp"
#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string label(double v) { return format_double(v); }

void add_parameter_metadata(Series& s, const ScanRequest& r) {
    const PhysicalParams& p = r.params;
    s.add_metadata("mode", scan_mode_name(r.mode));
    s.add_metadata("omega0_uev", format_double(p.omega0_uev));
    s.add_metadata("lifetime_ps", format_double(p.lifetime_ps));
    s.add_metadata("dephasing_time_ps", format_double(p.dephasing_time_ps));
    s.add_metadata("beta", format_double(p.beta));
    s.add_metadata("t0", format_double(p.t0));
    s.add_metadata("sigma_wander_uev", format_double(p.sigma_wander_uev));
    s.add_metadata("drive_amp", format_double(p.drive_amp));
    s.add_metadata("detector_resp_ps", format_double(p.detector_resp_ps));
    s.add_metadata("average", r.settings.average ? "on" : "off");
    s.add_metadata("convolve", r.settings.convolve ? "on" : "off");
    s.add_metadata("grid", format_double(r.grid.start) + ":" + format_double(r.grid.stop) + ":" +
                               std::to_string(r.grid.count));
}

ModelSettings bare(const ModelSettings& s) {
    ModelSettings out = s;
    out.average = false;
    out.convolve = false;
    return out;
}

// Runs `body`, turning library errors into a flagged row.
template <typename Body>
void guarded_row(Series& s, std::vector<double> prefix, std::size_t width, Body&& body) {
    try {
        std::vector<double> values = body();
        std::string flag;
        for (double v : values) {
            if (!std::isfinite(v)) flag = "divergent";
        }
        prefix.insert(prefix.end(), values.begin(), values.end());
        s.add_row(std::move(prefix), flag);
    } catch (const Error& e) {
        prefix.resize(prefix.size() + width, kNaN);
        s.add_row(std::move(prefix), std::string(category_name(e.category())) + ": " + e.what());
    }
}

}  // namespace

ScanMode parse_scan_mode(std::string_view name) {
    if (name == "transmission") return ScanMode::kTransmission;
    if (name == "g2zero") return ScanMode::kG2Zero;
    if (name == "g2trace") return ScanMode::kG2Trace;
    if (name == "decompose") return ScanMode::kDecompose;
    if (name == "oracle-check") return ScanMode::kOracleCheck;
    if (name == "fp-background") return ScanMode::kFpBackground;
    fail(ErrorCategory::kConfig, "unknown scan mode '" + std::string(name) + "'");
}

const char* scan_mode_name(ScanMode mode) {
    switch (mode) {
        case ScanMode::kTransmission: return "transmission";
        case ScanMode::kG2Zero: return "g2zero";
        case ScanMode::kG2Trace: return "g2trace";
        case ScanMode::kDecompose: return "decompose";
        case ScanMode::kOracleCheck: return "oracle-check";
        case ScanMode::kFpBackground: return "fp-background";
    }
    return "?";
}

Grid Grid::parse(std::string_view text) {
    Grid g;
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
        fail(ErrorCategory::kInvalidArgument, "grid must be start:stop:count, got '" + std::string(text) + "'");
    }
    const auto start = parse_number(text.substr(0, a));
    const auto stop = parse_number(text.substr(a + 1, b - a - 1));
    const auto count = parse_number(text.substr(b + 1));
    if (!start || !stop || !count || *count != std::floor(*count) || std::abs(*count) > 1e7) {
        fail(ErrorCategory::kInvalidArgument, "grid must be start:stop:count, got '" + std::string(text) + "'");
    }
    g.start = *start;
    g.stop = *stop;
    g.count = static_cast<int>(*count);
    g.validate();
    return g;
}

void Grid::validate() const {
    require(std::isfinite(start) && std::isfinite(stop), "grid bounds must be finite");
    require(start < stop, "grid start must be < stop");
    require(count >= 2, "grid count must be >= 2");
}

std::vector<double> Grid::values() const {
    validate();
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = i + 1 == count ? stop : start + (stop - start) * i / (count - 1);
    }
    return out;
}

void ScanRequest::validate() const {
    grid.validate();
    params.validate();
    require(std::isfinite(detuning_uev), "detuning must be finite");
    require(std::isfinite(tau_ps), "tau must be finite");
    if (mode == ScanMode::kDecompose) {
        require(!t0_list.empty(), "decompose needs at least one bare transmission");
        for (double t : t0_list) require(t > 0.0 && t <= 1.0, "bare transmissions must lie in (0, 1]");
    }
    if (mode == ScanMode::kOracleCheck) {
        require(std::isfinite(oracle_alpha) && oracle_alpha > 0.0, "oracle alpha must be > 0");
        require(!oracle_tau_ps.empty(), "oracle-check needs at least one delay");
    }
    if (mode == ScanMode::kFpBackground) fp.validate();
}

ScanRequest scan_request_from(const Config& config, std::optional<ScanMode> mode) {
    ScanRequest r;
    r.mode = mode ? *mode : parse_scan_mode(config.get_string("mode", "transmission"));
    r.params = physical_params_from(config);
    r.settings = model_settings_from(config);
    r.convention = frequency_convention_from(config);
    if (r.mode == ScanMode::kG2Trace) r.grid = Grid{0.0, 2000.0, 201};
    if (r.mode == ScanMode::kFpBackground) r.grid = Grid{905.0, 925.0, 401};
    if (const auto g = config.get("grid")) r.grid = Grid::parse(*g);
    r.detuning_uev = config.get_double("detuning_uev", r.detuning_uev);
    r.tau_ps = config.get_double("tau_ps", r.tau_ps);
    r.t0_list = config.get_list("bare_transmission_list", r.t0_list);
    r.oracle_alpha = config.get_double("alpha", r.oracle_alpha);
    r.oracle_tau_ps = config.get_list("oracle_tau_ps", r.oracle_tau_ps);
    r.fp.reflectivity = config.get_double("fp_reflectivity", r.fp.reflectivity);
    if (config.has("fp_fsr_nm")) r.fp.fsr_nm = config.get_double("fp_fsr_nm", 0.0);
    r.fp.round_trip_um = config.get_double("fp_round_trip_um", r.fp.round_trip_um);
    r.fp.group_index = config.get_double("fp_group_index", r.fp.group_index);
    r.fp.reference_nm = config.get_double("fp_reference_nm", r.fp.reference_nm);
    if (r.mode == ScanMode::kFpBackground && !r.fp.fsr_nm && r.fp.round_trip_um == 0.0) r.fp.fsr_nm = 2.0;
    try {
        r.validate();
    } catch (const Error& e) {
        fail(ErrorCategory::kConfig, e.what());
    }
    return r;
}

Series run_scan(const ScanRequest& r) {
    r.validate();
    Series s;
    s.metadata = standard_metadata(r.convention);
    add_parameter_metadata(s, r);
    const PhysicalParams& p = r.params;
    const std::vector<double> grid = r.grid.values();

    switch (r.mode) {
        case ScanMode::kTransmission: {
            s.columns = {"detuning_uev", "delta", "transmission", "transmission_single", "absolute_transmission"};
            for (double d : grid) {
                guarded_row(s, {d, reduced_detuning(d, p.lifetime_ps)}, 3, [&] {
                    const double t = model_transmission(p, d, r.settings);
                    return std::vector<double>{t, model_transmission(p, d, bare(r.settings)), p.t0 * p.t0 * t};
                });
            }
            break;
        }
        case ScanMode::kG2Zero: {
            s.add_metadata("tau_ps", format_double(r.tau_ps));
            s.columns = {"detuning_uev", "delta", "g2", "g2_single"};
            for (double d : grid) {
                guarded_row(s, {d, reduced_detuning(d, p.lifetime_ps)}, 2, [&] {
                    return std::vector<double>{model_g2(p, d, r.tau_ps, r.settings),
                                               model_g2(p, d, r.tau_ps, bare(r.settings))};
                });
            }
            break;
        }
        case ScanMode::kG2Trace: {
            s.add_metadata("detuning_uev", format_double(r.detuning_uev));
            s.columns = {"tau_ps", "tau_reduced", "g2", "g2_single"};
            std::vector<double> measured, single;
            std::string failure;
            try {
                measured = model_g2_trace(p, r.detuning_uev, grid, r.settings);
                single = model_g2_trace(p, r.detuning_uev, grid, bare(r.settings));
            } catch (const Error& e) {
                failure = std::string(category_name(e.category())) + ": " + e.what();
            }
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double tr = reduced_time(grid[i], p.lifetime_ps);
                guarded_row(s, {grid[i], tr}, 2, [&] {
                    if (!failure.empty()) fail(ErrorCategory::kNumerical, failure);
                    return std::vector<double>{measured[i], single[i]};
                });
            }
            break;
        }
        case ScanMode::kDecompose: {
            s.add_metadata("regime", "ideal waveguide: beta = 1, no dephasing, weak pump");
            s.columns = {"detuning_uev", "delta"};
            for (double T0 : r.t0_list) {
                const std::string tag = "_T0=" + label(T0);
                for (const char* name : {"product", "bound", "interference", "total"}) {
                    s.columns.push_back(name + tag);
                }
            }
            for (double d : grid) {
                const double delta = reduced_detuning(d, p.lifetime_ps);
                guarded_row(s, {d, delta}, 4 * r.t0_list.size(), [&] {
                    std::vector<double> v;
                    for (double T0 : r.t0_list) {
                        const double phi = background_phase(std::sqrt(T0));
                        const CorrelatorDecomposition c = g2zero_ideal(delta, phi, std::cos(phi) * std::cos(phi));
                        v.insert(v.end(), {c.product_term, c.bound_term, c.interference_term, c.total});
                    }
                    return v;
                });
            }
            break;
        }
        case ScanMode::kOracleCheck: {
            s.add_metadata("alpha", format_double(r.oracle_alpha));
            s.columns = {"detuning_uev", "delta",    "tau_ps",      "g1_oracle",  "g1_closed",
                         "g1_abs_diff",  "g2_oracle", "g2_closed", "g2_abs_diff"};
            const DimensionlessParams base = to_dimensionless(p, p.omega0_uev);
            ReducedModel model = base.model();
            model.alpha = r.oracle_alpha;
            std::vector<double> tau_reduced;
            for (double t : r.oracle_tau_ps) tau_reduced.push_back(reduced_time(t, p.lifetime_ps));
            for (double d : grid) {
                const double delta = reduced_detuning(d, p.lifetime_ps);
                std::vector<double> g2o;
                double g1o = kNaN;
                double g1c = kNaN;
                std::string failure;
                try {
                    const BlochOracle oracle(delta, model);
                    g1o = oracle.output_correlator_g1();
                    g1c = g1_general(delta, model);
                    g2o = oracle.output_correlator_g2(tau_reduced);
                } catch (const Error& e) {
                    failure = std::string(category_name(e.category())) + ": " + e.what();
                }
                for (std::size_t k = 0; k < tau_reduced.size(); ++k) {
                    guarded_row(s, {d, delta, r.oracle_tau_ps[k]}, 6, [&] {
                        if (!failure.empty()) fail(ErrorCategory::kNumerical, failure);
                        const double g2c = g2_tau_general(tau_reduced[k], delta, model.zeta, model.beta, model.phi);
                        return std::vector<double>{g1o, g1c, std::abs(g1o - g1c), g2o[k], g2c, std::abs(g2o[k] - g2c)};
                    });
                }
            }
            break;
        }
        case ScanMode::kFpBackground: {
            s.add_metadata("fp_reflectivity", format_double(r.fp.reflectivity));
            s.add_metadata("fp_optical_path_nm", format_double(r.fp.optical_path_nm()));
            s.add_metadata("fp_reference_nm", format_double(r.fp.reference_nm));
            s.columns = {"wavelength_nm", "transmission", "t0"};
            for (double w : grid) {
                guarded_row(s, {w}, 2, [&] {
                    const double t = fp_transmission(r.fp, w);
                    return std::vector<double>{t, std::sqrt(t)};
                });
            }
            break;
        }
    }
    return s;
}

}  // namespace fanostat

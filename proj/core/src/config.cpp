#include "fanostat/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    fail(ErrorCategory::kConfig, where + ": " + what);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"omega0_uev", "µeV", "emitter transition energy"},
        {"omega0_thz", "THz", "emitter transition frequency (used when omega0_uev is absent)"},
        {"frequency_convention", "-", "ordinary (E = h f) or angular (E = hbar omega) for omega0_thz"},
        {"lifetime_ps", "ps", "radiative lifetime 1/gamma"},
        {"dephasing_time_ps", "ps", "pure dephasing time 1/gamma_de; inf for none"},
        {"beta", "-", "waveguide coupling efficiency in [0, 1]"},
        {"t0", "-", "background transmission amplitude in [0, 1]"},
        {"sigma_wander_uev", "µeV", "standard deviation of spectral wandering"},
        {"drive_amp", "ps^-1/2", "coherent drive amplitude (square root of photon flux)"},
        {"detector_resp_ps", "ps", "standard deviation of the detector response"},
        {"detector_fwhm_ps", "ps", "detector response FWHM (used when detector_resp_ps is absent)"},
        {"average", "on/off", "average over spectral wandering"},
        {"convolve", "on/off", "convolve g2 with the detector response"},
        {"quadrature_rule", "-", "auto, gauss-hermite or trapezoid"},
        {"quadrature_points", "-", "Gauss-Hermite order"},
        {"quadrature_span", "sigma", "half-width of the trapezoid window"},
        {"nodes_per_linewidth", "-", "trapezoid nodes per natural linewidth"},
        {"mode", "-", "scan quantity: transmission, g2zero, g2trace, decompose"},
        {"grid", "start:stop:count", "scan grid (detuning µeV, delay ps or wavelength nm)"},
        {"detuning_uev", "µeV", "laser detuning for g2trace scans"},
        {"tau_ps", "ps", "delay for g2zero scans (default 0)"},
        {"bare_transmission_list", "-", "bare transmissions T0 for decompose scans"},
        {"alpha", "-", "reduced pump 4 beta |alpha|^2 / gamma for oracle-check"},
        {"oracle_tau_ps", "ps", "delays compared by oracle-check"},
        {"transmission_data", "path", "CSV: detuning_uev, transmission, uncertainty"},
        {"g2_data", "path", "CSV: detuning_uev, g2zero, uncertainty"},
        {"histogram_data", "path list", "CSV files: tau_ps, counts; detuning in metadata"},
        {"reference_energy_uev", "µeV", "energy the data detunings are measured from"},
        {"fit_mode", "-", "joint or sequential"},
        {"g2_weight", "-", "weight of g2 residuals relative to transmission"},
        {"fit_free", "-", "comma list of fitted parameters"},
        {"multistart", "on/off", "restart from the t0 x sigma grid and keep the best"},
        {"max_iterations", "-", "optimizer iteration cap"},
        {"omega0_window_uev", "µeV", "allowed omega0 excursion from the start"},
        {"lifetime_bounds_ps", "ps", "lo,hi"},
        {"dephasing_bounds_ps", "ps", "lo,hi"},
        {"sigma_bounds_uev", "µeV", "lo,hi"},
        {"t0_bounds", "-", "lo,hi"},
        {"beta_bounds", "-", "lo,hi"},
        {"fp_reflectivity", "-", "mirror power reflectivity R in [0, 1)"},
        {"fp_fsr_nm", "nm", "free spectral range at the reference wavelength"},
        {"fp_round_trip_um", "µm", "geometric round-trip length (used when fp_fsr_nm is absent)"},
        {"fp_group_index", "-", "group index for fp_round_trip_um"},
        {"fp_reference_nm", "nm", "wavelength of one cavity resonance"},
    };
    return keys;
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) config_error(where, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!valid_key(key)) config_error(where, "invalid key '" + key + "'");
        cfg.values_[key] = value;
        cfg.origin_[key] = where;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCategory::kIo, "cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        config_error("--set", "expected key=value, got '" + std::string(assignment) + "'");
    }
    const std::string key(trim(assignment.substr(0, eq)));
    if (!valid_key(key)) config_error("--set", "invalid key '" + key + "'");
    values_[key] = std::string(trim(assignment.substr(eq + 1)));
    origin_[key] = "--set";
}

void Config::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) config_error("set", "invalid key '" + key + "'");
    values_[key] = value;
    origin_[key] = "set";
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto raw = get(key);
    if (!raw) return fallback;
    const auto v = parse_number(*raw);
    if (!v) config_error(origin_.at(key), "'" + key + "' is not a number: '" + *raw + "'");
    return *v;
}

int Config::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        config_error(origin_.at(key), "'" + key + "' must be an integer");
    }
    return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto raw = get(key);
    if (!raw) return fallback;
    if (*raw == "on" || *raw == "true" || *raw == "yes" || *raw == "1") return true;
    if (*raw == "off" || *raw == "false" || *raw == "no" || *raw == "0") return false;
    config_error(origin_.at(key), "'" + key + "' must be on or off, got '" + *raw + "'");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto raw = get(key);
    if (!raw) return fallback;
    std::vector<double> out;
    std::string_view rest = *raw;
    while (true) {
        const auto comma = rest.find(',');
        const auto item = parse_number(rest.substr(0, comma));
        if (!item) config_error(origin_.at(key), "'" + key + "' must be a comma-separated list of numbers");
        out.push_back(*item);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

void Config::reject_unknown_keys() const {
    const auto& known = config_keys();
    for (const auto& [key, value] : values_) {
        const bool found = std::any_of(known.begin(), known.end(), [&](const ConfigKey& k) { return key == k.key; });
        if (!found) config_error(origin_.at(key), "unknown key '" + key + "'");
    }
}

units::FrequencyConvention frequency_convention_from(const Config& config) {
    const std::string c = config.get_string("frequency_convention", "ordinary");
    if (c == "ordinary") return units::FrequencyConvention::kOrdinary;
    if (c == "angular") return units::FrequencyConvention::kAngular;
    fail(ErrorCategory::kConfig, "frequency_convention must be ordinary or angular, got '" + c + "'");
}

PhysicalParams physical_params_from(const Config& config, const PhysicalParams& defaults) {
    PhysicalParams p = defaults;
    if (config.has("omega0_uev")) {
        p.omega0_uev = config.get_double("omega0_uev", p.omega0_uev);
    } else if (config.has("omega0_thz")) {
        p.omega0_uev = units::energy_from_frequency_thz(config.get_double("omega0_thz", 0.0),
                                                        frequency_convention_from(config));
    }
    p.lifetime_ps = config.get_double("lifetime_ps", p.lifetime_ps);
    p.dephasing_time_ps = config.get_double("dephasing_time_ps", p.dephasing_time_ps);
    p.beta = config.get_double("beta", p.beta);
    p.t0 = config.get_double("t0", p.t0);
    p.sigma_wander_uev = config.get_double("sigma_wander_uev", p.sigma_wander_uev);
    p.drive_amp = config.get_double("drive_amp", p.drive_amp);
    if (config.has("detector_resp_ps")) {
        p.detector_resp_ps = config.get_double("detector_resp_ps", p.detector_resp_ps);
    } else if (config.has("detector_fwhm_ps")) {
        p.detector_resp_ps = units::sigma_from_fwhm(config.get_double("detector_fwhm_ps", 0.0));
    }
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorCategory::kConfig, std::string("invalid parameters: ") + e.what());
    }
    return p;
}

ModelSettings model_settings_from(const Config& config) {
    ModelSettings s;
    s.average = config.get_bool("average", s.average);
    s.convolve = config.get_bool("convolve", s.convolve);
    const std::string rule = config.get_string("quadrature_rule", "auto");
    if (rule == "auto") {
        s.rule = QuadratureRule::kAuto;
    } else if (rule == "gauss-hermite") {
        s.rule = QuadratureRule::kGaussHermite;
    } else if (rule == "trapezoid") {
        s.rule = QuadratureRule::kTrapezoid;
    } else {
        fail(ErrorCategory::kConfig, "quadrature_rule must be auto, gauss-hermite or trapezoid");
    }
    s.quadrature_points = config.get_int("quadrature_points", s.quadrature_points);
    s.quadrature_span = config.get_double("quadrature_span", s.quadrature_span);
    s.nodes_per_linewidth = config.get_int("nodes_per_linewidth", s.nodes_per_linewidth);
    AveragingSpec check;
    check.quadrature_points = s.quadrature_points;
    check.quadrature_span = s.quadrature_span;
    check.nodes_per_linewidth = s.nodes_per_linewidth;
    try {
        check.validate();
    } catch (const Error& e) {
        fail(ErrorCategory::kConfig, std::string("invalid quadrature settings: ") + e.what());
    }
    return s;
}

}  // namespace fanostat

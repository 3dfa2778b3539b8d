#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fanostat/observables.hpp"
#include "fanostat/physical_model.hpp"

namespace fanostat {

struct ConfigKey {
    const char* key;
    const char* unit;
    const char* description;
};

/// Every key the tools understand, with units.
const std::vector<ConfigKey>& config_keys();

/// Flat `key = value` file. `#` starts a comment; blank lines are ignored.
/// Later assignments (and overrides) replace earlier ones.
class Config {
public:
    static Config parse(std::string_view text, const std::string& source = "<text>");
    static Config load(const std::string& path);

    /// Applies "key=value". Throws Error(kConfig) on malformed input.
    void apply_override(std::string_view assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    /// Accepts on/off, true/false, yes/no, 1/0.
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated numbers.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    /// Throws Error(kConfig) naming the first key not in config_keys().
    void reject_unknown_keys() const;

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> origin_;
};

/// Strict decimal parse of the whole string; accepts inf/-inf. Nullopt otherwise.
std::optional<double> parse_number(std::string_view text);

/// Physical parameters from the config, falling back to `defaults` per key.
PhysicalParams physical_params_from(const Config& config, const PhysicalParams& defaults = reference_configuration());
ModelSettings model_settings_from(const Config& config);
units::FrequencyConvention frequency_convention_from(const Config& config);

}  // namespace fanostat

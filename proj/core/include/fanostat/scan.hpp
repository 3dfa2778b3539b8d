#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fanostat/config.hpp"
#include "fanostat/fp_background.hpp"
#include "fanostat/observables.hpp"
#include "fanostat/series_io.hpp"

namespace fanostat {

enum class ScanMode { kTransmission, kG2Zero, kG2Trace, kDecompose, kOracleCheck, kFpBackground };

ScanMode parse_scan_mode(std::string_view name);
const char* scan_mode_name(ScanMode mode);

/// Uniform grid of `count` points from start to stop inclusive.
struct Grid {
    double start = 0.0;
    double stop = 1.0;
    int count = 2;

    /// Parses "start:stop:count". Throws Error(kInvalidArgument).
    static Grid parse(std::string_view text);
    void validate() const;
    std::vector<double> values() const;
};

struct ScanRequest {
    ScanMode mode = ScanMode::kTransmission;
    PhysicalParams params = reference_configuration();
    ModelSettings settings;
    units::FrequencyConvention convention = units::FrequencyConvention::kOrdinary;
    /// Detuning in µeV; delay in ps for g2trace; wavelength in nm for fp-background.
    Grid grid{-40.0, 40.0, 81};
    double detuning_uev = 0.0;
    double tau_ps = 0.0;
    /// Bare transmissions T0 for decompose scans.
    std::vector<double> t0_list{1.0, 0.15};
    double oracle_alpha = 1e-3;
    std::vector<double> oracle_tau_ps{0.0, 100.0, 250.0, 500.0, 1000.0};
    FPBackground fp;

    void validate() const;
};

/// Builds a request from config keys (mode, grid, ...). `mode` overrides the `mode` key.
ScanRequest scan_request_from(const Config& config, std::optional<ScanMode> mode = std::nullopt);

/// Evaluates the requested quantity on the grid. Points where the model is
/// singular or fails are emitted with NaN values and a flag; they do not abort.
Series run_scan(const ScanRequest& request);

}  // namespace fanostat

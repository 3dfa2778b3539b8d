#include "fanostat/physical_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fanostat/error.hpp"

namespace fanostat {

std::string_view category_name(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::kInvalidArgument: return "invalid_argument";
        case ErrorCategory::kConfig: return "config";
        case ErrorCategory::kParse: return "parse";
        case ErrorCategory::kIo: return "io";
        case ErrorCategory::kNumerical: return "numerical";
    }
    return "unknown";
}

int exit_code(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::kInvalidArgument: return 2;
        case ErrorCategory::kConfig: return 3;
        case ErrorCategory::kParse: return 4;
        case ErrorCategory::kIo: return 5;
        case ErrorCategory::kNumerical: return 6;
    }
    return 1;
}

void PhysicalParams::validate() const {
    require(std::isfinite(omega0_uev), "omega0 must be finite");
    require(std::isfinite(lifetime_ps) && lifetime_ps > 0.0, "lifetime must be finite and > 0");
    require(!std::isnan(dephasing_time_ps) && dephasing_time_ps > 0.0,
            "dephasing time must be > 0 (infinity allowed)");
    require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
    require(std::isfinite(t0) && t0 >= 0.0 && t0 <= 1.0, "t0 must lie in [0, 1]");
    require(std::isfinite(sigma_wander_uev) && sigma_wander_uev >= 0.0,
            "spectral wandering sigma must be finite and >= 0");
    require(std::isfinite(drive_amp) && drive_amp >= 0.0, "drive amplitude must be finite and >= 0");
    require(std::isfinite(detector_resp_ps) && detector_resp_ps >= 0.0,
            "detector response must be finite and >= 0");
}

double ReducedModel::t0() const { return std::cos(phi); }

double reflection_amplitude(double t0) {
    require(std::isfinite(t0) && t0 >= 0.0 && t0 <= 1.0, "t0 must lie in [0, 1]");
    return -std::sqrt((1.0 - t0) * (1.0 + t0));
}

double background_phase(double t0) {
    return std::atan2(reflection_amplitude(t0), t0);
}

double reduced_detuning(double detuning, double lifetime_ps) {
    return 2.0 * detuning * lifetime_ps / units::kHbar;
}

double detuning_uev(double reduced, double lifetime_ps) {
    return 0.5 * reduced * units::kHbar / lifetime_ps;
}

double zeta_from_times(double lifetime_ps, double dephasing_time_ps) {
    return 1.0 + 2.0 * lifetime_ps / dephasing_time_ps;
}

double dephasing_time_from_zeta(double zeta, double lifetime_ps) {
    require(zeta >= 1.0, "zeta must be >= 1");
    if (zeta == 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * lifetime_ps / (zeta - 1.0);
}

double reduced_sigma(double sigma, double lifetime_ps) { return reduced_detuning(sigma, lifetime_ps); }

double sigma_uev(double reduced, double lifetime_ps) { return detuning_uev(reduced, lifetime_ps); }

double reduced_time(double tau_ps, double lifetime_ps) { return 0.5 * tau_ps / lifetime_ps; }

double time_ps(double reduced, double lifetime_ps) { return 2.0 * reduced * lifetime_ps; }

double reduced_drive(double drive_amp, double beta, double lifetime_ps) {
    return 4.0 * beta * drive_amp * drive_amp * lifetime_ps;
}

PhysicalParams reference_configuration() {
    PhysicalParams p;
    p.omega0_uev = units::energy_from_frequency_thz(327.524, units::FrequencyConvention::kOrdinary);
    p.lifetime_ps = 125.0;
    p.dephasing_time_ps = 38000.0;
    p.beta = 0.99;
    p.t0 = 0.62;
    p.sigma_wander_uev = 4.7;
    p.drive_amp = 0.0;
    p.detector_resp_ps = 34.0;
    return p;
}

DimensionlessParams to_dimensionless(const PhysicalParams& p, double laser_energy_uev) {
    require(std::isfinite(laser_energy_uev), "laser energy must be finite");
    p.validate();
    DimensionlessParams out;
    out.delta = reduced_detuning(laser_energy_uev - p.omega0_uev, p.lifetime_ps);
    out.zeta = zeta_from_times(p.lifetime_ps, p.dephasing_time_ps);
    out.alpha = reduced_drive(p.drive_amp, p.beta, p.lifetime_ps);
    out.phi = background_phase(p.t0);
    out.T0 = p.t0 * p.t0;
    out.beta = p.beta;
    out.sigma = reduced_sigma(p.sigma_wander_uev, p.lifetime_ps);
    out.t_resp = reduced_time(p.detector_resp_ps, p.lifetime_ps);
    return out;
}

CouplingVector coupling_vector(double beta, double gamma, double phi) {
    require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(phi), "phi must be finite");
    const Complex amplitude =
        Complex(0.0, 1.0) * std::polar(1.0, 0.5 * phi) * std::sqrt(0.5 * beta * gamma);
    return CouplingVector{{amplitude, amplitude}};
}

ScatteringMatrix scattering_matrix(double t0) {
    const double r0 = reflection_amplitude(t0);
    ScatteringMatrix c;
    c << Complex(t0, 0.0), Complex(0.0, r0),
         Complex(0.0, r0), Complex(t0, 0.0);
    return c;
}

}  // namespace fanostat

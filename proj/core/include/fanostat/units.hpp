#pragma once

#include <cmath>
#include <numbers>

// Unit system: energies in µeV, times in ps, rates in 1/ps.

namespace fanostat::units {

/// Reduced Planck constant, µeV·ps. The only conversion constant in the library.
inline constexpr double kHbar = 658.2119569;
/// Planck constant h = 2πħ, µeV·ps (equivalently µeV per THz).
inline constexpr double kPlanck = 2.0 * std::numbers::pi * kHbar;
/// Speed of light, nm/ps.
inline constexpr double kSpeedOfLight = 299792.458;

enum class FrequencyConvention {
    kOrdinary,  // E = h f
    kAngular,   // E = ħ ω
};

constexpr double energy_from_frequency_thz(double f_thz, FrequencyConvention convention) {
    return convention == FrequencyConvention::kOrdinary ? kPlanck * f_thz : kHbar * f_thz;
}

constexpr double frequency_thz_from_energy(double energy_uev, FrequencyConvention convention) {
    return convention == FrequencyConvention::kOrdinary ? energy_uev / kPlanck
                                                        : energy_uev / kHbar;
}

/// Vacuum wavelength (nm) of a photon with the given energy (µeV).
constexpr double wavelength_nm_from_energy(double energy_uev) {
    return kPlanck * kSpeedOfLight / energy_uev;
}

constexpr double energy_from_wavelength_nm(double wavelength_nm) {
    return kPlanck * kSpeedOfLight / wavelength_nm;
}

/// Gaussian standard deviation from a full width at half maximum.
inline double sigma_from_fwhm(double fwhm) {
    return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

constexpr const char* convention_name(FrequencyConvention convention) {
    return convention == FrequencyConvention::kOrdinary ? "ordinary (E = h f)"
                                                        : "angular (E = hbar omega)";
}

}  // namespace fanostat::units

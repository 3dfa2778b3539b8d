#pragma once

#include <optional>

namespace fanostat {

/// Symmetric, lossless two-mirror cavity formed by partially reflective
/// waveguide terminations.
struct FPBackground {
    double reflectivity = 0.0;
    /// Free spectral range at the reference wavelength. Takes precedence over the geometry.
    std::optional<double> fsr_nm;
    double round_trip_um = 0.0;
    double group_index = 1.0;
    /// A wavelength at which the cavity is resonant.
    double reference_nm = 915.0;

    void validate() const;
    /// Round-trip optical path length in nm.
    double optical_path_nm() const;
};

/// Airy transmission (1-R)² / ((1-R)² + 4R sin²(θ/2)), θ = 2π L (1/λ - 1/λ_ref).
double fp_transmission(const FPBackground& fp, double wavelength_nm);
/// Background amplitude t0 = sqrt(T).
double fp_t0(const FPBackground& fp, double wavelength_nm);

}  // namespace fanostat

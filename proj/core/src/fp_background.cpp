#include "fanostat/fp_background.hpp"

#include <cmath>
#include <numbers>

#include "fanostat/error.hpp"

namespace fanostat {

void FPBackground::validate() const {
    require(std::isfinite(reflectivity) && reflectivity >= 0.0, "reflectivity must be >= 0");
    require(reflectivity < 1.0, "reflectivity R = 1 gives a closed cavity; need R < 1");
    require(std::isfinite(reference_nm) && reference_nm > 0.0, "reference wavelength must be > 0");
    if (fsr_nm) {
        require(std::isfinite(*fsr_nm) && *fsr_nm > 0.0, "free spectral range must be > 0");
    } else {
        require(std::isfinite(round_trip_um) && round_trip_um > 0.0,
                "give either a free spectral range or a round-trip length > 0");
        require(std::isfinite(group_index) && group_index > 0.0, "group index must be > 0");
    }
}

double FPBackground::optical_path_nm() const {
    validate();
    if (fsr_nm) return reference_nm * reference_nm / *fsr_nm;
    return group_index * round_trip_um * 1e3;
}

double fp_transmission(const FPBackground& fp, double wavelength_nm) {
    require(std::isfinite(wavelength_nm) && wavelength_nm > 0.0, "wavelength must be > 0");
    const double path = fp.optical_path_nm();
    const double r = fp.reflectivity;
    const double theta = 2.0 * std::numbers::pi * path * (1.0 / wavelength_nm - 1.0 / fp.reference_nm);
    const double s = std::sin(0.5 * theta);
    const double loss = (1.0 - r) * (1.0 - r);
    return loss / (loss + 4.0 * r * s * s);
}

double fp_t0(const FPBackground& fp, double wavelength_nm) {
    return std::sqrt(fp_transmission(fp, wavelength_nm));
}

}  // namespace fanostat

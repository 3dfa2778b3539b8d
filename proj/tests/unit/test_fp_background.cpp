#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fanostat/error.hpp"
#include "fanostat/fp_background.hpp"

using namespace fanostat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("no mirrors, no fringes") {
    FPBackground fp;
    fp.fsr_nm = 2.0;
    for (double w = 900; w <= 930; w += 0.37) CHECK(fp_transmission(fp, w) == 1.0);
}

TEST_CASE("unit transmission on resonance") {
    for (double r : {0.1, 0.5, 0.9, 0.99}) {
        FPBackground fp;
        fp.reflectivity = r;
        fp.fsr_nm = 2.0;
        CHECK_THAT(fp_transmission(fp, 915.0), WithinAbs(1.0, 1e-12));
        CHECK(fp_transmission(fp, 916.0) < 1.0);
    }
}

TEST_CASE("2 nm free spectral range at 915 nm") {
    FPBackground fp;
    fp.reflectivity = 0.6;
    fp.fsr_nm = 2.0;
    std::vector<double> peaks;
    const double step = 1e-4;
    for (double w = 905.0 + step; w < 925.0; w += step) {
        const double a = fp_transmission(fp, w - step), b = fp_transmission(fp, w), c = fp_transmission(fp, w + step);
        if (b > a && b >= c) peaks.push_back(w);
    }
    REQUIRE(peaks.size() >= 8);
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        if (std::abs(peaks[i] - 915.0) < 3.0) CHECK_THAT(peaks[i] - peaks[i - 1], WithinRel(2.0, 0.01));
    }
}

TEST_CASE("minimum transmission and amplitude") {
    FPBackground fp;
    fp.reflectivity = 0.36;
    fp.fsr_nm = 2.0;
    // anti-resonance halfway between peaks: ((1-R)/(1+R))²
    const double lo = fp_transmission(fp, 916.0);
    CHECK_THAT(lo, WithinRel(std::pow(0.64 / 1.36, 2), 1e-3));
    CHECK_THAT(fp_t0(fp, 916.0), WithinRel(std::sqrt(lo), 1e-15));
}

TEST_CASE("geometry gives the optical path") {
    FPBackground fp;
    fp.round_trip_um = 100.0;
    fp.group_index = 4.0;
    CHECK_THAT(fp.optical_path_nm(), WithinRel(4e5, 1e-15));
    fp.fsr_nm = 2.0;
    CHECK_THAT(fp.optical_path_nm(), WithinRel(915.0 * 915.0 / 2.0, 1e-15));
}

TEST_CASE("invalid cavities are rejected") {
    FPBackground fp;
    fp.fsr_nm = 2.0;
    fp.reflectivity = 1.0;
    CHECK_THROWS_AS(fp.validate(), Error);
    fp.reflectivity = -0.1;
    CHECK_THROWS_AS(fp.validate(), Error);
    FPBackground no_length;
    no_length.reflectivity = 0.3;
    CHECK_THROWS_AS(no_length.validate(), Error);
}

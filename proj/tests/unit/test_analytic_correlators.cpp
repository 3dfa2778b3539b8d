#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/error.hpp"

using namespace fanostat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double phi_of(double T0) { return background_phase(std::sqrt(T0)); }

// |g1 + e^{-|τ|} e^{i(2φ + δ|τ|)} / (t0² (1 + δ²))|² / g1², ideal waveguide.
double modulus_form(double tau, double delta, double phi) {
    const double g1 = g1_ideal(delta, phi);
    const double t0sq = std::cos(phi) * std::cos(phi);
    const std::complex<double> z =
        g1 + std::exp(-std::abs(tau)) * std::exp(std::complex<double>(0.0, 2 * phi + delta * std::abs(tau))) /
                 (t0sq * (1 + delta * delta));
    return std::norm(z) / (g1 * g1);
}

}  // namespace

TEST_CASE("g1_ideal spot values") {
    CHECK(g1_ideal(0.0, 0.0) == 0.0);
    const double phi = phi_of(0.15);
    CHECK_THAT(phi, WithinAbs(-1.17310, 1e-5));
    CHECK_THAT(g1_ideal(-std::tan(phi), phi), WithinAbs(0.0, 1e-15));
    CHECK_THAT(fano_maximum_detuning(phi), WithinAbs(-0.42008, 1e-5));
    CHECK_THAT(g1_ideal(fano_maximum_detuning(phi), phi), WithinAbs(1 / 0.15, 1e-10));
    CHECK_THROWS_AS(g1_ideal(0.3, -std::numbers::pi / 2), Error);
}

TEST_CASE("Fano maximum has unit absolute transmission") {
    for (double T0 : {0.05, 0.15, 0.3, 0.62 * 0.62, 0.8, 0.95}) {
        const double phi = phi_of(T0);
        const double dmax = fano_maximum_detuning(phi);
        CHECK_THAT(T0 * g1_ideal(dmax, phi), WithinAbs(1.0, 1e-10));
        CHECK(g1_ideal(dmax + 1e-3, phi) < g1_ideal(dmax, phi));
        CHECK(g1_ideal(dmax - 1e-3, phi) < g1_ideal(dmax, phi));
    }
}

TEST_CASE("g2zero_ideal decomposition") {
    const CorrelatorDecomposition d = g2zero_ideal(1.0, 0.0, 1.0);
    CHECK_THAT(d.product_term, WithinAbs(1.0, 1e-15));
    CHECK_THAT(d.bound_term, WithinAbs(1.0, 1e-14));
    CHECK_THAT(d.interference_term, WithinAbs(2.0, 1e-14));
    CHECK_THAT(d.total, WithinAbs(4.0, 1e-14));

    CHECK_THAT(g2zero_ideal(1e6, -0.5, std::cos(-0.5) * std::cos(-0.5)).total, WithinAbs(1.0, 1e-10));

    const double phi = phi_of(0.15);
    CHECK_THAT(g2zero_ideal(fano_maximum_detuning(phi), phi, 0.15).total, WithinAbs(0.5325, 1e-4));
}

TEST_CASE("decomposition invariants") {
    for (double T0 : {0.05, 0.15, 0.49, 0.51, 0.8, 1.0}) {
        const double phi = phi_of(T0);
        for (double delta = -10; delta <= 10; delta += 0.37) {
            const CorrelatorDecomposition d = g2zero_ideal(delta, phi, T0);
            REQUIRE_FALSE(d.divergent);
            CHECK(d.product_term == 1.0);
            CHECK(d.bound_term >= 0.0);
            CHECK_THAT(d.total, WithinAbs(d.product_term + d.bound_term + d.interference_term, 1e-12 * (1 + d.total)));
            if (T0 < 0.5) CHECK(d.interference_term < 0.0);
            if (T0 > 0.5) CHECK(d.interference_term > 0.0);
        }
    }
}

TEST_CASE("Fano zero is flagged, not thrown") {
    const double phi = phi_of(0.3);
    const CorrelatorDecomposition d = g2zero_ideal(fano_zero_detuning(phi), phi, 0.3);
    CHECK(d.divergent);
    CHECK(std::isinf(d.total));
}

TEST_CASE("ideal antibunching floor") {
    CHECK_THAT(ideal_min_g2zero(0.15), WithinAbs(0.51, 1e-15));
    CHECK(ideal_min_g2zero(0.5) == 1.0);
    CHECK(ideal_min_g2zero(0.9) == 1.0);
    CHECK(ideal_min_g2zero(1e-9) < 1e-8);
    for (double T0 : {0.01, 0.1, 0.15, 0.3, 0.45}) {
        const double phi = phi_of(T0);
        double lo = 1e300;
        for (double delta = -20; delta <= 20; delta += 1e-4) lo = std::min(lo, g2zero_ideal(delta, phi, T0).total);
        CHECK(lo >= ideal_min_g2zero(T0) - 1e-12);
        CHECK_THAT(lo, WithinAbs(ideal_min_g2zero(T0), 1e-6));
    }
}

TEST_CASE("g1_general limits") {
    const double phi = phi_of(0.4);
    for (double delta = -5; delta <= 5; delta += 0.5) {
        CHECK_THAT(g1_general(delta, {1.0, 1.0, phi, 0.0}), WithinAbs(g1_ideal(delta, phi), 1e-13));
        CHECK(g1_general(delta, {1.3, 0.0, phi, 0.7}) == 1.0);
        CHECK_THAT(g1_general(delta, {1.1, 0.8, phi, 1e12}), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("g2_tau_general reduces to the modulus form in the ideal case") {
    double worst = 0.0;
    for (double T0 : {0.15, 0.5, 1.0}) {
        const double phi = phi_of(T0);
        for (double delta = -10; delta <= 10; delta += 0.5) {
            if (std::abs(delta - fano_zero_detuning(phi)) < 1e-6) continue;
            for (double tau = -10; tau <= 10; tau += 0.25) {
                const double a = g2_tau_general(tau, delta, 1.0, 1.0, phi);
                const double b = modulus_form(tau, delta, phi);
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("g2_tau_general basic properties") {
    CHECK_THAT(g2_tau_general(0.0, 1.0, 1.0, 1.0, 0.0), WithinAbs(4.0, 1e-12));
    for (double zeta : {1.0, 1.2, 2.0, 3.5}) {
        for (double delta : {-3.0, 0.0, 1e-6, 0.7}) {
            CHECK_THAT(g2_tau_general(60.0, delta, zeta, 0.9, -0.6), WithinAbs(1.0, 1e-12));
            CHECK_THAT(g2_tau_general(-0.8, delta, zeta, 0.9, -0.6), WithinAbs(g2_tau_general(0.8, delta, zeta, 0.9, -0.6), 1e-13));
        }
    }
    for (double tau : {0.0, 0.3, 5.0}) CHECK_THAT(g2_tau_general(tau, 0.4, 1.3, 0.0, -0.7), WithinAbs(1.0, 1e-15));
}

TEST_CASE("zero delay equals g1 with doubled beta over g1 squared") {
    for (double zeta : {1.0, 1.2, 1.7}) {
        for (double beta : {0.3, 0.9, 1.0}) {
            for (double delta : {-4.0, -0.5, 0.0, 2.2}) {
                const double phi = -0.8;
                const double g1 = g1_general(delta, {zeta, beta, phi, 0.0});
                const double g1_2b = g1_general(delta, {zeta, 2 * beta, phi, 0.0});
                CHECK_THAT(g2_tau_general(0.0, delta, zeta, beta, phi), WithinRel(g1_2b / (g1 * g1), 1e-10));
            }
        }
    }
}

TEST_CASE("coefficients") {
    const G2Coefficients c = g2_coefficients(0.0, 1.0, 1.0, 0.0);
    CHECK_THAT(c.A, WithinAbs(1.0, 1e-12));
    const G2Coefficients off = g2_coefficients(0.7, 1.4, 0.0, -0.5);
    CHECK(off.A == 0.0);
    CHECK(off.B == 0.0);
    for (double T0 : {0.15, 0.6, 1.0}) {
        const double phi = phi_of(T0);
        for (double delta : {-2.0, 0.3, 4.0}) {
            const double cos4 = std::pow(std::cos(phi), 4);
            CHECK_THAT(g2_coefficients(delta, 1.0, 1.0, phi).A,
                       WithinRel(1.0 / (cos4 * std::pow(1 + delta * delta, 2)), 1e-12));
        }
    }
}

TEST_CASE("alternate closed forms agree at zeta = 1") {
    for (double beta : {0.5, 0.9, 1.0}) {
        for (double T0 : {0.15, 0.62 * 0.62, 1.0}) {
            const double phi = phi_of(T0);
            for (double delta : {-6.0, -1.1, -1e-5, 0.0, 2e-5, 0.4, 3.0}) {
                const ReducedModel m{1.0, beta, phi, 0.0};
                CHECK_THAT(alternate::g1_general(delta, m), WithinAbs(g1_general(delta, m), 1e-12));
                const G2Coefficients a = alternate::g2_coefficients(delta, 1.0, beta, phi);
                const G2Coefficients b = g2_coefficients(delta, 1.0, beta, phi);
                CHECK_THAT(a.A, WithinAbs(b.A, 1e-10 * (1 + std::abs(b.A))));
                CHECK_THAT(a.B, WithinAbs(b.B, 1e-8 * (1 + std::abs(b.B))));
                for (double tau : {0.0, 0.5, 2.0}) {
                    const double x = alternate::g2_tau(tau, delta, 1.0, beta, phi);
                    const double y = g2_tau_general(tau, delta, 1.0, beta, phi);
                    if (std::isfinite(y)) CHECK_THAT(x, WithinAbs(y, 1e-8 * (1 + std::abs(y))));
                }
            }
        }
    }
}

TEST_CASE("alternate B is continuous through the series threshold") {
    for (double zeta : {1.0, 1.0 + 1e-9}) {
        // extrapolate the closed form linearly from above the threshold
        const double b1 = alternate::g2_coefficients(1.01e-4, zeta, 0.9, -0.7).B;
        const double b2 = alternate::g2_coefficients(1.03e-4, zeta, 0.9, -0.7).B;
        const double below = alternate::g2_coefficients(0.99e-4, zeta, 0.9, -0.7).B;
        CHECK_THAT(below, WithinAbs(b1 - (b2 - b1), 1e-8 * (1 + std::abs(b1))));
    }
}

TEST_CASE("degenerate exponentials at zeta = 2 and zero detuning") {
    const double at = g2_tau_general(0.7, 0.0, 2.0, 0.8, -0.5);
    const double near = g2_tau_general(0.7, 1e-7, 2.0 + 1e-7, 0.8, -0.5);
    CHECK(std::isfinite(at));
    CHECK_THAT(at, WithinAbs(near, 1e-5));
}

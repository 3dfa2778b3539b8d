#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/ensemble_averaging.hpp"
#include "fanostat/error.hpp"

using namespace fanostat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ReducedModel reference_model() {
    const DimensionlessParams d = to_dimensionless(reference_configuration(), reference_configuration().omega0_uev);
    return d.model();
}

AveragingSpec reference_spec() {
    const DimensionlessParams d = to_dimensionless(reference_configuration(), reference_configuration().omega0_uev);
    AveragingSpec s;
    s.sigma = d.sigma;
    s.t_resp = d.t_resp;
    return s;
}

double reference_delta(double detuning_uev) { return reduced_detuning(detuning_uev, reference_configuration().lifetime_ps); }

}  // namespace

TEST_CASE("Gauss-Hermite nodes integrate polynomials against the standard normal") {
    for (int order : {1, 5, 21, 41}) {
        const QuadratureNodes q = gauss_hermite_nodes(order);
        REQUIRE(q.offsets.size() == static_cast<std::size_t>(order));
        CHECK_THAT(std::accumulate(q.weights.begin(), q.weights.end(), 0.0), WithinAbs(1.0, 1e-14));
        double m2 = 0, m4 = 0, m3 = 0;
        for (int i = 0; i < order; ++i) {
            const double x = q.offsets[i];
            m2 += q.weights[i] * x * x;
            m3 += q.weights[i] * x * x * x;
            m4 += q.weights[i] * x * x * x * x;
            CHECK_THAT(q.offsets[i], WithinAbs(-q.offsets[order - 1 - i], 1e-13));
        }
        CHECK_THAT(m3, WithinAbs(0.0, 1e-13));
        if (order >= 2) CHECK_THAT(m2, WithinAbs(1.0, 1e-12));
        if (order >= 3) CHECK_THAT(m4, WithinAbs(3.0, 1e-11));
    }
}

TEST_CASE("zero wandering is the identity") {
    const ReducedModel m{1.2, 0.9, -0.7, 0.3};
    AveragingSpec spec;
    for (double delta : {-5.0, -0.2, 0.0, 1.7, 8.0}) {
        CHECK(avg_g1(delta, m, spec) == g1_general(delta, m));
        for (double tau : {0.0, 0.4, 3.0}) {
            CHECK_THAT(avg_g2(tau, delta, m, spec), WithinRel(g2_tau_general(tau, delta, m.zeta, m.beta, m.phi), 1e-14));
        }
    }
}

TEST_CASE("far detuning and long delay limits") {
    const ReducedModel m = reference_model();
    const AveragingSpec spec = reference_spec();
    CHECK_THAT(avg_g1(1e5, m, spec), WithinAbs(1.0, 1e-4));
    CHECK_THAT(avg_g1(-1e5, m, spec), WithinAbs(1.0, 1e-4));
    for (double delta : {-3.0, 0.0, 3.4}) CHECK_THAT(avg_g2(80.0, delta, m, spec), WithinAbs(1.0, 1e-12));
}

TEST_CASE("Gaussian-averaged ideal dip equals the Voigt value") {
    // g1 = 1 - 1/(1 + δ²); E[1/(1 + x²)] for x ~ N(0, σ²) = sqrt(π/2)/σ · erfcx(1/(sqrt2 σ))
    const double sigma = 1.7852;
    const double z = 1.0 / (std::sqrt(2.0) * sigma);
    const double exact = 1.0 - std::sqrt(std::numbers::pi / 2) / sigma * std::exp(z * z) * std::erfc(z);
    AveragingSpec spec;
    spec.sigma = sigma;
    const double value = avg_g1(0.0, {1.0, 1.0, 0.0, 0.0}, spec);
    CHECK_THAT(value, WithinAbs(exact, 1e-9));
    CHECK_THAT(value, WithinAbs(0.52744, 1e-5));
}

TEST_CASE("the two quadrature rules agree") {
    const ReducedModel m{1.1, 0.95, -0.9, 0.0};
    AveragingSpec gh;
    gh.sigma = 0.2;
    gh.rule = QuadratureRule::kGaussHermite;
    AveragingSpec tr = gh;
    tr.rule = QuadratureRule::kTrapezoid;
    for (double delta : {-2.0, 0.0, 0.9}) {
        CHECK_THAT(avg_g1(delta, m, gh), WithinRel(avg_g1(delta, m, tr), 1e-8));
        CHECK_THAT(avg_g2(0.0, delta, m, gh), WithinRel(avg_g2(0.0, delta, m, tr), 1e-7));
    }
}

TEST_CASE("default quadrature converges under refinement") {
    const ReducedModel m = reference_model();
    const AveragingSpec spec = reference_spec();
    for (double d_uev : {-40.0, -9.0, 0.0, 9.0, 25.0}) {
        const QuadratureCheck c1 = avg_g1_checked(reference_delta(d_uev), m, spec);
        CHECK(c1.converged);
        CHECK(c1.relative_change < 1e-6);
        const QuadratureCheck c2 = avg_g2_checked(0.0, reference_delta(d_uev), m, spec);
        CHECK(c2.converged);
        CHECK(require_converged(c2) == c2.value);
    }
}

TEST_CASE("reference configuration at +9 ueV") {
    const AveragedCorrelator c(reference_delta(9.0), reference_model(), reference_spec());
    const double bare = c.g2(0.0);
    const double detected = c.detected_g2(0.0);
    CHECK(bare >= 1.9);
    CHECK(bare <= 2.5);
    CHECK_THAT(bare, WithinAbs(2.10708, 1e-5));
    CHECK(detected < bare);
    CHECK_THAT(detected, WithinAbs(1.96084, 1e-5));
    CHECK_THAT(c.detected_g2(60.0), WithinAbs(1.0, 1e-8));
}

TEST_CASE("averaging smears the Fano zero") {
    const double phi = background_phase(std::sqrt(0.3));
    const ReducedModel m{1.0, 1.0, phi, 0.0};
    const double zero = fano_zero_detuning(phi);
    CHECK(g2_tau_general(0.0, zero, 1.0, 1.0, phi) > 1e12);
    AveragingSpec spec;
    spec.sigma = 0.5;
    const double smeared = avg_g2(0.0, zero, m, spec);
    CHECK(std::isfinite(smeared));
    CHECK(smeared > 1.0);
}

TEST_CASE("detector kernel") {
    for (double t_resp : {0.05, 0.136, 1.0}) {
        const std::vector<double> k = detector_kernel(t_resp, t_resp / 8);
        CHECK_THAT(std::accumulate(k.begin(), k.end(), 0.0), WithinAbs(1.0, 1e-10));
        for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == k[k.size() - 1 - i]);
    }
}

TEST_CASE("detector convolution") {
    SampledCurve flat{-5.0, 0.01, std::vector<double>(1001, 1.0)};
    const SampledCurve out = convolve_detector(flat, 0.136);
    for (double v : out.values) CHECK_THAT(v, WithinAbs(1.0, 1e-12));

    SampledCurve curve{-4.0, 0.02, {}};
    for (int i = 0; i <= 400; ++i) {
        const double t = curve.time(i);
        curve.values.push_back(1.0 + std::exp(-2 * std::abs(t)) * std::cos(3 * t));
    }
    const SampledCurve same = convolve_detector(curve, 0.0);
    CHECK(same.values == curve.values);

    const SampledCurve smooth = convolve_detector(curve, 0.1);
    for (std::size_t i = 0; i < smooth.size(); ++i) {
        CHECK_THAT(smooth.values[i], WithinAbs(smooth.values[smooth.size() - 1 - i], 1e-13));
    }
    CHECK(smooth.values[200] < curve.values[200]);
    CHECK_THROWS_AS(convolve_detector(curve, 0.05), Error);
}

TEST_CASE("invalid specs are rejected") {
    AveragingSpec s;
    s.quadrature_span = 3;
    CHECK_THROWS_AS(s.validate(), Error);
    s = AveragingSpec{};
    s.sigma = -1;
    CHECK_THROWS_AS(s.validate(), Error);
}

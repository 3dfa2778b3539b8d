#include <cmath>
#include <limits>
#include <numbers>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/error.hpp"

namespace fanostat::alternate {

namespace {

constexpr double kSeriesThreshold = 1e-4;

double g1_literal(double delta, double zeta, double beta, double phi, double alpha) {
    const double c = std::cos(phi);
    const double denom = alpha * zeta + zeta * zeta + delta * delta;
    return 1.0 - 2.0 * beta * (zeta - delta * std::tan(phi)) / denom +
           beta * beta / (c * c * denom);
}

double b_closed(double d, double z, double b, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double l2 = z * z + d * d;
    const double m2 = d * d + (z - 2.0) * (z - 2.0);
    const double term1 = 2.0 * std::pow(b, 4) * (1.0 - z) * (z * z - 2.0 * z + d * d) /
                         (d * l2 * l2 * m2 * std::pow(c, 4));
    const double term2 = 2.0 * b * b *
                         (2.0 * z * d * std::cos(2.0 * phi) - (d * d - z * z) * std::sin(2.0 * phi)) /
                         (c * c * l2 * l2);
    const double term3 = 4.0 * std::pow(b, 3) *
                         (c * (d * d * (d * d + 2.0 - z) - z * z * (z - 2.0) * (z - 1.0)) +
                          s * (d * z * m2)) /
                         (d * l2 * l2 * m2 * std::pow(c, 3));
    return term1 + term2 - term3;
}

// Laurent expansion of b_closed about d = 0, through d².
double b_series(double d, double z, double b, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double c2 = c * c;
    const double c4 = c2 * c2;
    const double z2 = z * z;
    const double z3 = z2 * z;
    const double z4 = z3 * z;
    const double z5 = z4 * z;
    const double b2 = b * b;
    const double km1 = 2.0 * b * b2 * (2.0 * c2 * z - b) * (z - 1.0) / (c4 * z3 * (z - 2.0));
    const double k0 = 4.0 * b2 * s * (c2 * z - b) / (c * c2 * z3);
    const double poly = -b2 * z3 + 4.0 * b2 * z2 - 7.0 * b2 * z + 4.0 * b2 +
                        3.0 * b * c2 * z4 - 12.0 * b * c2 * z3 + 20.0 * b * c2 * z2 - 12.0 * b * c2 * z -
                        c4 * z5 + 6.0 * c4 * z4 - 12.0 * c4 * z3 + 8.0 * c4 * z2 +
                        c2 * s * s * (z5 - 6.0 * z4 + 12.0 * z3 - 8.0 * z2);
    const double k1 = -4.0 * b2 * poly / (c4 * z5 * std::pow(z - 2.0, 3));
    const double k2 = -4.0 * b2 * s * (3.0 * c2 * z - 2.0 * b) / (c * c2 * z5);
    const double pole = d == 0.0 ? (km1 == 0.0 ? 0.0 : std::copysign(
                                                             std::numeric_limits<double>::infinity(), km1))
                                 : km1 / d;
    return pole + k0 + k1 * d + k2 * d * d;
}

}  // namespace

double g1_general(double delta, const ReducedModel& m) {
    require(m.phi > -0.5 * std::numbers::pi, "phi = -pi/2 is singular");
    return g1_literal(delta, m.zeta, m.beta, m.phi, m.alpha);
}

G2Coefficients g2_coefficients(double delta, double zeta, double beta, double phi) {
    require(phi > -0.5 * std::numbers::pi, "phi = -pi/2 is singular");
    const double c = std::cos(phi);
    const double d2 = delta * delta;
    G2Coefficients out;
    out.g1 = g1_literal(delta, zeta, beta, phi, 0.0);
    out.g2zero = g1_literal(delta, zeta, 2.0 * beta, phi, 0.0);
    out.A = std::pow(beta, 3) * (beta - 4.0 * (zeta - 1.0) * c * c) /
            (std::pow(c, 4) * (zeta * zeta + d2) * (d2 + (zeta - 2.0) * (zeta - 2.0)));
    out.B = std::abs(delta) < kSeriesThreshold ? b_series(delta, zeta, beta, phi)
                                               : b_closed(delta, zeta, beta, phi);
    out.C = out.g2zero - out.g1 * out.g1 - out.A;
    return out;
}

double g2_tau(double tau, double delta, double zeta, double beta, double phi) {
    const G2Coefficients k = g2_coefficients(delta, zeta, beta, phi);
    const double t = std::abs(tau);
    const double numerator = k.g1 * k.g1 + k.A * std::exp(-2.0 * t) +
                             k.C * std::cos(delta * tau) * std::exp(-zeta * t) +
                             k.B * std::sin(delta * t) * std::exp(-zeta * t);
    return numerator / (k.g1 * k.g1);
}

}  // namespace fanostat::alternate

#include "fanostat/analytic_correlators.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_phase(double phi) {
    require(std::isfinite(phi) && phi > -0.5 * std::numbers::pi && phi <= 0.5 * std::numbers::pi,
            "phi must lie in (-pi/2, pi/2]; the tangent is singular at -pi/2");
}

// (e^{mu t} - 1) / mu, stable as mu -> 0.
Complex exp_ratio(Complex mu, double t) {
    const Complex x = mu * t;
    if (std::abs(x) < 1e-5) return t * (1.0 + x / 2.0 + x * x / 6.0);
    return (std::exp(x) - 1.0) / mu;
}

}  // namespace

double g1_ideal(double delta, double phi) {
    require_phase(phi);
    const double u = delta + std::tan(phi);
    return u * u / (1.0 + delta * delta);
}

CorrelatorDecomposition g2zero_ideal(double delta, double phi, double T0) {
    require_phase(phi);
    require(T0 > 0.0 && T0 <= 1.0, "T0 must lie in (0, 1]");
    require(std::abs(std::cos(phi) * std::cos(phi) - T0) < 1e-9, "T0 must equal cos^2(phi)");
    CorrelatorDecomposition out;
    const double u2 = std::pow(delta + std::tan(phi), 2);
    const double x = 1.0 / (T0 * u2);
    if (!std::isfinite(x) || !std::isfinite(x * x)) {
        out.bound_term = kInf;
        out.interference_term = kInf;
        out.total = kInf;
        out.divergent = true;
        return out;
    }
    out.bound_term = x * x;
    out.interference_term = 2.0 * std::cos(2.0 * phi) * x;
    out.total = out.product_term + out.bound_term + out.interference_term;
    return out;
}

double ideal_min_g2zero(double T0) {
    require(T0 >= 0.0 && T0 <= 1.0, "T0 must lie in [0, 1]");
    if (T0 >= 0.5) return 1.0;
    return 4.0 * T0 * (1.0 - T0);
}

double fano_maximum_detuning(double phi) {
    require_phase(phi);
    if (phi == 0.0) return kInf;
    return 1.0 / std::tan(phi);
}

double fano_zero_detuning(double phi) {
    require_phase(phi);
    return -std::tan(phi);
}

double g1_general(double delta, const ReducedModel& m) {
    require_phase(m.phi);
    require(m.zeta >= 1.0, "zeta must be >= 1");
    require(m.beta >= 0.0 && m.beta <= 2.0, "beta must lie in [0, 1] (2 for the g2 numerator)");
    require(m.alpha >= 0.0, "alpha must be >= 0");
    if (std::isinf(m.alpha)) return 1.0;
    const double c = std::cos(m.phi);
    const double denom = m.zeta * m.alpha + m.zeta * m.zeta + delta * delta;
    return 1.0 - 2.0 * m.beta * (m.zeta - delta * std::tan(m.phi)) / denom +
           m.zeta * m.beta * m.beta / (c * c * denom);
}

// Units: γ = 2, drive amplitude scaled out. With d = i e^{iφ/2} sqrt(β) the
// single-port coupling, the leading-order regression solution reads
//   <σ->       = d / (ζ - iδ),            N = ζβ / (ζ² + δ²)
//   n          = c² + 2c Re(d <σ->) + β N  (output intensity, c = cos φ)
//   v(τ)       = <X† σ-(τ) X> = v∞ + (v0 - v∞) e^{λτ},  λ = iδ - ζ
//   u(τ)       = <X† (1 + σz(τ)) X>, relaxing at rate 2 and driven by v
// and G2(τ) = c² n + 2c Re(d v) + β u / 2.
WeakPumpCorrelator::WeakPumpCorrelator(double delta, double zeta, double beta, double phi)
    : beta_(beta) {
    require_phase(phi);
    require(std::isfinite(delta), "delta must be finite");
    require(zeta >= 1.0 && std::isfinite(zeta), "zeta must be finite and >= 1");
    require(beta >= 0.0 && beta <= 1.0, "beta must lie in [0, 1]");
    const double c = std::cos(phi);
    c_ = c;
    cos4_ = c * c * c * c;
    d_ = Complex(0.0, 1.0) * std::polar(1.0, 0.5 * phi) * std::sqrt(beta);
    const Complex sm = d_ / Complex(zeta, -delta);
    const double pop = zeta * beta / (zeta * zeta + delta * delta);
    n_ = c * c + 2.0 * c * std::real(d_ * sm) + beta * pop;
    // Cancellation to round-off is an exact Fano zero.
    const double scale = c * c + 2.0 * std::abs(c) * std::abs(d_ * sm) + beta * pop;
    if (std::abs(n_) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) n_ = 0.0;
    g1_ = n_ / (c * c);
    lambda_ = Complex(-zeta, delta);
    const Complex v0 = c * c * sm + std::conj(d_) * c * pop;
    v_inf_ = sm * n_;
    dv_ = v0 - v_inf_;
    u0_ = 2.0 * c * c * pop;
}

double WeakPumpCorrelator::numerator(double tau) const {
    const double t = std::abs(tau);
    const double decay = std::exp(-2.0 * t);
    const Complex osc = std::exp(lambda_ * t);
    const Complex mixed = decay * exp_ratio(lambda_ + 2.0, t);
    const Complex v = v_inf_ + dv_ * osc;
    const Complex dc = std::conj(d_);
    const double u = decay * u0_ +
                     4.0 * std::real(dc * (v_inf_ * (0.5 * (1.0 - decay)) + dv_ * mixed));
    const double g2 = c_ * c_ * n_ + 2.0 * c_ * std::real(d_ * v) + 0.5 * beta_ * u;
    return g2 / cos4_;
}

double WeakPumpCorrelator::g2(double tau) const {
    if (g1_ == 0.0) return kInf;
    return numerator(tau) / (g1_ * g1_);
}

G2Coefficients WeakPumpCorrelator::coefficients() const {
    const Complex dc = std::conj(d_);
    const Complex mu = lambda_ + 2.0;
    const double c = c_;
    G2Coefficients out;
    out.g1 = g1_;
    out.A = 0.5 * beta_ * (u0_ - 2.0 * std::real(dc * v_inf_) - 4.0 * std::real(dc * dv_ / mu)) / cos4_;
    const Complex w = 2.0 * c * d_ * dv_ + 2.0 * beta_ * dc * dv_ / mu;
    out.C = std::real(w) / cos4_;
    out.B = -std::imag(w) / cos4_;
    out.g2zero = g1_ * g1_ + out.A + out.C;
    return out;
}

double g2_tau_general(double tau, double delta, double zeta, double beta, double phi) {
    return WeakPumpCorrelator(delta, zeta, beta, phi).g2(tau);
}

G2Coefficients g2_coefficients(double delta, double zeta, double beta, double phi) {
    return WeakPumpCorrelator(delta, zeta, beta, phi).coefficients();
}

}  // namespace fanostat

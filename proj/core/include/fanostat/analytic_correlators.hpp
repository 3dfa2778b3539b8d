#pragma once

#include <complex>

#include "fanostat/physical_model.hpp"

namespace fanostat {

/// Zero-delay g2 split into the product-state term (always 1), the bound-state
/// term and the product/bound interference term.
struct CorrelatorDecomposition {
    double product_term = 1.0;
    double bound_term = 0.0;
    double interference_term = 0.0;
    double total = 1.0;
    /// Set at the Fano zero, where the transmitted intensity vanishes and g2 is
    /// unbounded. All terms are +inf in that case.
    bool divergent = false;
};

/// Coefficients of the weak-pump numerator
///   g1² + A e^{-2|τ|} + C cos(δτ) e^{-ζ|τ|} + B sin(δ|τ|) e^{-ζ|τ|},
/// with C = g2zero - g1² - A. `g2zero` is the numerator at τ = 0 (not divided by g1²).
struct G2Coefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double g2zero = 1.0;
    double g1 = 1.0;
};

// Ideal waveguide (β = 1, no dephasing, vanishing pump).

/// Transmission normalized to the bare background, |t1|² = (δ + tan φ)² / (1 + δ²).
double g1_ideal(double delta, double phi);
CorrelatorDecomposition g2zero_ideal(double delta, double phi, double T0);
/// Global minimum over detuning of the ideal zero-delay g2: 4T0(1 - T0) below
/// T0 = 1/2, otherwise 1.
double ideal_min_g2zero(double T0);

/// Detuning of the Fano transmission maximum, cot φ (±inf for φ = 0).
double fano_maximum_detuning(double phi);
/// Detuning of the Fano transmission zero, -tan φ.
double fano_zero_detuning(double phi);

// General case: finite β, pure dephasing ζ, pump α̃ (g1 only).

/// Stationary transmitted intensity normalized to t0²|α|²:
///   1 - 2β(ζ - δ tan φ)/D + ζβ²/(cos²φ D),  D = ζα̃ + ζ² + δ².
double g1_general(double delta, const ReducedModel& model);

/// Weak-pump second-order correlator of the transmitted field for one detuning.
///
/// Built from the leading-order quantum-regression solution of the Bloch
/// equations, so it holds for any ζ ≥ 1 and β ∈ [0, 1]. Times are in units of
/// 2/γ and the result is symmetric in τ.
class WeakPumpCorrelator {
public:
    WeakPumpCorrelator(double delta, double zeta, double beta, double phi);

    double g1() const { return g1_; }
    /// Numerator of g2(τ) (the bracket that is divided by g1²).
    double numerator(double tau) const;
    /// Normalized g2(τ); +inf where g1 vanishes.
    double g2(double tau) const;
    G2Coefficients coefficients() const;

private:
    double beta_;
    double c_;
    double cos4_;
    double g1_;
    Complex d_;
    Complex lambda_;
    Complex v_inf_;
    Complex dv_;
    double u0_;
    double n_;
};

double g2_tau_general(double tau, double delta, double zeta, double beta, double phi);
G2Coefficients g2_coefficients(double delta, double zeta, double beta, double phi);

/// Alternate closed forms with explicit 1/δ terms. They coincide with the
/// functions above at ζ = 1 and serve as an independent algebraic route there.
namespace alternate {

double g1_general(double delta, const ReducedModel& model);
/// A and B in closed real form. B has 1/δ terms; below |δ| < 1e-4 a Laurent
/// series is used (the pole vanishes at ζ = 1).
G2Coefficients g2_coefficients(double delta, double zeta, double beta, double phi);
double g2_tau(double tau, double delta, double zeta, double beta, double phi);

}  // namespace alternate

}  // namespace fanostat

#pragma once

#include <cstddef>
#include <vector>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/physical_model.hpp"

namespace fanostat {

enum class QuadratureRule {
    /// Gauss–Hermite for narrow wandering (σ̃ ≤ 0.25), trapezoid otherwise.
    kAuto,
    kGaussHermite,
    kTrapezoid,
};

/// How model curves are smeared over spectral wandering and detector jitter.
/// All widths are dimensionless (detuning in γ/2 units, time in 2/γ units).
struct AveragingSpec {
    double sigma = 0.0;
    double t_resp = 0.0;
    int quadrature_points = 41;
    double quadrature_span = 7.0;
    int nodes_per_linewidth = 8;
    QuadratureRule rule = QuadratureRule::kAuto;

    void validate() const;
    /// The same spec with every resolution knob doubled.
    AveragingSpec refined() const;
};

/// Offsets x_i and weights w_i (Σ w_i = 1) approximating E[f(δ + x)], x ~ N(0, σ̃²).
struct QuadratureNodes {
    std::vector<double> offsets;
    std::vector<double> weights;
};

/// Probabilists' Gauss–Hermite rule for the standard normal, via Golub–Welsch.
QuadratureNodes gauss_hermite_nodes(int order);
QuadratureNodes wandering_nodes(const AveragingSpec& spec);

double avg_g1(double delta, const ReducedModel& model, const AveragingSpec& spec);
double avg_g2(double tau, double delta, const ReducedModel& model, const AveragingSpec& spec);

/// Wandering-averaged weak-pump g2 at one laser detuning. The numerator and
/// the denominator g1² are averaged separately and divided afterwards.
class AveragedCorrelator {
public:
    AveragedCorrelator(double delta, const ReducedModel& model, const AveragingSpec& spec);

    double numerator(double tau) const;
    double denominator() const { return denominator_; }
    double g2(double tau) const;
    /// g2 convolved with the Gaussian detector response of width spec.t_resp.
    double detected_g2(double tau) const;

private:
    std::vector<WeakPumpCorrelator> nodes_;
    std::vector<double> weights_;
    double denominator_ = 0.0;
    double t_resp_ = 0.0;
};

struct QuadratureCheck {
    double value = 0.0;
    double refined = 0.0;
    double relative_change = 0.0;
    bool converged = false;
};

inline constexpr double kQuadratureTolerance = 1e-6;

QuadratureCheck avg_g1_checked(double delta, const ReducedModel& model, const AveragingSpec& spec);
QuadratureCheck avg_g2_checked(double tau, double delta, const ReducedModel& model,
                               const AveragingSpec& spec);
/// Throws Error(kNumerical) when the refinement change exceeds kQuadratureTolerance.
double require_converged(const QuadratureCheck& check);

/// A function sampled on a uniform grid: t_i = start + i * step.
struct SampledCurve {
    double start = 0.0;
    double step = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

/// Discrete Gaussian kernel at multiples of `step`, truncated at ±6 t_resp and
/// renormalized to sum 1. Index k ↔ offset (k - half) * step.
std::vector<double> detector_kernel(double t_resp, double step);

/// Convolves with the Gaussian detector response (standard deviation t_resp).
/// Samples beyond the grid are taken equal to the nearest edge value.
/// Rejects grids with step > t_resp / 4.
SampledCurve convolve_detector(const SampledCurve& curve, double t_resp);

}  // namespace fanostat

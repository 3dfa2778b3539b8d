#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fanostat/least_squares.hpp"
#include "fanostat/observables.hpp"
#include "fanostat/physical_model.hpp"

namespace fanostat {

struct DataPoint {
    double detuning_uev = 0.0;
    double value = 0.0;
    double uncertainty = 1.0;
};

/// Coincidence histogram recorded at one laser detuning.
struct Histogram {
    double detuning_uev = 0.0;
    std::vector<double> tau_ps;
    std::vector<double> counts;
};

struct MeasurementSet {
    /// Laser energy = reference + detuning. When unset, the starting ω0 of a fit is used.
    std::optional<double> reference_energy_uev;
    std::vector<DataPoint> transmission;
    std::vector<DataPoint> g2zero;
    std::vector<Histogram> histograms;

    void validate() const;
    bool empty() const { return transmission.empty() && g2zero.empty() && histograms.empty(); }
};

/// Histogram counts divided by their mean over the outer quarter of the delay
/// window (|τ| ≥ 0.75 max|τ|), matching normalization to the long-delay value.
double histogram_normalization(const Histogram& h);

// Breit–Wigner–Fano lineshape.

/// amplitude (q + 2δ/Γ)² / (1 + (2δ/Γ)²) + offset
double fano_lineshape(double delta_uev, double q, double gamma_uev, double amplitude, double offset);

struct FanoFit {
    double q = 0.0;
    double gamma_uev = 1.0;
    double amplitude = 1.0;
    double offset = 0.0;
    /// Detuning the lineshape is centred on; fixed at 0 unless fitted.
    double center_uev = 0.0;
    double objective = 0.0;
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
};

/// Weighted least squares over several starting guesses built from the
/// positions of the data extrema. Needs at least 8 points.
FanoFit fit_fano(const std::vector<DataPoint>& points, bool fit_center = true,
                 const LeastSquaresOptions& options = {});

// Full-model fit.

enum FitParameter { kOmega0 = 0, kLifetime, kDephasingTime, kSigma, kT0, kBeta, kFitParameterCount };

const char* fit_parameter_name(FitParameter p);

struct ParameterBounds {
    double lo = 0.0;
    double hi = 1.0;
};

struct FitBounds {
    /// ω0 may move this far from its starting value.
    double omega0_window_uev = 20.0;
    ParameterBounds lifetime_ps{10.0, 5000.0};
    ParameterBounds dephasing_time_ps{100.0, 1e8};
    ParameterBounds sigma_uev{1e-3, 100.0};
    ParameterBounds t0{0.0, 1.0};
    ParameterBounds beta{0.0, 1.0};
};

enum class FitMode {
    kJoint,
    /// Transmission first (all free parameters), then g2 data with ω0 and t0 held.
    kSequential,
};

struct FitOptions {
    FitBounds bounds;
    std::array<bool, kFitParameterCount> free{true, true, true, true, true, true};
    FitMode mode = FitMode::kJoint;
    /// Multiplies the g2 (zero-delay and histogram) part of the objective.
    double g2_weight = 1.0;
    ModelSettings model;
    LeastSquaresOptions solver;
};

struct PointResidual {
    std::string dataset;
    std::size_t index = 0;
    double detuning_uev = 0.0;
    double tau_ps = 0.0;
    double measured = 0.0;
    double model = 0.0;
    /// (model - measured) / uncertainty, before the g2 weight.
    double residual = 0.0;
    bool excluded = false;
};

struct ObjectiveBreakdown {
    double total = 0.0;
    double transmission = 0.0;
    double g2zero = 0.0;
    double histograms = 0.0;
    std::vector<PointResidual> points;
    std::vector<std::string> warnings;
};

/// Weighted squared residuals of the model against every point. Points where the
/// model cannot be evaluated are excluded and reported.
ObjectiveBreakdown evaluate_objective(const PhysicalParams& p, const MeasurementSet& data,
                                      const ModelSettings& settings, double g2_weight = 1.0);
double model_objective(const PhysicalParams& p, const MeasurementSet& data, const ModelSettings& settings,
                       double g2_weight = 1.0);

struct FitResult {
    PhysicalParams params;
    double objective = 0.0;
    ObjectiveBreakdown breakdown;
    std::array<double, kFitParameterCount> std_error{};
    std::array<bool, kFitParameterCount> bound_hit{};
    std::array<bool, kFitParameterCount> free{};
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    bool degenerate = false;
    double gradient_norm = 0.0;
    std::string stop_reason;
};

FitResult fit_full_model(const MeasurementSet& data, const PhysicalParams& initial,
                         const FitOptions& options = {});

struct MultistartResult {
    std::vector<FitResult> runs;
    std::size_t best = 0;
};

/// t0 ∈ {0.3, 0.5, 0.7, 0.9} × σ ∈ {2, 5, 10} µeV around `initial`.
std::vector<PhysicalParams> default_starts(const PhysicalParams& initial);
MultistartResult fit_multistart(const MeasurementSet& data, const std::vector<PhysicalParams>& starts,
                                const FitOptions& options = {});

// Synthetic data.

struct SyntheticDesign {
    std::vector<double> transmission_detunings_uev;
    std::vector<double> g2_detunings_uev;
    /// Standard deviation of the multiplicative Gaussian noise.
    double noise_fraction = 0.0;
    /// Quoted uncertainty relative to the noiseless value.
    double relative_uncertainty = 0.03;
    std::uint64_t seed = 0;
};

/// 25 transmission and 9 zero-delay g2 points evenly spread over ±40 µeV.
SyntheticDesign reference_design();
MeasurementSet synthesize(const PhysicalParams& truth, const SyntheticDesign& design,
                          const ModelSettings& settings = {});

}  // namespace fanostat

#pragma once

#include <vector>

#include "fanostat/ensemble_averaging.hpp"
#include "fanostat/physical_model.hpp"

namespace fanostat {

/// Measurement-side processing applied to model curves.
struct ModelSettings {
    bool average = true;   // spectral wandering with PhysicalParams::sigma_wander_uev
    bool convolve = true;  // detector response with PhysicalParams::detector_resp_ps
    QuadratureRule rule = QuadratureRule::kAuto;
    int quadrature_points = 41;
    double quadrature_span = 7.0;
    int nodes_per_linewidth = 8;
};

/// Reduced averaging widths for `p`; zero where the setting is off.
AveragingSpec averaging_spec(const PhysicalParams& p, const ModelSettings& settings);

// Detunings are laser minus emitter energy in µeV, delays in ps.

/// Normalized transmission |t|²/t0², including the pump saturation set by drive_amp.
double model_transmission(const PhysicalParams& p, double detuning_uev, const ModelSettings& settings);
/// Weak-pump g2(τ) as it would be measured.
double model_g2(const PhysicalParams& p, double detuning_uev, double tau_ps, const ModelSettings& settings);
std::vector<double> model_g2_trace(const PhysicalParams& p, double detuning_uev,
                                   const std::vector<double>& tau_ps, const ModelSettings& settings);

}  // namespace fanostat

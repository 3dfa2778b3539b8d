#include "fanostat/observables.hpp"

namespace fanostat {

AveragingSpec averaging_spec(const PhysicalParams& p, const ModelSettings& settings) {
    p.validate();
    AveragingSpec spec;
    spec.sigma = settings.average ? reduced_sigma(p.sigma_wander_uev, p.lifetime_ps) : 0.0;
    spec.t_resp = settings.convolve ? reduced_time(p.detector_resp_ps, p.lifetime_ps) : 0.0;
    spec.rule = settings.rule;
    spec.quadrature_points = settings.quadrature_points;
    spec.quadrature_span = settings.quadrature_span;
    spec.nodes_per_linewidth = settings.nodes_per_linewidth;
    spec.validate();
    return spec;
}

double model_transmission(const PhysicalParams& p, double detuning_uev, const ModelSettings& settings) {
    const DimensionlessParams d = to_dimensionless(p, p.omega0_uev + detuning_uev);
    return avg_g1(d.delta, d.model(), averaging_spec(p, settings));
}

double model_g2(const PhysicalParams& p, double detuning_uev, double tau_ps, const ModelSettings& settings) {
    return model_g2_trace(p, detuning_uev, {tau_ps}, settings).front();
}

std::vector<double> model_g2_trace(const PhysicalParams& p, double detuning_uev,
                                   const std::vector<double>& tau_ps, const ModelSettings& settings) {
    const DimensionlessParams d = to_dimensionless(p, p.omega0_uev + detuning_uev);
    ReducedModel weak = d.model();
    weak.alpha = 0.0;
    const AveragedCorrelator correlator(d.delta, weak, averaging_spec(p, settings));
    std::vector<double> out;
    out.reserve(tau_ps.size());
    for (double t : tau_ps) out.push_back(correlator.detected_g2(reduced_time(t, p.lifetime_ps)));
    return out;
}

}  // namespace fanostat

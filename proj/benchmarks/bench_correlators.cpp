#include <benchmark/benchmark.h>

#include "fanostat/analytic_correlators.hpp"
#include "fanostat/bloch_oracle.hpp"
#include "fanostat/ensemble_averaging.hpp"
#include "fanostat/fitting.hpp"

namespace {

using namespace fanostat;

ReducedModel reference_model() {
    ReducedModel m;
    m.zeta = 1.0066;
    m.beta = 0.92;
    m.phi = -0.9;
    return m;
}

void BM_WeakPumpG2(benchmark::State& state) {
    const ReducedModel m = reference_model();
    for (auto _ : state) {
        const WeakPumpCorrelator c(3.4, m.zeta, m.beta, m.phi);
        benchmark::DoNotOptimize(c.g2(0.5));
    }
}
BENCHMARK(BM_WeakPumpG2);

void BM_AveragedG2(benchmark::State& state) {
    const ReducedModel m = reference_model();
    AveragingSpec spec;
    spec.sigma = 1.8;
    spec.rule = QuadratureRule::kGaussHermite;
    spec.quadrature_points = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const AveragedCorrelator c(3.4, m, spec);
        benchmark::DoNotOptimize(c.g2(0.0));
    }
}
BENCHMARK(BM_AveragedG2)->Arg(21)->Arg(41)->Arg(81);

void BM_DetectedG2(benchmark::State& state) {
    const ReducedModel m = reference_model();
    AveragingSpec spec;
    spec.sigma = 1.8;
    spec.t_resp = 0.8;
    const AveragedCorrelator c(3.4, m, spec);
    for (auto _ : state) benchmark::DoNotOptimize(c.detected_g2(0.0));
}
BENCHMARK(BM_DetectedG2);

void BM_OracleG2(benchmark::State& state) {
    ReducedModel m = reference_model();
    m.alpha = 1e-3;
    for (auto _ : state) {
        const BlochOracle oracle(3.4, m);
        benchmark::DoNotOptimize(oracle.output_correlator_g2(2.0));
    }
}
BENCHMARK(BM_OracleG2)->Unit(benchmark::kMicrosecond);

void BM_ModelObjective(benchmark::State& state) {
    const PhysicalParams truth = reference_configuration();
    const MeasurementSet data = synthesize(truth, reference_design());
    for (auto _ : state) benchmark::DoNotOptimize(model_objective(truth, data, {}));
}
BENCHMARK(BM_ModelObjective)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

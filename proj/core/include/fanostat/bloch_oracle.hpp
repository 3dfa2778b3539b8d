#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fanostat/physical_model.hpp"
#include "fanostat/two_level_algebra.hpp"

namespace fanostat {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-3;
    long max_steps = 1000000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
};

using OdeRhs = std::function<void(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt)>;

/// Adaptive Dormand–Prince 5(4). Integrates y from t0 to t1 (t1 >= t0) in place.
/// Throws Error(kNumerical) on step-size underflow or when max_steps is exceeded.
OdeStats dopri5(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXcd& y,
                const OdeOptions& options = {});

/// Sandwiched averages <L σ_l(τ) R> for l = -, +, z. `weight` is <L R>, which
/// multiplies the inhomogeneous relaxation term; it is 1 for a plain Bloch state.
struct RegressionVector {
    Complex minus{0.0, 0.0};
    Complex plus{0.0, 0.0};
    Complex z{0.0, 0.0};
    Complex weight{1.0, 0.0};
};

/// Brute-force solution of the driven two-level system in the waveguide,
/// used to check the analytic correlators. Times are in units of 2/γ.
///
/// The output intensity is O(α̃) while the sandwiched emitter moments carry
/// factors 1/α̃, so g2 loses about |log10 α̃| digits to cancellation. Keep
/// α̃ ≥ 1e-6 for comparisons at the 1e-6 level.
class BlochOracle {
public:
    /// alpha = 0 is allowed for state evolution; the output correlators then
    /// require beta = 0.
    BlochOracle(double delta, const ReducedModel& model, OdeOptions options = {});

    const Eigen::Matrix4cd& generator() const { return generator_; }
    BlochState steady_state() const { return steady_; }
    /// Residual |M s - b| of the steady-state solve.
    double steady_state_residual() const { return residual_; }

    /// Transmitted output operator normalized by the input amplitude.
    TwoLevelOperator output_operator() const { return output_; }

    BlochState evolve(const BlochState& start, double tau) const;
    RegressionVector evolve(const RegressionVector& start, double tau) const;
    /// Sandwiched moments <X† σ_l X> at τ = 0 in the stationary state.
    RegressionVector regression_start() const;

    double output_correlator_g1() const;
    double output_correlator_g2(double tau) const;
    /// Sorted evaluation in a single forward sweep; taus need not be sorted.
    std::vector<double> output_correlator_g2(const std::vector<double>& taus) const;

    const OdeStats& last_stats() const { return stats_; }

private:
    void require_output() const;
    double g2_from(const Eigen::VectorXcd& r) const;

    ReducedModel model_;
    OdeOptions options_;
    Eigen::Matrix4cd generator_;
    BlochState steady_;
    double residual_ = 0.0;
    TwoLevelOperator output_;
    double intensity_ = 0.0;
    bool output_defined_ = false;
    mutable OdeStats stats_;
};

}  // namespace fanostat

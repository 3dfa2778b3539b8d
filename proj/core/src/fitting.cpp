#include "fanostat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kEdge = 1e-12;
constexpr double kBoundHit = 1e-6;

void check_point(const DataPoint& p, const char* what) {
    require(std::isfinite(p.detuning_uev), std::string(what) + ": detuning must be finite");
    require(std::isfinite(p.value), std::string(what) + ": value must be finite");
    require(std::isfinite(p.uncertainty) && p.uncertainty > 0.0,
            std::string(what) + ": uncertainty must be > 0");
}

// Logistic map of a bounded parameter onto the real line, optionally in log space.
struct Transform {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double fraction(double p) const {
        const double y = log ? (std::log(p) - std::log(lo)) / (std::log(hi) - std::log(lo))
                             : (p - lo) / (hi - lo);
        return std::clamp(y, kEdge, 1.0 - kEdge);
    }
    double to_free(double p) const {
        const double y = fraction(p);
        return std::log(y / (1.0 - y));
    }
    double from_free(double u) const {
        const double y = 1.0 / (1.0 + std::exp(-u));
        return log ? std::exp(std::log(lo) + y * (std::log(hi) - std::log(lo))) : lo + y * (hi - lo);
    }
    // dp/du at u.
    double slope(double u) const {
        const double y = 1.0 / (1.0 + std::exp(-u));
        const double dy = y * (1.0 - y);
        return log ? from_free(u) * (std::log(hi) - std::log(lo)) * dy : (hi - lo) * dy;
    }
};

double get(const PhysicalParams& p, int i) {
    switch (i) {
        case kOmega0: return p.omega0_uev;
        case kLifetime: return p.lifetime_ps;
        case kDephasingTime: return p.dephasing_time_ps;
        case kSigma: return p.sigma_wander_uev;
        case kT0: return p.t0;
        case kBeta: return p.beta;
    }
    return 0.0;
}

void set(PhysicalParams& p, int i, double v) {
    switch (i) {
        case kOmega0: p.omega0_uev = v; break;
        case kLifetime: p.lifetime_ps = v; break;
        case kDephasingTime: p.dephasing_time_ps = v; break;
        case kSigma: p.sigma_wander_uev = v; break;
        case kT0: p.t0 = v; break;
        case kBeta: p.beta = v; break;
    }
}

std::array<Transform, kFitParameterCount> make_transforms(const FitBounds& b, double omega0) {
    require(b.omega0_window_uev > 0.0, "omega0 window must be > 0");
    auto check = [](const ParameterBounds& pb, bool positive, const char* name) {
        require(pb.lo < pb.hi && (!positive || pb.lo > 0.0), std::string("invalid bounds for ") + name);
    };
    check(b.lifetime_ps, true, "lifetime");
    check(b.dephasing_time_ps, true, "dephasing time");
    check(b.sigma_uev, true, "sigma");
    check(b.t0, false, "t0");
    check(b.beta, false, "beta");
    require(b.t0.lo >= 0.0 && b.t0.hi <= 1.0, "t0 bounds must lie within [0, 1]");
    require(b.beta.lo >= 0.0 && b.beta.hi <= 1.0, "beta bounds must lie within [0, 1]");
    return {{
        {false, omega0 - b.omega0_window_uev, omega0 + b.omega0_window_uev},
        {true, b.lifetime_ps.lo, b.lifetime_ps.hi},
        {true, b.dephasing_time_ps.lo, b.dephasing_time_ps.hi},
        {true, b.sigma_uev.lo, b.sigma_uev.hi},
        {false, b.t0.lo, b.t0.hi},
        {false, b.beta.lo, b.beta.hi},
    }};
}

struct Residuals {
    Eigen::VectorXd weighted;
    ObjectiveBreakdown breakdown;
};

// One residual per transmission point, g2 point and histogram bin, in that order.
Residuals compute_residuals(const PhysicalParams& p, const MeasurementSet& data, const ModelSettings& settings,
                            double g2_weight, bool use_transmission, bool use_g2) {
    std::size_t bins = 0;
    for (const Histogram& h : data.histograms) bins += h.tau_ps.size();
    Residuals out;
    out.weighted = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(data.transmission.size() + data.g2zero.size() + bins));
    ObjectiveBreakdown& b = out.breakdown;
    const double reference = data.reference_energy_uev.value_or(p.omega0_uev);
    const double offset = reference - p.omega0_uev;
    const double g2_scale = std::sqrt(g2_weight);
    Eigen::Index row = 0;

    auto record = [&](const char* dataset, std::size_t index, double detuning, double tau, double measured,
                      double uncertainty, auto&& model_fn, double scale, double& partial, bool active) {
        PointResidual pr{dataset, index, detuning, tau, measured, 0.0, 0.0, false};
        if (active) {
            try {
                pr.model = model_fn();
                if (!std::isfinite(pr.model)) fail(ErrorCategory::kNumerical, "non-finite model value");
                pr.residual = (pr.model - measured) / uncertainty;
                out.weighted(row) = scale * pr.residual;
                partial += out.weighted(row) * out.weighted(row);
            } catch (const Error& e) {
                pr.excluded = true;
                pr.model = std::numeric_limits<double>::quiet_NaN();
                b.warnings.push_back(std::string(dataset) + "[" + std::to_string(index) +
                                     "] excluded: " + e.what());
            }
        } else {
            pr.excluded = true;
            pr.model = std::numeric_limits<double>::quiet_NaN();
        }
        b.points.push_back(pr);
        ++row;
    };

    for (std::size_t i = 0; i < data.transmission.size(); ++i) {
        const DataPoint& d = data.transmission[i];
        record("transmission", i, d.detuning_uev, 0.0, d.value, d.uncertainty,
               [&] { return model_transmission(p, d.detuning_uev + offset, settings); }, 1.0, b.transmission,
               use_transmission);
    }
    for (std::size_t i = 0; i < data.g2zero.size(); ++i) {
        const DataPoint& d = data.g2zero[i];
        record("g2zero", i, d.detuning_uev, 0.0, d.value, d.uncertainty,
               [&] { return model_g2(p, d.detuning_uev + offset, 0.0, settings); }, g2_scale, b.g2zero, use_g2);
    }
    for (std::size_t i = 0; i < data.histograms.size(); ++i) {
        const Histogram& h = data.histograms[i];
        const double norm = histogram_normalization(h);
        std::vector<double> model;
        bool failed = false;
        if (use_g2) {
            try {
                model = model_g2_trace(p, h.detuning_uev + offset, h.tau_ps, settings);
            } catch (const Error& e) {
                failed = true;
                b.warnings.push_back("histogram[" + std::to_string(i) + "] excluded: " + e.what());
            }
        }
        for (std::size_t k = 0; k < h.tau_ps.size(); ++k) {
            const double measured = h.counts[k] / norm;
            const double uncertainty = std::sqrt(std::max(h.counts[k], 1.0)) / norm;
            record("histogram", i, h.detuning_uev, h.tau_ps[k], measured, uncertainty,
                   [&] { return model[k]; }, g2_scale, b.histograms, use_g2 && !failed);
        }
    }
    b.total = b.transmission + b.g2zero + b.histograms;
    return out;
}

FitResult run_fit(const MeasurementSet& data, const PhysicalParams& initial, const FitOptions& options,
                  const std::array<bool, kFitParameterCount>& free, const std::array<Transform, kFitParameterCount>& tf,
                  bool use_transmission, bool use_g2) {
    std::vector<int> index;
    for (int i = 0; i < kFitParameterCount; ++i) {
        if (free[i]) index.push_back(i);
    }
    PhysicalParams base = initial;
    // The starting point must sit inside the bounds the transforms map onto.
    for (int i : index) set(base, i, tf[i].from_free(tf[i].to_free(get(base, i))));

    auto params_of = [&](const Eigen::VectorXd& u) {
        PhysicalParams p = base;
        for (std::size_t k = 0; k < index.size(); ++k) set(p, index[k], tf[index[k]].from_free(u(k)));
        return p;
    };
    const ResidualFunction f = [&](const Eigen::VectorXd& u) {
        return compute_residuals(params_of(u), data, options.model, options.g2_weight, use_transmission, use_g2)
            .weighted;
    };

    Eigen::VectorXd u0(static_cast<Eigen::Index>(index.size()));
    for (std::size_t k = 0; k < index.size(); ++k) u0(k) = tf[index[k]].to_free(get(base, index[k]));

    FitResult out;
    out.free = free;
    if (index.empty()) {
        out.params = base;
        out.converged = true;
        out.stop_reason = "no free parameters";
    } else {
        const LeastSquaresResult ls = levenberg_marquardt(f, u0, options.solver);
        out.params = params_of(ls.x);
        out.iterations = ls.iterations;
        out.evaluations = ls.evaluations;
        out.converged = ls.converged;
        out.degenerate = ls.degenerate;
        out.gradient_norm = ls.gradient.norm();
        out.stop_reason = ls.stop_reason;

        const auto m = static_cast<double>(ls.residuals.size());
        const double dof = std::max(1.0, m - static_cast<double>(index.size()));
        const Eigen::MatrixXd jtj = ls.jacobian.transpose() * ls.jacobian;
        const Eigen::MatrixXd cov =
            (ls.objective / dof) * jtj.completeOrthogonalDecomposition().pseudoInverse();
        for (std::size_t k = 0; k < index.size(); ++k) {
            const int i = index[k];
            out.std_error[i] = std::abs(tf[i].slope(ls.x(k))) * std::sqrt(std::max(cov(k, k), 0.0));
            const double y = tf[i].fraction(get(out.params, i));
            out.bound_hit[i] = y < kBoundHit || y > 1.0 - kBoundHit;
        }
    }
    out.breakdown = evaluate_objective(out.params, data, options.model, options.g2_weight);
    out.objective = out.breakdown.total;
    return out;
}

}  // namespace

void MeasurementSet::validate() const {
    if (reference_energy_uev) require(std::isfinite(*reference_energy_uev), "reference energy must be finite");
    for (const DataPoint& p : transmission) check_point(p, "transmission");
    for (const DataPoint& p : g2zero) check_point(p, "g2zero");
    for (const Histogram& h : histograms) {
        require(std::isfinite(h.detuning_uev), "histogram detuning must be finite");
        require(h.tau_ps.size() == h.counts.size() && !h.tau_ps.empty(),
                "histogram needs matching, non-empty delay and count columns");
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
            require(std::isfinite(h.tau_ps[k]), "histogram delays must be finite");
            require(std::isfinite(h.counts[k]) && h.counts[k] >= 0.0, "histogram counts must be >= 0");
        }
    }
}

double histogram_normalization(const Histogram& h) {
    double tmax = 0.0;
    for (double t : h.tau_ps) tmax = std::max(tmax, std::abs(t));
    double sum = 0.0;
    int n = 0;
    for (std::size_t k = 0; k < h.tau_ps.size(); ++k) {
        if (std::abs(h.tau_ps[k]) >= 0.75 * tmax) {
            sum += h.counts[k];
            ++n;
        }
    }
    if (n == 0 || !(sum > 0.0)) fail(ErrorCategory::kNumerical, "histogram has no counts at long delay");
    return sum / n;
}

double fano_lineshape(double delta_uev, double q, double gamma_uev, double amplitude, double offset) {
    require(gamma_uev > 0.0, "Fano width must be > 0");
    const double x = 2.0 * delta_uev / gamma_uev;
    return amplitude * (q + x) * (q + x) / (1.0 + x * x) + offset;
}

FanoFit fit_fano(const std::vector<DataPoint>& points, bool fit_center, const LeastSquaresOptions& options) {
    require(points.size() >= 8, "a Fano fit needs at least 8 points");
    for (const DataPoint& p : points) check_point(p, "transmission");
    const auto [lo_it, hi_it] = std::minmax_element(
        points.begin(), points.end(), [](const DataPoint& a, const DataPoint& b) { return a.value < b.value; });
    const double vmin = lo_it->value;
    const double vmax = hi_it->value;
    const double span = vmax - vmin;
    const double dz = lo_it->detuning_uev;
    const double dm = hi_it->detuning_uev;
    require(span > 0.0 && dz != dm, "Fano fit needs a non-flat lineshape");

    // x = (q, log Γ, amplitude, offset[, center])
    auto unpack = [&](const Eigen::VectorXd& x) {
        FanoFit f;
        f.q = x(0);
        f.gamma_uev = std::exp(x(1));
        f.amplitude = x(2);
        f.offset = x(3);
        f.center_uev = fit_center ? x(4) : 0.0;
        return f;
    };
    const ResidualFunction residual = [&](const Eigen::VectorXd& x) {
        const FanoFit f = unpack(x);
        Eigen::VectorXd r(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            const DataPoint& p = points[i];
            r(i) = (fano_lineshape(p.detuning_uev - f.center_uev, f.q, f.gamma_uev, f.amplitude, f.offset) -
                    p.value) /
                   p.uncertainty;
        }
        return r;
    };

    // Zero at c - qΓ/2 and maximum at c + Γ/(2q); one start per trial q.
    FanoFit best;
    best.objective = std::numeric_limits<double>::infinity();
    const double sign = dm > dz ? 1.0 : -1.0;
    for (double mag : {0.2, 0.5, 1.0, 2.0, 5.0}) {
        const double q = sign * mag;
        const double gamma = 2.0 * (dm - dz) / (q + 1.0 / q);
        Eigen::VectorXd x0(fit_center ? 5 : 4);
        x0(0) = q;
        x0(1) = std::log(gamma);
        x0(2) = span / (1.0 + q * q);
        x0(3) = vmin;
        if (fit_center) x0(4) = dz + 0.5 * q * gamma;
        LeastSquaresResult ls;
        try {
            ls = levenberg_marquardt(residual, x0, options);
        } catch (const Error&) {
            continue;
        }
        if (ls.objective < best.objective) {
            best = unpack(ls.x);
            best.objective = ls.objective;
            best.residuals.assign(ls.residuals.data(), ls.residuals.data() + ls.residuals.size());
            best.iterations = ls.iterations;
            best.converged = ls.converged;
            best.degenerate = ls.degenerate;
        }
    }
    if (!std::isfinite(best.objective)) fail(ErrorCategory::kNumerical, "Fano fit failed from every start");
    // (q, A, c) and (-1/q, -A q², c + A(1 + q²)) describe the same curve; report A > 0,
    // where the offset is the value at the Fano zero.
    if (best.amplitude < 0.0 && best.q != 0.0) {
        const double q = best.q;
        best.offset += best.amplitude * (1.0 + q * q);
        best.amplitude = -best.amplitude * q * q;
        best.q = -1.0 / q;
    }
    return best;
}

const char* fit_parameter_name(FitParameter p) {
    switch (p) {
        case kOmega0: return "omega0_uev";
        case kLifetime: return "lifetime_ps";
        case kDephasingTime: return "dephasing_time_ps";
        case kSigma: return "sigma_wander_uev";
        case kT0: return "t0";
        case kBeta: return "beta";
        case kFitParameterCount: break;
    }
    return "?";
}

ObjectiveBreakdown evaluate_objective(const PhysicalParams& p, const MeasurementSet& data,
                                      const ModelSettings& settings, double g2_weight) {
    require(!data.empty(), "measurement set is empty");
    require(std::isfinite(g2_weight) && g2_weight >= 0.0, "g2 weight must be >= 0");
    data.validate();
    return compute_residuals(p, data, settings, g2_weight, true, true).breakdown;
}

double model_objective(const PhysicalParams& p, const MeasurementSet& data, const ModelSettings& settings,
                       double g2_weight) {
    return evaluate_objective(p, data, settings, g2_weight).total;
}

FitResult fit_full_model(const MeasurementSet& measured, const PhysicalParams& initial,
                         const FitOptions& options) {
    require(!measured.empty(), "measurement set is empty");
    measured.validate();
    initial.validate();
    // Detunings must stay anchored to a fixed energy while ω0 moves.
    MeasurementSet data = measured;
    if (!data.reference_energy_uev) data.reference_energy_uev = initial.omega0_uev;
    const auto tf = make_transforms(options.bounds, initial.omega0_uev);
    if (options.mode == FitMode::kJoint) return run_fit(data, initial, options, options.free, tf, true, true);

    FitResult stage1 = run_fit(data, initial, options, options.free, tf, true, false);
    if (data.g2zero.empty() && data.histograms.empty()) return stage1;
    auto free2 = options.free;
    free2[kOmega0] = false;
    free2[kT0] = false;
    FitResult stage2 = run_fit(data, stage1.params, options, free2, tf, false, true);
    stage2.iterations += stage1.iterations;
    stage2.evaluations += stage1.evaluations;
    stage2.converged = stage1.converged && stage2.converged;
    stage2.degenerate = stage1.degenerate || stage2.degenerate;
    for (int i : {static_cast<int>(kOmega0), static_cast<int>(kT0)}) {
        stage2.std_error[i] = stage1.std_error[i];
        stage2.bound_hit[i] = stage1.bound_hit[i];
    }
    stage2.free = options.free;
    return stage2;
}

std::vector<PhysicalParams> default_starts(const PhysicalParams& initial) {
    std::vector<PhysicalParams> out;
    for (double t0 : {0.3, 0.5, 0.7, 0.9}) {
        for (double sigma : {2.0, 5.0, 10.0}) {
            PhysicalParams p = initial;
            p.t0 = t0;
            p.sigma_wander_uev = sigma;
            out.push_back(p);
        }
    }
    return out;
}

MultistartResult fit_multistart(const MeasurementSet& data, const std::vector<PhysicalParams>& starts,
                                const FitOptions& options) {
    require(!starts.empty(), "multistart needs at least one start");
    MultistartResult out;
    for (const PhysicalParams& s : starts) {
        out.runs.push_back(fit_full_model(data, s, options));
        if (out.runs.back().objective < out.runs[out.best].objective) out.best = out.runs.size() - 1;
    }
    return out;
}

SyntheticDesign reference_design() {
    SyntheticDesign d;
    for (int i = 0; i < 25; ++i) d.transmission_detunings_uev.push_back(-40.0 + 80.0 * i / 24.0);
    for (int i = 0; i < 9; ++i) d.g2_detunings_uev.push_back(-40.0 + 80.0 * i / 8.0);
    return d;
}

MeasurementSet synthesize(const PhysicalParams& truth, const SyntheticDesign& design,
                          const ModelSettings& settings) {
    truth.validate();
    require(design.noise_fraction >= 0.0, "noise fraction must be >= 0");
    require(design.relative_uncertainty > 0.0, "relative uncertainty must be > 0");
    std::mt19937_64 rng(design.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    MeasurementSet out;
    out.reference_energy_uev = truth.omega0_uev;
    auto make = [&](double detuning, double exact) {
        const double noisy = exact * (1.0 + design.noise_fraction * normal(rng));
        return DataPoint{detuning, noisy, design.relative_uncertainty * std::abs(exact) + 1e-12};
    };
    for (double d : design.transmission_detunings_uev) {
        out.transmission.push_back(make(d, model_transmission(truth, d, settings)));
    }
    for (double d : design.g2_detunings_uev) out.g2zero.push_back(make(d, model_g2(truth, d, 0.0, settings)));
    return out;
}

}  // namespace fanostat

#include "fanostat/ensemble_averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kAutoGaussHermiteSigma = 0.25;
constexpr double kKernelSpan = 6.0;

QuadratureNodes trapezoid_nodes(const AveragingSpec& spec) {
    const double h = std::min(spec.sigma, 1.0) / spec.nodes_per_linewidth;
    const auto half = static_cast<int>(std::ceil(spec.quadrature_span * spec.sigma / h));
    QuadratureNodes q;
    q.offsets.reserve(2 * half + 1);
    q.weights.reserve(2 * half + 1);
    for (int i = -half; i <= half; ++i) {
        const double x = i * h;
        const double r = x / spec.sigma;
        q.offsets.push_back(x);
        q.weights.push_back(std::exp(-0.5 * r * r));
    }
    const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
    for (double& w : q.weights) w /= total;
    return q;
}

}  // namespace

void AveragingSpec::validate() const {
    require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be finite and >= 0");
    require(std::isfinite(t_resp) && t_resp >= 0.0, "t_resp must be finite and >= 0");
    require(quadrature_points >= 1, "quadrature_points must be >= 1");
    require(quadrature_span >= 6.0, "quadrature_span must be >= 6");
    require(nodes_per_linewidth >= 2, "nodes_per_linewidth must be >= 2");
}

AveragingSpec AveragingSpec::refined() const {
    AveragingSpec out = *this;
    out.quadrature_points = 2 * quadrature_points + 1;
    out.nodes_per_linewidth = 2 * nodes_per_linewidth;
    out.quadrature_span = quadrature_span + 1.0;
    return out;
}

QuadratureNodes gauss_hermite_nodes(int order) {
    require(order >= 1, "Gauss-Hermite order must be >= 1");
    // Jacobi matrix of the monic probabilists' Hermite recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
        jacobi(k - 1, k) = jacobi(k, k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    QuadratureNodes q;
    q.offsets.resize(order);
    q.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        q.offsets[i] = solver.eigenvalues()(i);
        const double v = solver.eigenvectors()(0, i);
        q.weights[i] = v * v;
    }
    // Symmetrize to remove eigen-solver round-off.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double x = 0.5 * (q.offsets[j] - q.offsets[i]);
        const double w = 0.5 * (q.weights[i] + q.weights[j]);
        q.offsets[i] = -x;
        q.offsets[j] = x;
        q.weights[i] = w;
        q.weights[j] = w;
    }
    if (order % 2 == 1) q.offsets[order / 2] = 0.0;
    const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
    for (double& w : q.weights) w /= total;
    return q;
}

QuadratureNodes wandering_nodes(const AveragingSpec& spec) {
    spec.validate();
    if (spec.sigma == 0.0) return QuadratureNodes{{0.0}, {1.0}};
    const bool use_gh = spec.rule == QuadratureRule::kGaussHermite ||
                        (spec.rule == QuadratureRule::kAuto && spec.sigma <= kAutoGaussHermiteSigma);
    if (!use_gh) return trapezoid_nodes(spec);
    QuadratureNodes q = gauss_hermite_nodes(spec.quadrature_points);
    for (double& x : q.offsets) x *= spec.sigma;
    return q;
}

double avg_g1(double delta, const ReducedModel& model, const AveragingSpec& spec) {
    const QuadratureNodes q = wandering_nodes(spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.offsets.size(); ++i) {
        sum += q.weights[i] * g1_general(delta + q.offsets[i], model);
    }
    return sum;
}

AveragedCorrelator::AveragedCorrelator(double delta, const ReducedModel& model,
                                       const AveragingSpec& spec)
    : t_resp_(spec.t_resp) {
    const QuadratureNodes q = wandering_nodes(spec);
    nodes_.reserve(q.offsets.size());
    weights_ = q.weights;
    for (std::size_t i = 0; i < q.offsets.size(); ++i) {
        nodes_.emplace_back(delta + q.offsets[i], model.zeta, model.beta, model.phi);
        denominator_ += weights_[i] * nodes_.back().g1() * nodes_.back().g1();
    }
}

double AveragedCorrelator::numerator(double tau) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * nodes_[i].numerator(tau);
    return sum;
}

double AveragedCorrelator::g2(double tau) const {
    if (denominator_ == 0.0) return std::numeric_limits<double>::infinity();
    return numerator(tau) / denominator_;
}

double AveragedCorrelator::detected_g2(double tau) const {
    if (t_resp_ == 0.0) return g2(tau);
    const double step = t_resp_ / 8.0;
    const std::vector<double> kernel = detector_kernel(t_resp_, step);
    const auto half = static_cast<int>(kernel.size() / 2);
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) sum += kernel[k + half] * g2(tau + k * step);
    return sum;
}

double avg_g2(double tau, double delta, const ReducedModel& model, const AveragingSpec& spec) {
    return AveragedCorrelator(delta, model, spec).g2(tau);
}

namespace {

QuadratureCheck make_check(double value, double refined) {
    QuadratureCheck c;
    c.value = value;
    c.refined = refined;
    const double scale = std::max(std::abs(refined), 1e-300);
    c.relative_change = std::abs(value - refined) / scale;
    c.converged = c.relative_change <= kQuadratureTolerance;
    return c;
}

}  // namespace

QuadratureCheck avg_g1_checked(double delta, const ReducedModel& model, const AveragingSpec& spec) {
    return make_check(avg_g1(delta, model, spec), avg_g1(delta, model, spec.refined()));
}

QuadratureCheck avg_g2_checked(double tau, double delta, const ReducedModel& model,
                               const AveragingSpec& spec) {
    return make_check(avg_g2(tau, delta, model, spec), avg_g2(tau, delta, model, spec.refined()));
}

double require_converged(const QuadratureCheck& check) {
    if (!check.converged) {
        fail(ErrorCategory::kNumerical,
             "wandering quadrature not converged: relative change " +
                 std::to_string(check.relative_change) + " on refinement");
    }
    return check.value;
}

std::vector<double> detector_kernel(double t_resp, double step) {
    require(t_resp > 0.0 && step > 0.0, "kernel width and step must be > 0");
    const auto half = static_cast<int>(std::ceil(kKernelSpan * t_resp / step));
    std::vector<double> kernel(2 * half + 1);
    for (int k = -half; k <= half; ++k) {
        const double r = k * step / t_resp;
        kernel[k + half] = std::exp(-0.5 * r * r);
    }
    const double total = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (double& w : kernel) w /= total;
    return kernel;
}

SampledCurve convolve_detector(const SampledCurve& curve, double t_resp) {
    require(std::isfinite(t_resp) && t_resp >= 0.0, "t_resp must be finite and >= 0");
    require(curve.step > 0.0, "grid step must be > 0");
    if (t_resp == 0.0 || curve.values.empty()) return curve;
    if (curve.step > t_resp / 4.0) {
        fail(ErrorCategory::kInvalidArgument,
             "grid step exceeds t_resp/4; the detector kernel would be undersampled");
    }
    const std::vector<double> kernel = detector_kernel(t_resp, curve.step);
    const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    const auto n = static_cast<std::ptrdiff_t>(curve.values.size());
    SampledCurve out{curve.start, curve.step, std::vector<double>(curve.values.size())};
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);
            sum += kernel[k + half] * curve.values[j];
        }
        out.values[i] = sum;
    }
    return out;
}

}  // namespace fanostat

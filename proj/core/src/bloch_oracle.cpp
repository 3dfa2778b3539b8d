#include "fanostat/bloch_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kPhysicalityTolerance = 1e-8;

double error_norm(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y0, const Eigen::VectorXcd& y1,
                  const OdeOptions& o) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = o.atol + o.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / scale;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

OdeStats dopri5(const OdeRhs& rhs, double t0, double t1, Eigen::VectorXcd& y, const OdeOptions& o) {
    require(t1 >= t0, "dopri5 integrates forward only");
    OdeStats stats;
    if (t1 == t0) return stats;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Eigen::Index n = y.size();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n), err(n);
    double t = t0;
    double h = std::min(o.initial_step, t1 - t0);
    rhs(t, y, k1);
    while (t < t1) {
        if (stats.accepted + stats.rejected >= o.max_steps) {
            fail(ErrorCategory::kNumerical, "dopri5: maximum number of steps exceeded");
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            fail(ErrorCategory::kNumerical, "dopri5: step size underflow at t = " + std::to_string(t));
        }
        const bool last = t + h >= t1;
        if (last) h = t1 - t;

        tmp = y + h * a21 * k1;
        rhs(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, tmp, k6);
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y_new, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, y_new, o);
        if (en <= 1.0) {
            t = last ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++stats.accepted;
        } else {
            ++stats.rejected;
        }
        if (!std::isfinite(en)) {
            h *= 0.2;
        } else {
            h *= en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        }
    }
    return stats;
}

BlochOracle::BlochOracle(double delta, const ReducedModel& model, OdeOptions options)
    : model_(model), options_(options) {
    require(std::isfinite(delta), "delta must be finite");
    require(model.alpha >= 0.0 && std::isfinite(model.alpha), "the oracle needs a finite pump alpha >= 0");
    require(model.zeta >= 1.0 && std::isfinite(model.zeta), "zeta must be finite and >= 1");
    require(model.beta >= 0.0 && model.beta <= 1.0, "beta must lie in [0, 1]");
    require(std::cos(model.phi) > 0.0, "phi must lie in (-pi/2, pi/2)");

    const Complex i(0.0, 1.0);
    const Complex half_phase = std::polar(1.0, 0.5 * model.phi);
    const Complex omega = i * half_phase * std::sqrt(0.5 * model.alpha);
    const double z = model.zeta;

    generator_.setZero();
    generator_(0, 0) = Complex(-z, delta);
    generator_(0, 2) = -omega;
    generator_(1, 1) = Complex(-z, -delta);
    generator_(1, 2) = -std::conj(omega);
    generator_(2, 0) = 2.0 * std::conj(omega);
    generator_(2, 1) = 2.0 * omega;
    generator_(2, 2) = -2.0;
    generator_(2, 3) = -2.0;

    const Eigen::Matrix3cd m = generator_.topLeftCorner<3, 3>();
    const Eigen::Vector3cd b = -generator_.block<3, 1>(0, 3);
    const Eigen::FullPivLU<Eigen::Matrix3cd> lu(m);
    if (!lu.isInvertible()) fail(ErrorCategory::kNumerical, "singular stationary Bloch system");
    const Eigen::Vector3cd s = lu.solve(b);
    residual_ = (m * s - b).norm();
    if (!(residual_ < 1e-12)) {
        fail(ErrorCategory::kNumerical, "steady-state solve failed, residual " + std::to_string(residual_));
    }
    steady_ = BlochState{s(0), std::conj(s(0)), s(2).real()};
    const double length2 = 4.0 * std::norm(steady_.s_minus) + steady_.s_z * steady_.s_z;
    if (length2 > 1.0 + kPhysicalityTolerance) {
        fail(ErrorCategory::kNumerical, "steady state outside the Bloch sphere");
    }

    if (model.beta == 0.0) {
        output_ = TwoLevelOperator(model.t0(), 0.0, 0.0, 0.0);
        output_defined_ = true;
    } else if (model.alpha > 0.0) {
        const Complex kappa = i * model.beta * half_phase * std::sqrt(2.0 / model.alpha);
        output_ = TwoLevelOperator(model.t0(), kappa, 0.0, 0.0);
        output_defined_ = true;
    }
    if (output_defined_) intensity_ = (output_.adjoint() * output_).expectation(steady_).real();
}

void BlochOracle::require_output() const {
    require(output_defined_, "output correlators need alpha > 0 when beta > 0");
}

BlochState BlochOracle::evolve(const BlochState& start, double tau) const {
    const RegressionVector r = evolve(RegressionVector{start.s_minus, start.s_plus, start.s_z, 1.0}, tau);
    const BlochState out{r.minus, r.plus, r.z.real()};
    if (std::abs(out.s_z) > 1.0 + kPhysicalityTolerance) {
        fail(ErrorCategory::kNumerical, "trajectory left the Bloch sphere");
    }
    return out;
}

RegressionVector BlochOracle::evolve(const RegressionVector& start, double tau) const {
    require(tau >= 0.0 && std::isfinite(tau), "evolution time must be finite and >= 0");
    Eigen::VectorXcd y(4);
    y << start.minus, start.plus, start.z, start.weight;
    const Eigen::Matrix4cd& g = generator_;
    stats_ = dopri5([&g](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = g * x; }, 0.0,
                    tau, y, options_);
    return RegressionVector{y(0), y(1), y(2), y(3)};
}

double BlochOracle::output_correlator_g1() const {
    require_output();
    const double t0 = model_.t0();
    return intensity_ / (t0 * t0);
}

RegressionVector BlochOracle::regression_start() const {
    require_output();
    const TwoLevelOperator xd = output_.adjoint();
    RegressionVector r;
    r.minus = (xd * TwoLevelOperator::sigma_minus() * output_).expectation(steady_);
    r.plus = (xd * TwoLevelOperator::sigma_plus() * output_).expectation(steady_);
    r.z = (xd * TwoLevelOperator::sigma_z() * output_).expectation(steady_);
    r.weight = (xd * output_).expectation(steady_);
    return r;
}

double BlochOracle::g2_from(const Eigen::VectorXcd& r) const {
    const TwoLevelOperator n = output_.adjoint() * output_;
    const Complex g2 = n[TwoLevelOperator::kMinus] * r(0) + n[TwoLevelOperator::kPlus] * r(1) +
                       n[TwoLevelOperator::kZ] * r(2) + n[TwoLevelOperator::kIdentity] * r(3);
    const double scale = intensity_ * intensity_;
    if (g2.real() < -kPhysicalityTolerance * scale) {
        fail(ErrorCategory::kNumerical, "negative second-order correlation from the oracle");
    }
    return g2.real() / scale;
}

double BlochOracle::output_correlator_g2(double tau) const {
    return output_correlator_g2(std::vector<double>{tau}).front();
}

std::vector<double> BlochOracle::output_correlator_g2(const std::vector<double>& taus) const {
    require_output();
    std::vector<std::size_t> order(taus.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(taus[a]) < std::abs(taus[b]); });
    std::vector<double> out(taus.size());
    const RegressionVector r0 = regression_start();
    Eigen::VectorXcd y(4);
    y << r0.minus, r0.plus, r0.z, r0.weight;
    const Eigen::Matrix4cd& g = generator_;
    const OdeRhs rhs = [&g](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = g * x; };
    double t = 0.0;
    OdeStats total;
    for (std::size_t idx : order) {
        const double target = std::abs(taus[idx]);
        require(std::isfinite(target), "tau must be finite");
        const OdeStats s = dopri5(rhs, t, target, y, options_);
        total.accepted += s.accepted;
        total.rejected += s.rejected;
        t = target;
        out[idx] = g2_from(y);
    }
    stats_ = total;
    return out;
}

}  // namespace fanostat

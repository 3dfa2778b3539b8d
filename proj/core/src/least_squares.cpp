#include "fanostat/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "fanostat/error.hpp"

namespace fanostat {

namespace {

constexpr double kMaxDamping = 1e16;
constexpr double kZeroObjective = 1e-28;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx, const LeastSquaresOptions& o,
                                           int* evaluations) {
    Eigen::MatrixXd jac(fx.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = o.difference_step * std::max(1.0, std::abs(x(j)));
        Eigen::VectorXd xp = x;
        xp(j) += h;
        const Eigen::VectorXd fp = f(xp);
        if (o.central_differences) {
            Eigen::VectorXd xm = x;
            xm(j) -= h;
            jac.col(j) = (fp - f(xm)) / (2.0 * h);
            if (evaluations) *evaluations += 2;
        } else {
            jac.col(j) = (fp - fx) / h;
            if (evaluations) *evaluations += 1;
        }
    }
    if (!jac.allFinite()) fail(ErrorCategory::kNumerical, "non-finite Jacobian entry");
    return jac;
}

LeastSquaresResult levenberg_marquardt(const ResidualFunction& f, const Eigen::VectorXd& x0,
                                       const LeastSquaresOptions& o) {
    LeastSquaresResult res;
    res.x = x0;
    res.residuals = f(x0);
    res.evaluations = 1;
    if (!all_finite(res.residuals)) fail(ErrorCategory::kNumerical, "non-finite residuals at the start point");
    res.objective = res.residuals.squaredNorm();
    const double initial_objective = res.objective;

    double damping = o.initial_damping;
    res.jacobian = finite_difference_jacobian(f, res.x, res.residuals, o, &res.evaluations);
    const Eigen::Index n = x0.size();

    while (true) {
        const Eigen::MatrixXd& jac = res.jacobian;
        const Eigen::VectorXd jtr = jac.transpose() * res.residuals;
        res.gradient = 2.0 * jtr;
        if (res.objective < kZeroObjective) {
            res.converged = true;
            res.stop_reason = "zero residual";
            break;
        }
        if (res.gradient.norm() < o.gradient_tolerance) {
            res.converged = true;
            res.stop_reason = "gradient norm";
            break;
        }
        if (res.iterations >= o.max_iterations) {
            res.stop_reason = "maximum iterations";
            break;
        }
        ++res.iterations;

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd scale = jtj.diagonal();
        const double floor = 1e-12 * std::max(scale.maxCoeff(), 1e-300);
        for (Eigen::Index i = 0; i < n; ++i) scale(i) = std::max(scale(i), floor);

        bool accepted = false;
        double new_objective = res.objective;
        Eigen::VectorXd x_new, r_new;
        while (damping <= kMaxDamping) {
            Eigen::MatrixXd lhs = jtj;
            lhs.diagonal() += damping * scale;
            const Eigen::VectorXd step = lhs.ldlt().solve(-jtr);
            x_new = res.x + step;
            if (step.allFinite()) {
                r_new = f(x_new);
                ++res.evaluations;
                if (all_finite(r_new)) {
                    new_objective = r_new.squaredNorm();
                    if (new_objective < res.objective) {
                        accepted = true;
                        break;
                    }
                }
            }
            damping *= 4.0;
        }
        if (!accepted) {
            // No descent even for vanishing steps: accept if Gauss-Newton predicts nothing to gain.
            const Eigen::VectorXd gn = jac.completeOrthogonalDecomposition().solve(-res.residuals);
            const double predicted = -(2.0 * jtr.dot(gn) + (jac * gn).squaredNorm());
            // Residuals at round-off relative to the start also count as converged.
            const double eps = 64.0 * std::numeric_limits<double>::epsilon();
            const double roundoff = static_cast<double>(res.residuals.size()) * eps * eps * std::max(initial_objective, 1.0);
            res.converged = predicted <= 1e-8 * res.objective || res.objective <= roundoff;
            res.stop_reason = "no further decrease";
            break;
        }
        const double change = (res.objective - new_objective) / res.objective;
        res.x = x_new;
        res.residuals = r_new;
        res.objective = new_objective;
        damping = std::max(damping / 3.0, 1e-12);
        res.jacobian = finite_difference_jacobian(f, res.x, res.residuals, o, &res.evaluations);
        if (change < o.objective_tolerance) {
            res.gradient = 2.0 * res.jacobian.transpose() * res.residuals;
            res.converged = true;
            res.stop_reason = "objective change";
            break;
        }
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(res.jacobian);
    const Eigen::VectorXd s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    res.rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > o.rank_tolerance * smax) ++res.rank;
    }
    res.degenerate = res.rank < n;
    return res;
}

}  // namespace fanostat

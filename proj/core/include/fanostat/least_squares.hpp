#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace fanostat {

/// Residual vector r(x); the objective is Σ r².
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    /// Stop when an accepted step changes the objective by less than this, relatively.
    double objective_tolerance = 1e-10;
    double gradient_tolerance = 1e-8;
    /// Relative finite-difference step for the Jacobian.
    double difference_step = 1e-7;
    bool central_differences = false;
    double initial_damping = 1e-3;
    /// Singular values below rank_tolerance * s_max count as rank loss.
    double rank_tolerance = 1e-10;
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    Eigen::VectorXd gradient;
    double objective = 0.0;
    int iterations = 0;
    int evaluations = 0;
    int rank = 0;
    bool converged = false;
    bool degenerate = false;
    std::string stop_reason;
};

Eigen::MatrixXd finite_difference_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx, const LeastSquaresOptions& options,
                                           int* evaluations = nullptr);

/// Levenberg–Marquardt with Marquardt diagonal scaling. Non-finite residuals
/// at a trial point count as a rejected step.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& f, const Eigen::VectorXd& x0,
                                       const LeastSquaresOptions& options = {});

}  // namespace fanostat

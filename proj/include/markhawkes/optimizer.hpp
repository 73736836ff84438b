#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace markhawkes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Objective returning f(x); when `gradient` is non-null it is filled with
/// df/dx. May return -inf / NaN for infeasible points.
using DifferentiableObjective = std::function<double(const Vector& x, Vector* gradient)>;
using ScalarObjective = std::function<double(const Vector& x)>;

struct OptimizerConfig {
    std::size_t max_iterations{500};
    double gradient_tolerance{1e-6};
    double relative_tolerance{1e-10};
    double armijo_c1{1e-4};
    double backtracking_shrink{0.5};
    std::size_t max_line_search_steps{60};
};

struct OptimizeResult {
    Vector x;
    double value{0.0};
    std::size_t iterations{0};
    bool converged{false};
    double gradient_max_norm{0.0};
};

/// Quasi-Newton (BFGS) ascent with Armijo backtracking. Stops when the
/// gradient max-norm or the relative change in f falls below tolerance.
[[nodiscard]] OptimizeResult maximize_bfgs(const DifferentiableObjective& objective,
                                           Vector start,
                                           const OptimizerConfig& config = {});

/// Central differences with h_i = 1e-5 * max(1, |x_i|). Throws
/// std::domain_error naming the coordinate when a stencil value is not finite.
[[nodiscard]] Vector numerical_gradient(const ScalarObjective& objective, const Vector& x);

/// Hessian by central differences of an analytic gradient with
/// h_i = step * max(1, |x_i|), symmetrised.
[[nodiscard]] Matrix hessian_from_gradient(const DifferentiableObjective& objective,
                                           const Vector& x,
                                           double step = 1e-4);

struct CovarianceEstimate {
    Matrix covariance;
    bool singular{false}; ///< pseudo-inverse was used
};

/// Inverse of the observed information -H. Falls back to a
/// Moore-Penrose pseudo-inverse when -H is not positive definite.
[[nodiscard]] CovarianceEstimate observed_information_covariance(const Matrix& hessian);

} // namespace markhawkes

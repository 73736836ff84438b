#include "markhawkes/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace markhawkes {

namespace {

bool finite(double v) { return std::isfinite(v); }

double max_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

} // namespace

OptimizeResult maximize_bfgs(const DifferentiableObjective& objective, Vector start, const OptimizerConfig& config) {
    const auto n = start.size();
    // Internally minimise g(x) = -f(x).
    auto evaluate = [&](const Vector& x, Vector& grad) {
        const double f = objective(x, &grad);
        grad = -grad;
        return -f;
    };

    OptimizeResult result;
    result.x = std::move(start);
    Vector grad(n);
    double value = evaluate(result.x, grad);
    if (!finite(value) || !grad.allFinite()) {
        throw std::domain_error("objective is not finite at the starting point");
    }

    Matrix inverse_hessian = Matrix::Identity(n, n);
    bool identity = true;
    bool first_step = true;

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        result.iterations = iter + 1;
        if (max_norm(grad) < config.gradient_tolerance) {
            result.converged = true;
            break;
        }
        Vector direction = -(inverse_hessian * grad);
        if (first_step || direction.dot(grad) >= 0.0 || !direction.allFinite()) {
            direction = -grad / std::max(1.0, max_norm(grad));
            inverse_hessian.setIdentity();
            identity = true;
        }
        const double slope = direction.dot(grad);

        double step = 1.0;
        Vector candidate(n);
        Vector candidate_grad(n);
        double candidate_value = 0.0;
        bool accepted = false;
        for (std::size_t ls = 0; ls < config.max_line_search_steps; ++ls) {
            candidate = result.x + step * direction;
            candidate_value = evaluate(candidate, candidate_grad);
            if (finite(candidate_value) && candidate_grad.allFinite() &&
                candidate_value <= value + config.armijo_c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= config.backtracking_shrink;
        }
        if (!accepted) {
            if (!identity) {
                // Stale curvature; retry along steepest descent.
                inverse_hessian.setIdentity();
                identity = true;
                first_step = true;
                continue;
            }
            break;
        }

        const Vector s = candidate - result.x;
        const Vector y = candidate_grad - grad;
        const double previous = value;
        result.x = candidate;
        value = candidate_value;
        grad = candidate_grad;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (identity) {
                inverse_hessian *= sy / y.dot(y);
            }
            const double rho = 1.0 / sy;
            const Matrix I = Matrix::Identity(n, n);
            inverse_hessian = (I - rho * s * y.transpose()) * inverse_hessian * (I - rho * y * s.transpose()) +
                              rho * s * s.transpose();
            identity = false;
        }
        first_step = false;

        if (std::abs(previous - value) <= config.relative_tolerance * std::max(1.0, std::abs(previous))) {
            result.converged = true;
            break;
        }
    }
    result.value = -value;
    result.gradient_max_norm = max_norm(grad);
    if (result.gradient_max_norm < config.gradient_tolerance) {
        result.converged = true;
    }
    return result;
}

Vector numerical_gradient(const ScalarObjective& objective, const Vector& x) {
    Vector grad(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const double up = objective(probe);
        probe[i] = x[i] - h;
        const double down = objective(probe);
        probe[i] = x[i];
        if (!finite(up) || !finite(down)) {
            throw std::domain_error(fmt::format("objective not finite in stencil of coordinate {}", i));
        }
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

Matrix hessian_from_gradient(const DifferentiableObjective& objective, const Vector& x, double step) {
    const auto n = x.size();
    Matrix hessian(n, n);
    Vector probe = x;
    Vector up(n);
    Vector down(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = step * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        objective(probe, &up);
        probe[i] = x[i] - h;
        objective(probe, &down);
        probe[i] = x[i];
        hessian.col(i) = (up - down) / (2.0 * h);
    }
    return 0.5 * (hessian + hessian.transpose());
}

CovarianceEstimate observed_information_covariance(const Matrix& hessian) {
    CovarianceEstimate out;
    const Matrix information = -hessian;
    if (information.size() == 0) {
        out.covariance = information;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(information);
    const Vector& values = eig.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    const double cutoff = largest * 1e-12 * static_cast<double>(information.rows());
    Vector inverse_values(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] > cutoff) {
            inverse_values[i] = 1.0 / values[i];
        } else {
            // Zero or negative curvature: not a proper maximum along this direction.
            inverse_values[i] = 0.0;
            out.singular = true;
        }
    }
    out.covariance = eig.eigenvectors() * inverse_values.asDiagonal() * eig.eigenvectors().transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
    return out;
}

} // namespace markhawkes

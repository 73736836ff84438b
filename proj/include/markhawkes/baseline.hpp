#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "markhawkes/ingest.hpp"

namespace markhawkes::baseline {

struct LogisticConfig {
    double l2_penalty{1e-4};
    double gradient_tolerance{1e-6};
    std::size_t max_iterations{1000};
};

/// Logistic regression on standardised features. Columns with zero training
/// variance (such as the intercept) are left unscaled and unpenalised.
struct LogisticModel {
    std::vector<std::string> feature_names;
    Eigen::VectorXd weights; ///< on the standardised scale
    Eigen::VectorXd means;
    Eigen::VectorXd scales;
    std::vector<bool> penalized;
    double l2_penalty{0.0};
    std::size_t iterations{0};
    std::vector<double> loss_history;

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static LogisticModel from_json(const nlohmann::json& j);
};

/// Mean log-loss plus (penalty / 2) * sum of squared penalised weights, and
/// its gradient. `x` must already be standardised.
[[nodiscard]] double logistic_loss(const Eigen::MatrixXd& x,
                                   std::span<const int> labels,
                                   const Eigen::VectorXd& weights,
                                   double penalty,
                                   const std::vector<bool>& penalized,
                                   Eigen::VectorXd* gradient);

/// Gradient descent with backtracking line search. Throws when a class is absent.
[[nodiscard]] LogisticModel fit_logistic(const ingest::FeatureMatrix& features, const LogisticConfig& config = {});

/// Throws std::invalid_argument on a width mismatch.
[[nodiscard]] std::vector<double> predict_logistic(const LogisticModel& model, const Eigen::MatrixXd& features);

/// Elementwise mean of two probability vectors.
[[nodiscard]] std::vector<double> fuse(std::span<const double> a, std::span<const double> b);

[[nodiscard]] double sigmoid(double z);

} // namespace markhawkes::baseline

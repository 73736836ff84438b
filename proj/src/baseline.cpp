#include "markhawkes/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace markhawkes::baseline {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const Eigen::VectorXd& means, const Eigen::VectorXd& scales) {
    Eigen::MatrixXd out = x.rowwise() - means.transpose();
    return out.array().rowwise() / scales.transpose().array();
}

} // namespace

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double logistic_loss(const Eigen::MatrixXd& x,
                     std::span<const int> labels,
                     const Eigen::VectorXd& weights,
                     double penalty,
                     const std::vector<bool>& penalized,
                     Eigen::VectorXd* gradient) {
    const auto n = x.rows();
    const Eigen::VectorXd z = x * weights;
    double loss = 0.0;
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double y = labels[static_cast<std::size_t>(i)];
        // -[y log s(z) + (1 - y) log(1 - s(z))] = softplus(z) - y z
        loss += softplus(z[i]) - y * z[i];
        residual[i] = sigmoid(z[i]) - y;
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
        if (penalized[static_cast<std::size_t>(j)]) {
            reg += weights[j] * weights[j];
        }
    }
    loss += 0.5 * penalty * reg;
    if (gradient) {
        *gradient = x.transpose() * residual / static_cast<double>(n);
        for (Eigen::Index j = 0; j < weights.size(); ++j) {
            if (penalized[static_cast<std::size_t>(j)]) {
                (*gradient)[j] += penalty * weights[j];
            }
        }
    }
    return loss;
}

LogisticModel fit_logistic(const ingest::FeatureMatrix& features, const LogisticConfig& config) {
    const auto& labels = features.labels;
    const auto positives = std::count(labels.begin(), labels.end(), 1);
    const auto negatives = std::count(labels.begin(), labels.end(), 0);
    if (positives == 0 || negatives == 0 || positives + negatives != static_cast<std::ptrdiff_t>(labels.size())) {
        throw std::invalid_argument("logistic regression needs 0/1 labels with both classes present");
    }
    const auto p = features.values.cols();
    const auto n = static_cast<double>(features.rows());

    LogisticModel model;
    model.feature_names = features.names;
    model.l2_penalty = config.l2_penalty;
    model.means = features.values.colwise().mean();
    model.scales.resize(p);
    model.penalized.assign(static_cast<std::size_t>(p), true);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double var = (features.values.col(j).array() - model.means[j]).square().sum() / n;
        if (var <= 1e-24) {
            model.means[j] = 0.0;
            model.scales[j] = 1.0;
            model.penalized[static_cast<std::size_t>(j)] = false;
        } else {
            model.scales[j] = std::sqrt(var);
        }
    }
    const Eigen::MatrixXd x = standardize(features.values, model.means, model.scales);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd grad(p);
    double loss = logistic_loss(x, labels, w, config.l2_penalty, model.penalized, &grad);
    model.loss_history.push_back(loss);
    double step = 1.0;
    Eigen::VectorXd candidate_grad(p);
    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        if (grad.cwiseAbs().maxCoeff() < config.gradient_tolerance) {
            break;
        }
        model.iterations = iter + 1;
        const double g2 = grad.squaredNorm();
        bool accepted = false;
        // Start from twice the last accepted step so the step can grow back.
        step = std::min(step * 2.0, 1e3);
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd candidate = w - step * grad;
            const double candidate_loss =
                logistic_loss(x, labels, candidate, config.l2_penalty, model.penalized, &candidate_grad);
            if (candidate_loss <= loss - 1e-4 * step * g2) {
                w = candidate;
                loss = candidate_loss;
                grad = candidate_grad;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;
        }
        model.loss_history.push_back(loss);
    }
    model.weights = w;
    return model;
}

std::vector<double> predict_logistic(const LogisticModel& model, const Eigen::MatrixXd& features) {
    if (features.cols() != model.weights.size()) {
        throw std::invalid_argument(
            fmt::format("feature width {} does not match model width {}", features.cols(), model.weights.size()));
    }
    const Eigen::VectorXd z = standardize(features, model.means, model.scales) * model.weights;
    std::vector<double> out(static_cast<std::size_t>(z.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        out[static_cast<std::size_t>(i)] = sigmoid(z[i]);
    }
    return out;
}

std::vector<double> fuse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(fmt::format("cannot fuse {} and {} probabilities", a.size(), b.size()));
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = 0.5 * (a[i] + b[i]);
    }
    return out;
}

nlohmann::json LogisticModel::to_json() const {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        features.push_back({{"name", feature_names[j]},
                            {"weight", weights[jj]},
                            {"mean", means[jj]},
                            {"scale", scales[jj]},
                            {"penalized", static_cast<bool>(penalized[j])}});
    }
    return nlohmann::json{{"features", features},
                          {"l2_penalty", l2_penalty},
                          {"iterations", iterations},
                          {"final_loss", loss_history.empty() ? 0.0 : loss_history.back()}};
}

LogisticModel LogisticModel::from_json(const nlohmann::json& j) {
    LogisticModel m;
    const auto& features = j.at("features");
    const auto p = static_cast<Eigen::Index>(features.size());
    m.weights.resize(p);
    m.means.resize(p);
    m.scales.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
        const auto& f = features.at(static_cast<std::size_t>(k));
        m.feature_names.push_back(f.at("name").get<std::string>());
        m.weights[k] = f.at("weight").get<double>();
        m.means[k] = f.at("mean").get<double>();
        m.scales[k] = f.at("scale").get<double>();
        m.penalized.push_back(f.at("penalized").get<bool>());
    }
    m.l2_penalty = j.at("l2_penalty").get<double>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.loss_history.push_back(j.at("final_loss").get<double>());
    return m;
}

} // namespace markhawkes::baseline

#include "markhawkes/serialize.hpp"

namespace markhawkes {

nlohmann::json to_json(const MarkModelParams& params) {
    const auto M = static_cast<std::size_t>(params.mark_count());
    const auto Z = static_cast<std::size_t>(params.covariate_count());
    nlohmann::json delta = nlohmann::json::array();
    nlohmann::json gamma = nlohmann::json::array();
    for (std::size_t z = 0; z < Z; ++z) {
        const auto row = params.delta_row(z);
        delta.push_back(std::vector<double>(row.begin(), row.end()));
        nlohmann::json block = nlohmann::json::array();
        for (std::size_t r = 0; r < M; ++r) {
            const auto g = params.gamma_row(z, r);
            block.push_back(std::vector<double>(g.begin(), g.end()));
        }
        gamma.push_back(block);
    }
    return nlohmann::json{{"alpha_star", params.alpha_star()},
                          {"beta", params.beta()},
                          {"mark_count", params.mark_count()},
                          {"covariate_count", params.covariate_count()},
                          {"delta", delta},
                          {"gamma", gamma}};
}

MarkModelParams mark_params_from_json(const nlohmann::json& j) {
    const int M = j.at("mark_count").get<int>();
    const int Z = j.at("covariate_count").get<int>();
    std::vector<double> delta;
    std::vector<double> gamma;
    for (const auto& row : j.at("delta")) {
        for (const auto& v : row) {
            delta.push_back(v.get<double>());
        }
    }
    for (const auto& block : j.at("gamma")) {
        for (const auto& row : block) {
            for (const auto& v : row) {
                gamma.push_back(v.get<double>());
            }
        }
    }
    MarkModelParams params(j.at("alpha_star").get<double>(), j.at("beta").get<double>(), M, Z, std::move(delta),
                           std::move(gamma));
    params.validate();
    return params;
}

nlohmann::json to_json(const UnmarkedHawkesParams& params) {
    return nlohmann::json{{"mu", params.mu}, {"alpha", params.alpha}, {"beta", params.beta}};
}

UnmarkedHawkesParams hawkes_params_from_json(const nlohmann::json& j) {
    UnmarkedHawkesParams p{j.at("mu").get<double>(), j.at("alpha").get<double>(), j.at("beta").get<double>()};
    p.validate();
    return p;
}

nlohmann::json to_json(const ParameterInterval& ci) {
    return nlohmann::json{{"name", ci.name},
                          {"estimate", ci.estimate},
                          {"lower", ci.lower},
                          {"upper", ci.upper},
                          {"boundary", ci.boundary}};
}

nlohmann::json to_json(const Matrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row[static_cast<std::size_t>(k)] = m(i, k);
        }
        out.push_back(row);
    }
    return out;
}

namespace {

template <class Params>
nlohmann::json fit_common(const FitResult<Params>& fit) {
    nlohmann::json cis = nlohmann::json::array();
    for (const auto& ci : fit.ci95) {
        cis.push_back(to_json(ci));
    }
    return nlohmann::json{{"params", to_json(fit.params)},
                          {"ci95", cis},
                          {"log_likelihood", fit.log_likelihood},
                          {"converged", fit.converged},
                          {"hessian_singular", fit.hessian_singular},
                          {"iterations", fit.iterations},
                          {"restarts", fit.restarts},
                          {"seed", fit.seed},
                          {"free_parameters", std::vector<double>(fit.free_parameters.data(),
                                                                  fit.free_parameters.data() +
                                                                      fit.free_parameters.size())},
                          {"covariance", to_json(fit.covariance)}};
}

} // namespace

nlohmann::json to_json(const MarkFitResult& fit) {
    auto j = fit_common(fit);
    j["free_parameter_names"] =
        MarkParamTransform(fit.params.mark_count(), fit.params.covariate_count()).coordinate_names();
    return j;
}

nlohmann::json to_json(const HawkesFitResult& fit) {
    auto j = fit_common(fit);
    j["free_parameter_names"] = {"log_mu", "logit_alpha", "log_beta"};
    return j;
}

nlohmann::json to_json(const PoissonFit& fit) {
    return nlohmann::json{{"rate", fit.rate},
                          {"lower", fit.lower},
                          {"upper", fit.upper},
                          {"count", fit.count},
                          {"horizon", fit.horizon}};
}

} // namespace markhawkes

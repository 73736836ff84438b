#pragma once

#include <nlohmann/json.hpp>

#include "markhawkes/estimation.hpp"
#include "markhawkes/simulation.hpp"

namespace markhawkes {

/// delta as Z rows of M entries, gamma as Z x M x M nested arrays.
[[nodiscard]] nlohmann::json to_json(const MarkModelParams& params);
[[nodiscard]] MarkModelParams mark_params_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const UnmarkedHawkesParams& params);
[[nodiscard]] UnmarkedHawkesParams hawkes_params_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const ParameterInterval& ci);
[[nodiscard]] nlohmann::json to_json(const Matrix& m);

/// Natural parameters, intervals, flags, log-likelihood, iterations and seed.
[[nodiscard]] nlohmann::json to_json(const MarkFitResult& fit);
[[nodiscard]] nlohmann::json to_json(const HawkesFitResult& fit);
[[nodiscard]] nlohmann::json to_json(const PoissonFit& fit);

} // namespace markhawkes

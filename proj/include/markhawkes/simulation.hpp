#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "markhawkes/estimation.hpp"
#include "markhawkes/event.hpp"

namespace markhawkes {

/// Simulators refuse to produce more events than this.
inline constexpr std::size_t kMaxSimulatedEvents = 10'000'000;

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Homogeneous Poisson arrivals on [0, horizon).
[[nodiscard]] std::vector<double> simulate_poisson(double rate, double horizon, std::uint64_t seed);

/// Exponential-kernel Hawkes arrivals on [0, horizon) by Ogata thinning.
[[nodiscard]] std::vector<double> simulate_hawkes_unmarked(const UnmarkedHawkesParams& params,
                                                           double horizon,
                                                           std::uint64_t seed);

/// Generator for a marked Hawkes process with covariates. Each event's
/// covariate is drawn iid from `covariate_probs`; its mark then follows the
/// conditional mark distribution with alpha_star = alpha * beta / mu.
struct MarkedSimConfig {
    double horizon{1000.0};
    std::uint64_t seed{1};
    std::vector<double> covariate_probs{1.0};
    UnmarkedHawkesParams ground{};
    int mark_count{2};
    std::vector<double> delta;  ///< Z x M, row-major
    std::vector<double> gamma;  ///< Z x M x M, [z][source][target]

    [[nodiscard]] int covariate_count() const { return static_cast<int>(covariate_probs.size()); }

    /// Mark-classifier parameters implied by this generator.
    [[nodiscard]] MarkModelParams mark_params() const;

    void validate() const;
};

[[nodiscard]] EventSequence simulate_marked_hawkes(const MarkedSimConfig& config);

struct CdfPoint {
    double x{0.0};
    double value{0.0};
};

/// Right-continuous empirical CDF at each distinct value, ascending.
[[nodiscard]] std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

/// Empirical CDF of a sorted sample evaluated at x.
[[nodiscard]] double sorted_sample_cdf(std::span<const double> sorted, double x);

[[nodiscard]] std::vector<double> inter_arrival_times(std::span<const double> times);

struct CdfComparisonRow {
    double x{0.0};
    double empirical{0.0};
    double poisson{0.0};
    double hawkes{0.0};
};

struct CdfComparison {
    std::vector<CdfComparisonRow> rows;
    double sup_distance_poisson{0.0};
    double sup_distance_hawkes{0.0};
    std::size_t simulated_runs{0};
    std::size_t simulated_gaps{0};
};

/// Compares the empirical inter-arrival CDF of `observed_times` with the
/// closed-form exponential CDF of the fitted Poisson rate and a Monte-Carlo
/// CDF pooled from `simulated_runs` independent simulations of the fitted
/// Hawkes process, each over `horizon`.
[[nodiscard]] CdfComparison cdf_comparison(std::span<const double> observed_times,
                                           double horizon,
                                           const PoissonFit& poisson,
                                           const UnmarkedHawkesParams& hawkes,
                                           std::size_t simulated_runs,
                                           std::uint64_t seed);

} // namespace markhawkes

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "markhawkes/event.hpp"
#include "markhawkes/optimizer.hpp"

namespace markhawkes {

/// Simplex entries closer than this to 0 or 1 are reported as boundary
/// estimates with a degenerate interval.
inline constexpr double kBoundaryThreshold = 1e-8;
inline constexpr double kZ95 = 1.959963984540054;

struct ParameterInterval {
    std::string name;
    double estimate{0.0};
    double lower{0.0};
    double upper{0.0};
    bool boundary{false};
};

template <class Params>
struct FitResult {
    Params params;
    double log_likelihood{0.0};
    Vector free_parameters;
    Matrix covariance; ///< over free (unconstrained) parameters
    std::vector<ParameterInterval> ci95;
    bool converged{false};
    bool hessian_singular{false};
    std::size_t iterations{0};
    std::uint64_t seed{0};
    std::size_t restarts{1};
};

using MarkFitResult = FitResult<MarkModelParams>;
using HawkesFitResult = FitResult<UnmarkedHawkesParams>;

/// Maps MarkModelParams to an unconstrained vector: every delta and gamma
/// row through a multinomial logit with the last mark as reference, then
/// log(alpha_star) and log(beta). For M = 2, Z = 5 this gives 17 coordinates.
class MarkParamTransform {
public:
    MarkParamTransform(int mark_count, int covariate_count);

    [[nodiscard]] int mark_count() const { return mark_count_; }
    [[nodiscard]] int covariate_count() const { return covariate_count_; }
    [[nodiscard]] std::size_t size() const;

    [[nodiscard]] std::size_t delta_offset(std::size_t z) const;
    [[nodiscard]] std::size_t gamma_offset(std::size_t z, std::size_t r) const;
    [[nodiscard]] std::size_t alpha_star_index() const;
    [[nodiscard]] std::size_t beta_index() const;

    [[nodiscard]] Vector to_unconstrained(const MarkModelParams& params) const;
    [[nodiscard]] MarkModelParams to_natural(const Vector& x) const;

    [[nodiscard]] std::vector<std::string> coordinate_names() const;

private:
    int mark_count_;
    int covariate_count_;
};

/// Sum over events of log f(m_i | t_i, z_i, history). Returns -inf when an
/// observed mark has probability zero.
[[nodiscard]] double mark_log_likelihood(const EventSequence& sequence, const MarkModelParams& params);

/// Log-likelihood at unconstrained point `x` with its analytic gradient
/// (filled when `gradient` is non-null).
[[nodiscard]] double mark_log_likelihood_unconstrained(const EventSequence& sequence,
                                                       const MarkParamTransform& transform,
                                                       const Vector& x,
                                                       Vector* gradient);

struct MarkFitConfig {
    OptimizerConfig optimizer{};
    std::size_t restarts{3};
    double jitter{0.5};
    std::uint64_t seed{20220101};
    double initial_alpha_star{1.0};
    double initial_beta{0.1};
    double hessian_step{1e-4};
};

/// Maximum-likelihood fit of the mark classifier with 95% intervals.
/// Requires at least two events of every mark.
[[nodiscard]] MarkFitResult fit_mark_model(const EventSequence& train, const MarkFitConfig& config = {});

/// Wald intervals on the logit / log scale mapped back to natural scale.
/// Simplex rows with an entry within kBoundaryThreshold of 0 or 1 get
/// degenerate intervals and `boundary = true`.
[[nodiscard]] std::vector<ParameterInterval> mark_confidence_intervals(const MarkModelParams& params,
                                                                      const Matrix& covariance,
                                                                      const MarkParamTransform& transform);

/// Free coordinates belonging to simplex rows that sit on the boundary.
[[nodiscard]] std::vector<bool> boundary_coordinates(const MarkModelParams& params,
                                                     const MarkParamTransform& transform);

/// Covariance from a Hessian over free coordinates, with the masked
/// coordinates removed before inversion (their rows/columns are zero).
[[nodiscard]] CovarianceEstimate masked_covariance(const Matrix& hessian, const std::vector<bool>& masked);

struct PoissonFit {
    double rate{0.0};
    double lower{0.0};
    double upper{0.0};
    std::size_t count{0};
    double horizon{0.0};
};

/// rate = n / T with Wald interval rate +- 1.96 sqrt(n) / T (lower clipped at 0).
[[nodiscard]] PoissonFit fit_poisson(std::size_t count, double horizon);

/// Exact exponential-kernel Hawkes log-likelihood on [0, T]:
///   sum_i log(mu + alpha beta A_i) - mu T - alpha sum_i (1 - exp(-beta (T - t_i))).
[[nodiscard]] double hawkes_log_likelihood(std::span<const double> times,
                                           double horizon,
                                           const UnmarkedHawkesParams& params);

/// Hawkes log-likelihood at (log mu, logit alpha, log beta) with gradient.
[[nodiscard]] double hawkes_log_likelihood_unconstrained(std::span<const double> times,
                                                         double horizon,
                                                         const Vector& x,
                                                         Vector* gradient);

[[nodiscard]] Vector hawkes_to_unconstrained(const UnmarkedHawkesParams& params);
[[nodiscard]] UnmarkedHawkesParams hawkes_to_natural(const Vector& x);

struct HawkesFitConfig {
    OptimizerConfig optimizer{};
    std::size_t restarts{3};
    double jitter{0.5};
    std::uint64_t seed{20220101};
    double hessian_step{1e-4};
};

/// Requires at least 10 events.
[[nodiscard]] HawkesFitResult fit_unmarked_hawkes(std::span<const double> times,
                                                  double horizon,
                                                  const HawkesFitConfig& config = {});

} // namespace markhawkes

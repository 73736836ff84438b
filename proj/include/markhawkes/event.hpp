#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace markhawkes {

/// Minutes per day; the internal time unit is minutes.
inline constexpr double kMinutesPerDay = 1440.0;

/// Default spacing inserted between tied timestamps (minutes).
inline constexpr double kDefaultTieEpsilon = 1e-6;

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A single event. `mark` and `covariate` are 1-based codes.
struct Event {
    double time{0.0};
    int mark{1};
    int covariate{1};

    [[nodiscard]] std::size_t mark_index() const { return static_cast<std::size_t>(mark - 1); }
    [[nodiscard]] std::size_t covariate_index() const { return static_cast<std::size_t>(covariate - 1); }

    bool operator==(const Event&) const = default;
};

/// Realisation of a marked point process with discrete marks and covariates
/// observed on [0, horizon]. Times are strictly increasing.
class EventSequence {
public:
    EventSequence() = default;

    /// Throws ValidationError if any invariant is violated.
    EventSequence(std::vector<Event> events, double horizon, int mark_count, int covariate_count);

    /// Builds a sequence from raw, possibly tied, sorted times. Ties are
    /// separated with normalize_times.
    static EventSequence from_raw(std::span<const double> times,
                                  std::span<const int> marks,
                                  std::span<const int> covariates,
                                  double horizon,
                                  int mark_count,
                                  int covariate_count,
                                  double tie_epsilon = kDefaultTieEpsilon);

    [[nodiscard]] const std::vector<Event>& events() const { return events_; }
    [[nodiscard]] std::size_t size() const { return events_.size(); }
    [[nodiscard]] bool empty() const { return events_.empty(); }
    [[nodiscard]] const Event& operator[](std::size_t i) const { return events_[i]; }
    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] int mark_count() const { return mark_count_; }
    [[nodiscard]] int covariate_count() const { return covariate_count_; }

    [[nodiscard]] std::vector<double> times() const;
    [[nodiscard]] std::vector<int> marks() const;

    auto begin() const { return events_.begin(); }
    auto end() const { return events_.end(); }

private:
    std::vector<Event> events_;
    double horizon_{0.0};
    int mark_count_{2};
    int covariate_count_{1};
};

/// Separates tied timestamps. An input equal to (or below) the previous output
/// is moved to previous + tie_epsilon; everything else passes through.
/// Throws ValidationError naming the first index where the input decreases.
[[nodiscard]] std::vector<double> normalize_times(std::span<const double> raw_times,
                                                  double tie_epsilon = kDefaultTieEpsilon);

/// Parameters of the mark-probability classifier with covariates.
///
/// `delta(z, m)` is the background probability of mark m for covariate z and
/// `gamma(z, r, c)` the probability that excitation from a mark-r event
/// produces a mark-c event under covariate z. All indices here are 0-based.
class MarkModelParams {
public:
    MarkModelParams() = default;

    /// Uniform delta and gamma rows; alpha_star = 1, beta = 1.
    MarkModelParams(int mark_count, int covariate_count);

    MarkModelParams(double alpha_star,
                    double beta,
                    int mark_count,
                    int covariate_count,
                    std::vector<double> delta,
                    std::vector<double> gamma);

    [[nodiscard]] int mark_count() const { return mark_count_; }
    [[nodiscard]] int covariate_count() const { return covariate_count_; }

    [[nodiscard]] double alpha_star() const { return alpha_star_; }
    [[nodiscard]] double beta() const { return beta_; }
    void set_alpha_star(double v) { alpha_star_ = v; }
    void set_beta(double v) { beta_ = v; }

    [[nodiscard]] double delta(std::size_t z, std::size_t m) const { return delta_[z * M() + m]; }
    [[nodiscard]] double& delta(std::size_t z, std::size_t m) { return delta_[z * M() + m]; }
    [[nodiscard]] double gamma(std::size_t z, std::size_t r, std::size_t c) const {
        return gamma_[(z * M() + r) * M() + c];
    }
    [[nodiscard]] double& gamma(std::size_t z, std::size_t r, std::size_t c) {
        return gamma_[(z * M() + r) * M() + c];
    }

    [[nodiscard]] std::span<const double> delta_row(std::size_t z) const {
        return {delta_.data() + z * M(), M()};
    }
    [[nodiscard]] std::span<const double> gamma_row(std::size_t z, std::size_t r) const {
        return {gamma_.data() + (z * M() + r) * M(), M()};
    }

    [[nodiscard]] const std::vector<double>& delta_values() const { return delta_; }
    [[nodiscard]] const std::vector<double>& gamma_values() const { return gamma_; }

    /// Throws ValidationError when a simplex row is off by more than
    /// `tolerance` or a scalar parameter is out of range.
    void validate(double tolerance = 1e-9) const;

private:
    [[nodiscard]] std::size_t M() const { return static_cast<std::size_t>(mark_count_); }

    double alpha_star_{1.0};
    double beta_{1.0};
    int mark_count_{2};
    int covariate_count_{1};
    std::vector<double> delta_;
    std::vector<double> gamma_;
};

/// Ground-process Hawkes parameters: background rate, branching ratio and
/// decay rate of the kernel alpha * beta * exp(-beta * t).
struct UnmarkedHawkesParams {
    double mu{1.0};
    double alpha{0.0};
    double beta{1.0};

    void validate() const;
};

} // namespace markhawkes

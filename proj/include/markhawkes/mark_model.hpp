#pragma once

#include <limits>
#include <span>
#include <vector>

#include "markhawkes/event.hpp"

namespace markhawkes {

/// Per-source-mark exponentially decayed event counts:
///   R_r(t) = sum_{t_j < t, m_j = r} exp(-beta (t - t_j)),
/// stored as of `last_time`. Lets the mark classifier run in O(n M^2).
struct ExcitationState {
    std::vector<double> decayed_sums;
    double last_time{-std::numeric_limits<double>::infinity()};

    ExcitationState() = default;
    explicit ExcitationState(int mark_count) : decayed_sums(static_cast<std::size_t>(mark_count), 0.0) {}

    [[nodiscard]] bool fresh() const { return last_time == -std::numeric_limits<double>::infinity(); }

    /// Decayed sums evaluated at a later time `t` (no new event added).
    [[nodiscard]] std::vector<double> decayed_to(double t, double beta) const;
};

/// Decays every R_r to time t and then increments R_{mark}. `mark` is 1-based.
/// Throws ValidationError when t <= state.last_time.
[[nodiscard]] ExcitationState stream_update(const ExcitationState& state, double t, int mark, double beta);

/// In-place form of stream_update.
void advance(ExcitationState& state, double t, int mark, double beta);

/// Conditional mark distribution f(m | t, z, history); probs[m - 1] for mark m.
struct MarkDistribution {
    std::vector<double> probs;

    [[nodiscard]] double of(int mark) const { return probs[static_cast<std::size_t>(mark - 1)]; }
};

/// Direct double-loop evaluation over the history `prefix` (all events
/// strictly before t). `covariate` is 1-based.
[[nodiscard]] MarkDistribution mark_probability_bruteforce(std::span<const Event> prefix,
                                                           double t,
                                                           int covariate,
                                                           const MarkModelParams& params);

/// Same distribution from the streaming state.
[[nodiscard]] MarkDistribution mark_probability_stream(const ExcitationState& state,
                                                       double t,
                                                       int covariate,
                                                       const MarkModelParams& params);

/// Mark probabilities given already-decayed sums R_r(t).
[[nodiscard]] MarkDistribution mark_probability_from_sums(std::span<const double> decayed_sums,
                                                          int covariate,
                                                          const MarkModelParams& params);

/// How past marks enter test-time scoring. Only observed (true) past marks
/// are supported.
enum class HistoryMode { GroundTruthFeedback };

struct EventScore {
    std::size_t index{0};
    double time{0.0};
    int covariate{1};
    int mark{1};
    double probability{0.0}; ///< probability of the positive mark
};

/// Scores every event using the true marks of all earlier events.
[[nodiscard]] std::vector<EventScore> score_sequence(const EventSequence& sequence,
                                                     const MarkModelParams& params,
                                                     HistoryMode mode = HistoryMode::GroundTruthFeedback,
                                                     int positive_mark = 2);

} // namespace markhawkes

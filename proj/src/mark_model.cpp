#include "markhawkes/mark_model.hpp"

#include <cmath>

#include <fmt/format.h>

namespace markhawkes {

namespace {

void check_params_match(int covariate, const MarkModelParams& params) {
    if (covariate < 1 || covariate > params.covariate_count()) {
        throw ValidationError(fmt::format("covariate {} outside 1..{}", covariate, params.covariate_count()));
    }
}

MarkDistribution normalized(std::vector<double> numerators) {
    double total = 0.0;
    for (double v : numerators) {
        total += v;
    }
    for (double& v : numerators) {
        v /= total;
    }
    return MarkDistribution{std::move(numerators)};
}

} // namespace

std::vector<double> ExcitationState::decayed_to(double t, double beta) const {
    if (fresh()) {
        return decayed_sums;
    }
    if (!(t > last_time)) {
        throw ValidationError(fmt::format("time {} does not exceed state time {}", t, last_time));
    }
    const double factor = std::exp(-beta * (t - last_time));
    std::vector<double> out(decayed_sums);
    for (double& r : out) {
        r *= factor;
    }
    return out;
}

void advance(ExcitationState& state, double t, int mark, double beta) {
    if (mark < 1 || static_cast<std::size_t>(mark) > state.decayed_sums.size()) {
        throw ValidationError(fmt::format("mark {} outside 1..{}", mark, state.decayed_sums.size()));
    }
    if (!state.fresh()) {
        if (!(t > state.last_time)) {
            throw ValidationError(fmt::format("time {} does not exceed state time {}", t, state.last_time));
        }
        const double factor = std::exp(-beta * (t - state.last_time));
        for (double& r : state.decayed_sums) {
            r *= factor;
        }
    }
    state.decayed_sums[static_cast<std::size_t>(mark - 1)] += 1.0;
    state.last_time = t;
}

ExcitationState stream_update(const ExcitationState& state, double t, int mark, double beta) {
    ExcitationState next = state;
    advance(next, t, mark, beta);
    return next;
}

MarkDistribution mark_probability_bruteforce(std::span<const Event> prefix,
                                             double t,
                                             int covariate,
                                             const MarkModelParams& params) {
    check_params_match(covariate, params);
    const auto z = static_cast<std::size_t>(covariate - 1);
    const auto marks = static_cast<std::size_t>(params.mark_count());
    if (!prefix.empty() && !(t > prefix.back().time)) {
        throw ValidationError(fmt::format("time {} does not exceed last history time {}", t, prefix.back().time));
    }
    std::vector<double> numerators(marks);
    for (std::size_t m = 0; m < marks; ++m) {
        double excitation = 0.0;
        for (const Event& e : prefix) {
            excitation += params.alpha_star() * std::exp(-params.beta() * (t - e.time)) *
                          params.gamma(z, e.mark_index(), m);
        }
        numerators[m] = params.delta(z, m) + excitation;
    }
    return normalized(std::move(numerators));
}

MarkDistribution mark_probability_from_sums(std::span<const double> decayed_sums,
                                            int covariate,
                                            const MarkModelParams& params) {
    check_params_match(covariate, params);
    const auto z = static_cast<std::size_t>(covariate - 1);
    const auto marks = static_cast<std::size_t>(params.mark_count());
    std::vector<double> numerators(marks);
    for (std::size_t m = 0; m < marks; ++m) {
        double excitation = 0.0;
        for (std::size_t r = 0; r < marks; ++r) {
            excitation += decayed_sums[r] * params.gamma(z, r, m);
        }
        numerators[m] = params.delta(z, m) + params.alpha_star() * excitation;
    }
    return normalized(std::move(numerators));
}

MarkDistribution mark_probability_stream(const ExcitationState& state,
                                         double t,
                                         int covariate,
                                         const MarkModelParams& params) {
    const auto sums = state.decayed_to(t, params.beta());
    return mark_probability_from_sums(sums, covariate, params);
}

std::vector<EventScore> score_sequence(const EventSequence& sequence,
                                       const MarkModelParams& params,
                                       HistoryMode mode,
                                       int positive_mark) {
    if (mode != HistoryMode::GroundTruthFeedback) {
        throw ValidationError("unsupported history mode");
    }
    if (sequence.mark_count() != params.mark_count()) {
        throw ValidationError(fmt::format("sequence has {} marks, model has {}", sequence.mark_count(),
                                          params.mark_count()));
    }
    if (positive_mark < 1 || positive_mark > params.mark_count()) {
        throw ValidationError(fmt::format("positive mark {} outside 1..{}", positive_mark, params.mark_count()));
    }
    std::vector<EventScore> scores;
    scores.reserve(sequence.size());
    ExcitationState state(params.mark_count());
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const Event& e = sequence[i];
        const auto dist = mark_probability_stream(state, e.time, e.covariate, params);
        scores.push_back(EventScore{i, e.time, e.covariate, e.mark, dist.of(positive_mark)});
        advance(state, e.time, e.mark, params.beta());
    }
    return scores;
}

} // namespace markhawkes

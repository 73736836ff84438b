#include "markhawkes/event.hpp"

#include <cmath>

#include <fmt/format.h>

namespace markhawkes {

namespace {

void check_simplex(std::span<const double> row, double tolerance, const std::string& what) {
    double sum = 0.0;
    for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(fmt::format("{} has entry {} outside [0, 1]", what, p));
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        throw ValidationError(fmt::format("{} sums to {:.17g}, not 1", what, sum));
    }
}

} // namespace

EventSequence::EventSequence(std::vector<Event> events, double horizon, int mark_count, int covariate_count)
    : events_(std::move(events)), horizon_(horizon), mark_count_(mark_count), covariate_count_(covariate_count) {
    if (mark_count_ < 2) {
        throw ValidationError(fmt::format("mark_count must be >= 2, got {}", mark_count_));
    }
    if (covariate_count_ < 1) {
        throw ValidationError(fmt::format("covariate_count must be >= 1, got {}", covariate_count_));
    }
    double previous = -1.0;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const Event& e = events_[i];
        if (!std::isfinite(e.time) || e.time < 0.0) {
            throw ValidationError(fmt::format("event {} has invalid time {}", i, e.time));
        }
        if (i > 0 && !(e.time > previous)) {
            throw ValidationError(fmt::format("event {} time {} does not exceed previous {}", i, e.time, previous));
        }
        if (e.mark < 1 || e.mark > mark_count_) {
            throw ValidationError(fmt::format("event {} mark {} outside 1..{}", i, e.mark, mark_count_));
        }
        if (e.covariate < 1 || e.covariate > covariate_count_) {
            throw ValidationError(
                fmt::format("event {} covariate {} outside 1..{}", i, e.covariate, covariate_count_));
        }
        previous = e.time;
    }
    if (!events_.empty() && horizon_ < events_.back().time) {
        throw ValidationError(fmt::format("horizon {} precedes last event {}", horizon_, events_.back().time));
    }
    if (!std::isfinite(horizon_) || horizon_ < 0.0) {
        throw ValidationError(fmt::format("invalid horizon {}", horizon_));
    }
}

EventSequence EventSequence::from_raw(std::span<const double> times,
                                      std::span<const int> marks,
                                      std::span<const int> covariates,
                                      double horizon,
                                      int mark_count,
                                      int covariate_count,
                                      double tie_epsilon) {
    if (times.size() != marks.size() || times.size() != covariates.size()) {
        throw ValidationError("times, marks and covariates differ in length");
    }
    const auto normalized = normalize_times(times, tie_epsilon);
    std::vector<Event> events(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        events[i] = Event{normalized[i], marks[i], covariates[i]};
    }
    if (!normalized.empty()) {
        horizon = std::max(horizon, normalized.back());
    }
    return EventSequence(std::move(events), horizon, mark_count, covariate_count);
}

std::vector<double> EventSequence::times() const {
    std::vector<double> out;
    out.reserve(events_.size());
    for (const auto& e : events_) {
        out.push_back(e.time);
    }
    return out;
}

std::vector<int> EventSequence::marks() const {
    std::vector<int> out;
    out.reserve(events_.size());
    for (const auto& e : events_) {
        out.push_back(e.mark);
    }
    return out;
}

std::vector<double> normalize_times(std::span<const double> raw_times, double tie_epsilon) {
    if (!(tie_epsilon > 0.0)) {
        throw ValidationError(fmt::format("tie_epsilon must be positive, got {}", tie_epsilon));
    }
    std::vector<double> out(raw_times.size());
    for (std::size_t i = 0; i < raw_times.size(); ++i) {
        const double t = raw_times[i];
        if (!std::isfinite(t) || t < 0.0) {
            throw ValidationError(fmt::format("time {} at index {} is not a finite non-negative value", t, i));
        }
        if (i == 0) {
            out[i] = t;
            continue;
        }
        if (t < raw_times[i - 1]) {
            throw ValidationError(fmt::format("times not sorted: index {} ({}) < index {} ({})", i, t, i - 1,
                                              raw_times[i - 1]));
        }
        out[i] = t > out[i - 1] ? t : out[i - 1] + tie_epsilon;
    }
    return out;
}

MarkModelParams::MarkModelParams(int mark_count, int covariate_count)
    : mark_count_(mark_count), covariate_count_(covariate_count) {
    const auto m = static_cast<std::size_t>(mark_count);
    const auto z = static_cast<std::size_t>(covariate_count);
    delta_.assign(z * m, 1.0 / static_cast<double>(m));
    gamma_.assign(z * m * m, 1.0 / static_cast<double>(m));
}

MarkModelParams::MarkModelParams(double alpha_star,
                                 double beta,
                                 int mark_count,
                                 int covariate_count,
                                 std::vector<double> delta,
                                 std::vector<double> gamma)
    : alpha_star_(alpha_star),
      beta_(beta),
      mark_count_(mark_count),
      covariate_count_(covariate_count),
      delta_(std::move(delta)),
      gamma_(std::move(gamma)) {
    validate();
}

void MarkModelParams::validate(double tolerance) const {
    if (mark_count_ < 2 || covariate_count_ < 1) {
        throw ValidationError(fmt::format("invalid dimensions M={}, Z={}", mark_count_, covariate_count_));
    }
    const auto m = M();
    const auto z = static_cast<std::size_t>(covariate_count_);
    if (delta_.size() != z * m) {
        throw ValidationError(fmt::format("delta has {} entries, expected {}", delta_.size(), z * m));
    }
    if (gamma_.size() != z * m * m) {
        throw ValidationError(fmt::format("gamma has {} entries, expected {}", gamma_.size(), z * m * m));
    }
    if (!(alpha_star_ >= 0.0) || !std::isfinite(alpha_star_)) {
        throw ValidationError(fmt::format("alpha_star must be finite and >= 0, got {}", alpha_star_));
    }
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
        throw ValidationError(fmt::format("beta must be finite and > 0, got {}", beta_));
    }
    for (std::size_t zi = 0; zi < z; ++zi) {
        check_simplex(delta_row(zi), tolerance, fmt::format("delta row z={}", zi + 1));
        for (std::size_t r = 0; r < m; ++r) {
            check_simplex(gamma_row(zi, r), tolerance, fmt::format("gamma row z={} r={}", zi + 1, r + 1));
        }
    }
}

void UnmarkedHawkesParams::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ValidationError(fmt::format("mu must be > 0, got {}", mu));
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ValidationError(fmt::format("alpha must lie in [0, 1), got {}", alpha));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ValidationError(fmt::format("beta must be > 0, got {}", beta));
    }
}

} // namespace markhawkes

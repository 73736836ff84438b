#include "markhawkes/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "markhawkes/mark_model.hpp"
#include "markhawkes/random.hpp"

namespace markhawkes {

namespace {

void check_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError(fmt::format("horizon must be positive and finite, got {}", horizon));
    }
}

void guard_count(std::size_t n) {
    if (n > kMaxSimulatedEvents) {
        throw SimulationError(fmt::format("simulation exceeded {} events", kMaxSimulatedEvents));
    }
}

std::size_t draw_categorical(std::span<const double> probs, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) {
            return k;
        }
    }
    // Rounding left u above the final cumulative sum; take the last non-zero category.
    for (std::size_t k = probs.size(); k-- > 0;) {
        if (probs[k] > 0.0) {
            return k;
        }
    }
    return probs.size() - 1;
}

// Thinning loop shared by the marked and unmarked simulators. `decay(dt)`
// must age `excitation` (and any per-mark state) by dt; `accept(t)` records
// an accepted event and adds its unit of excitation.
template <class Decay, class Accept>
void thin(const UnmarkedHawkesParams& p, double horizon, Rng& rng, double& excitation, Decay decay, Accept accept) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double t = 0.0;
    double last_accepted = -1.0;
    std::size_t accepted = 0;
    while (true) {
        const double bound = p.mu + p.alpha * p.beta * excitation;
        std::exponential_distribution<double> wait(bound);
        const double w = wait(rng);
        const double candidate = t + w;
        if (!(candidate < horizon)) {
            break;
        }
        decay(candidate - t);
        t = candidate;
        const double intensity = p.mu + p.alpha * p.beta * excitation;
        if (unif(rng) * bound <= intensity) {
            double at = t;
            if (!(at > last_accepted)) {
                at = std::nextafter(last_accepted, std::numeric_limits<double>::infinity());
                t = at;
            }
            accept(at);
            last_accepted = at;
            guard_count(++accepted);
        }
    }
}

} // namespace

std::vector<double> simulate_poisson(double rate, double horizon, std::uint64_t seed) {
    check_horizon(horizon);
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw ValidationError(fmt::format("rate must be finite and non-negative, got {}", rate));
    }
    std::vector<double> times;
    if (rate == 0.0) {
        return times;
    }
    Rng rng(seed);
    std::exponential_distribution<double> wait(rate);
    double t = 0.0;
    while (true) {
        t += wait(rng);
        if (!(t < horizon)) {
            break;
        }
        times.push_back(t);
        guard_count(times.size());
    }
    return times;
}

std::vector<double> simulate_hawkes_unmarked(const UnmarkedHawkesParams& params, double horizon, std::uint64_t seed) {
    params.validate();
    check_horizon(horizon);
    Rng rng(seed);
    std::vector<double> times;
    double excitation = 0.0;
    thin(
        params, horizon, rng, excitation, [&](double dt) { excitation *= std::exp(-params.beta * dt); },
        [&](double t) {
            times.push_back(t);
            excitation += 1.0;
        });
    return times;
}

MarkModelParams MarkedSimConfig::mark_params() const {
    return MarkModelParams(ground.alpha * ground.beta / ground.mu, ground.beta, mark_count, covariate_count(), delta,
                           gamma);
}

void MarkedSimConfig::validate() const {
    check_horizon(horizon);
    ground.validate();
    if (covariate_probs.empty()) {
        throw ValidationError("covariate distribution is empty");
    }
    double total = 0.0;
    for (double p : covariate_probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(fmt::format("covariate probability {} outside [0, 1]", p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ValidationError(fmt::format("covariate probabilities sum to {}", total));
    }
    (void)mark_params();
}

EventSequence simulate_marked_hawkes(const MarkedSimConfig& config) {
    config.validate();
    const MarkModelParams params = config.mark_params();
    const UnmarkedHawkesParams& ground = config.ground;
    Rng rng(config.seed);

    // Per-source-mark decayed sums; their total drives the ground intensity.
    std::vector<double> sums(static_cast<std::size_t>(config.mark_count), 0.0);
    double excitation = 0.0;
    std::vector<Event> events;
    thin(
        ground, config.horizon, rng, excitation,
        [&](double dt) {
            const double factor = std::exp(-ground.beta * dt);
            excitation *= factor;
            for (double& r : sums) {
                r *= factor;
            }
        },
        [&](double t) {
            const auto z = static_cast<int>(draw_categorical(config.covariate_probs, rng)) + 1;
            const auto dist = mark_probability_from_sums(sums, z, params);
            const auto m = static_cast<int>(draw_categorical(dist.probs, rng)) + 1;
            events.push_back(Event{t, m, z});
            sums[static_cast<std::size_t>(m - 1)] += 1.0;
            excitation += 1.0;
        });
    return EventSequence(std::move(events), config.horizon, config.mark_count, config.covariate_count());
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values) {
    if (values.empty()) {
        throw ValidationError("empirical CDF of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
            continue;
        }
        out.push_back(CdfPoint{sorted[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

double sorted_sample_cdf(std::span<const double> sorted, double x) {
    if (sorted.empty()) {
        return 0.0;
    }
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

std::vector<double> inter_arrival_times(std::span<const double> times) {
    std::vector<double> gaps;
    if (times.size() < 2) {
        return gaps;
    }
    gaps.reserve(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
        gaps.push_back(times[i] - times[i - 1]);
    }
    return gaps;
}

CdfComparison cdf_comparison(std::span<const double> observed_times,
                             double horizon,
                             const PoissonFit& poisson,
                             const UnmarkedHawkesParams& hawkes,
                             std::size_t simulated_runs,
                             std::uint64_t seed) {
    const auto gaps = inter_arrival_times(observed_times);
    if (gaps.empty()) {
        throw ValidationError("need at least two observed events for an inter-arrival CDF");
    }
    if (simulated_runs == 0) {
        throw ValidationError("simulated_runs must be positive");
    }
    CdfComparison out;
    out.simulated_runs = simulated_runs;

    std::vector<double> simulated;
    for (std::size_t k = 0; k < simulated_runs; ++k) {
        const auto times = simulate_hawkes_unmarked(hawkes, horizon, derive_seed(seed, k));
        const auto g = inter_arrival_times(times);
        simulated.insert(simulated.end(), g.begin(), g.end());
        guard_count(simulated.size());
    }
    std::sort(simulated.begin(), simulated.end());
    out.simulated_gaps = simulated.size();

    const auto ecdf = empirical_cdf(gaps);
    double previous = 0.0;
    for (const CdfPoint& point : ecdf) {
        CdfComparisonRow row;
        row.x = point.x;
        row.empirical = point.value;
        row.poisson = 1.0 - std::exp(-poisson.rate * point.x);
        row.hawkes = sorted_sample_cdf(simulated, point.x);
        // Check both sides of the empirical jump.
        out.sup_distance_poisson = std::max(
            {out.sup_distance_poisson, std::abs(row.empirical - row.poisson), std::abs(previous - row.poisson)});
        out.sup_distance_hawkes = std::max(
            {out.sup_distance_hawkes, std::abs(row.empirical - row.hawkes), std::abs(previous - row.hawkes)});
        previous = point.value;
        out.rows.push_back(row);
    }
    return out;
}

} // namespace markhawkes

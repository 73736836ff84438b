#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "markhawkes/metrics.hpp"
#include "markhawkes/random.hpp"

using namespace markhawkes;
using namespace markhawkes::metrics;

namespace {

std::vector<ScoredEvent> scored(std::vector<double> s, std::vector<int> y) { return make_scored(s, y); }

// Pairwise oracle: P(score+ > score-) + 0.5 P(tie).
double pairwise_auc(const std::vector<ScoredEvent>& data) {
    double wins = 0.0;
    double pairs = 0.0;
    for (const auto& p : data) {
        if (p.label != 1) {
            continue;
        }
        for (const auto& n : data) {
            if (n.label != 0) {
                continue;
            }
            pairs += 1.0;
            wins += p.score > n.score ? 1.0 : (p.score == n.score ? 0.5 : 0.0);
        }
    }
    return wins / pairs;
}

std::vector<ScoredEvent> random_scored(std::size_t n, Rng& rng, int levels) {
    std::uniform_int_distribution<int> level(0, levels);
    std::bernoulli_distribution positive(0.3);
    std::vector<ScoredEvent> out;
    while (out.size() < n) {
        out.push_back({static_cast<double>(level(rng)) / levels, positive(rng) ? 1 : 0});
    }
    out[0].label = 1;
    out[1].label = 0;
    return out;
}

} // namespace

TEST_CASE("confusion counts") {
    const auto a = confusion(scored({0.9, 0.1}, {1, 0}), 0.5);
    CHECK(a.tp == 1);
    CHECK(a.tn == 1);
    CHECK(a.accuracy == 1.0);
    const auto all = confusion(scored({0.9, 0.1, 0.4}, {1, 0, 1}), 0.0);
    CHECK(all.recall == 1.0);
    CHECK(all.fp == 1);
    const auto none = confusion(scored({0.2, 0.1}, {1, 0}), 0.9);
    CHECK(none.precision_undefined);
    CHECK(none.precision == 1.0);
    CHECK_THROWS(static_cast<void>(confusion(std::vector<ScoredEvent>{}, 0.5)));

    Rng rng(1);
    const auto data = random_scored(300, rng, 20);
    for (double thr : {0.0, 0.25, 0.5, 0.95}) {
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (const auto& e : data) {
            const bool predicted = e.score >= thr;
            tp += predicted && e.label == 1;
            fp += predicted && e.label == 0;
            tn += !predicted && e.label == 0;
            fn += !predicted && e.label == 1;
        }
        const auto c = confusion(data, thr);
        CHECK(c.tp == tp);
        CHECK(c.fp == fp);
        CHECK(c.tn == tn);
        CHECK(c.fn == fn);
    }
}

TEST_CASE("F-beta") {
    CHECK(f_beta(0.5, 0.5, 1.0) == doctest::Approx(0.5));
    CHECK(f_beta(1.0, 0.5, 2.0) == doctest::Approx(0.5556).epsilon(1e-4));
    CHECK(f_beta(0.0, 0.0, 2.0) == 0.0);
    for (double b : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(f_beta(0.37, 0.37, b) == doctest::Approx(0.37));
    }
    CHECK(f_beta(0.2, 0.8, 1.0) == doctest::Approx(f_beta(0.8, 0.2, 1.0)));
    CHECK(f_beta(0.2, 0.8, 2.0) != doctest::Approx(f_beta(0.8, 0.2, 2.0)));
}

TEST_CASE("ROC AUC") {
    CHECK(roc_auc(scored({0.9, 0.8, 0.3, 0.1}, {1, 1, 0, 0})) == 1.0);
    CHECK(roc_auc(scored({0.5, 0.5}, {1, 0})) == 0.5);
    CHECK_THROWS(static_cast<void>(roc_auc(scored({0.5, 0.4}, {1, 1}))));

    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = random_scored(200, rng, trial % 2 == 0 ? 10 : 1000000);
        CHECK(roc_auc(data) == pairwise_auc(data));
    }
}

TEST_CASE("ROC AUC invariances") {
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto data = random_scored(150, rng, 1000000);
    for (auto& e : data) {
        e.score = u(rng);
    }
    const double auc = roc_auc(data);
    auto transformed = data;
    for (auto& e : transformed) {
        e.score = std::pow(e.score, 3.0);
    }
    CHECK(roc_auc(transformed) == doctest::Approx(auc).epsilon(1e-14));
    auto flipped = data;
    for (auto& e : flipped) {
        e.label = 1 - e.label;
    }
    CHECK(roc_auc(flipped) == doctest::Approx(1.0 - auc).epsilon(1e-14));
    auto shuffled = data;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(roc_auc(shuffled) == auc);
    CHECK(pr_auc(shuffled) == doctest::Approx(pr_auc(data)).epsilon(1e-14));
}

TEST_CASE("average precision hand cases") {
    CHECK(std::abs(pr_auc(scored({0.9, 0.8, 0.7}, {1, 0, 1})) - 5.0 / 6.0) < 1e-12);
    CHECK(pr_auc(scored({0.9, 0.8, 0.3, 0.1}, {1, 1, 0, 0})) == 1.0);
    const auto constant = scored({0.3, 0.3, 0.3, 0.3, 0.3}, {1, 0, 0, 1, 0});
    CHECK(pr_auc(constant) == 2.0 / 5.0);
    CHECK_THROWS(static_cast<void>(pr_auc(scored({0.3, 0.2}, {0, 0}))));
}

TEST_CASE("metric advisor") {
    CHECK(metric_advisor(true, CostProfile::Balanced) == "PR_AUC");
    CHECK(metric_advisor(true, CostProfile::FalseNegativesCostly) == "F(2)");
    CHECK(metric_advisor(true, CostProfile::FalsePositivesCostly) == "F(0.5)");
    CHECK(metric_advisor(false, CostProfile::Balanced) == "ROC_AUC");
    CHECK(metric_advisor(false, CostProfile::FalseNegativesCostly) == "ROC_AUC");
}

TEST_CASE("curve points") {
    const auto perfect = curve_points(scored({0.9, 0.1}, {1, 0}), CurveKind::Roc);
    bool through_corner = false;
    for (std::size_t i = 0; i < perfect.x.size(); ++i) {
        through_corner |= perfect.x[i] == 0.0 && perfect.y[i] == 1.0;
    }
    CHECK(through_corner);
    CHECK(perfect.x.front() == 0.0);
    CHECK(perfect.y.front() == 0.0);
    CHECK(perfect.x.back() == 1.0);
    CHECK(perfect.y.back() == 1.0);

    const auto single = curve_points(scored({0.4, 0.4, 0.4}, {1, 0, 1}), CurveKind::Pr);
    REQUIRE(single.x.size() == 1);
    CHECK(single.x[0] == 1.0);
    CHECK(single.y[0] == doctest::Approx(2.0 / 3.0));

    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = random_scored(250, rng, trial % 2 == 0 ? 15 : 1000000);
        const auto roc = curve_points(data, CurveKind::Roc);
        const auto pr = curve_points(data, CurveKind::Pr);
        CHECK(std::abs(curve_area(roc) - roc_auc(data)) < 1e-12);
        CHECK(std::abs(curve_area(pr) - pr_auc(data)) < 1e-12);
        for (std::size_t i = 1; i < roc.x.size(); ++i) {
            CHECK(roc.x[i] >= roc.x[i - 1]);
            CHECK(roc.y[i] >= roc.y[i - 1]);
        }
        for (std::size_t i = 1; i < pr.x.size(); ++i) {
            CHECK(pr.x[i] >= pr.x[i - 1]);
            CHECK(pr.thresholds[i] < pr.thresholds[i - 1]);
        }
    }
}

#include "markhawkes/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace markhawkes::metrics {

namespace {

void check_labels(std::span<const ScoredEvent> scored) {
    for (const auto& s : scored) {
        if (s.label != 0 && s.label != 1) {
            throw std::invalid_argument(fmt::format("label {} is not 0/1", s.label));
        }
    }
}

std::pair<std::size_t, std::size_t> class_counts(std::span<const ScoredEvent> scored) {
    std::size_t pos = 0;
    for (const auto& s : scored) {
        pos += static_cast<std::size_t>(s.label == 1);
    }
    return {pos, scored.size() - pos};
}

// Indices sorted by descending score; ties keep input order (irrelevant to
// results, which only read group boundaries).
std::vector<std::size_t> descending_order(std::span<const ScoredEvent> scored) {
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });
    return order;
}

struct Group {
    double threshold;
    std::size_t cum_tp;
    std::size_t cum_fp;
};

std::vector<Group> tie_groups(std::span<const ScoredEvent> scored) {
    const auto order = descending_order(scored);
    std::vector<Group> groups;
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& s = scored[order[i]];
        (s.label == 1 ? tp : fp) += 1;
        const bool last_of_group = i + 1 == order.size() || scored[order[i + 1]].score != s.score;
        if (last_of_group) {
            groups.push_back(Group{s.score, tp, fp});
        }
    }
    return groups;
}

} // namespace

std::vector<ScoredEvent> make_scored(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("scores and labels differ in length");
    }
    std::vector<ScoredEvent> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = ScoredEvent{scores[i], labels[i]};
    }
    return out;
}

Confusion confusion(std::span<const ScoredEvent> scored, double threshold) {
    if (scored.empty()) {
        throw std::invalid_argument("confusion counts of an empty set");
    }
    check_labels(scored);
    Confusion c;
    for (const auto& s : scored) {
        const bool predicted = s.score >= threshold;
        if (predicted) {
            (s.label == 1 ? c.tp : c.fp) += 1;
        } else {
            (s.label == 1 ? c.fn : c.tn) += 1;
        }
    }
    c.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(scored.size());
    if (c.tp + c.fp == 0) {
        c.precision = 1.0;
        c.precision_undefined = true;
    } else {
        c.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    c.recall = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    return c;
}

double f_beta(double precision, double recall, double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument(fmt::format("beta must be positive, got {}", beta));
    }
    const double b2 = beta * beta;
    const double denominator = b2 * precision + recall;
    if (denominator == 0.0) {
        return 0.0;
    }
    return (1.0 + b2) * precision * recall / denominator;
}

double roc_auc(std::span<const ScoredEvent> scored) {
    check_labels(scored);
    const auto [pos, neg] = class_counts(scored);
    if (pos == 0 || neg == 0) {
        throw std::invalid_argument("ROC AUC is undefined with a single class");
    }
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scored[a].score < scored[b].score; });

    // Ranks are 1-based; tied blocks share their average rank. Doubled to stay integral.
    std::size_t doubled_rank_sum = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t positives = 0;
        while (j < order.size() && scored[order[j]].score == scored[order[i]].score) {
            positives += static_cast<std::size_t>(scored[order[j]].label == 1);
            ++j;
        }
        // Average rank of positions i+1..j is (i + 1 + j) / 2.
        doubled_rank_sum += positives * (i + 1 + j);
        i = j;
    }
    const double u = static_cast<double>(doubled_rank_sum) / 2.0 - static_cast<double>(pos * (pos + 1)) / 2.0;
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

double pr_auc(std::span<const ScoredEvent> scored) {
    check_labels(scored);
    const auto [pos, neg] = class_counts(scored);
    (void)neg;
    if (pos == 0) {
        throw std::invalid_argument("PR AUC is undefined without positives");
    }
    double ap = 0.0;
    std::size_t previous_tp = 0;
    for (const Group& g : tie_groups(scored)) {
        if (g.cum_tp == previous_tp) {
            continue;
        }
        const double precision = static_cast<double>(g.cum_tp) / static_cast<double>(g.cum_tp + g.cum_fp);
        ap += static_cast<double>(g.cum_tp - previous_tp) / static_cast<double>(pos) * precision;
        previous_tp = g.cum_tp;
    }
    return ap;
}

std::string metric_advisor(bool positive_class_more_important, CostProfile profile) {
    if (!positive_class_more_important) {
        return "ROC_AUC";
    }
    switch (profile) {
    case CostProfile::Balanced:
        return "PR_AUC";
    case CostProfile::FalseNegativesCostly:
        return "F(2)";
    case CostProfile::FalsePositivesCostly:
        return "F(0.5)";
    }
    return "PR_AUC";
}

CurvePoints curve_points(std::span<const ScoredEvent> scored, CurveKind kind) {
    check_labels(scored);
    const auto [pos, neg] = class_counts(scored);
    if (pos == 0 || (kind == CurveKind::Roc && neg == 0)) {
        throw std::invalid_argument("curve undefined for the given class balance");
    }
    CurvePoints curve;
    curve.kind = kind;
    if (kind == CurveKind::Roc) {
        curve.x.push_back(0.0);
        curve.y.push_back(0.0);
        curve.thresholds.push_back(std::numeric_limits<double>::infinity());
    }
    for (const Group& g : tie_groups(scored)) {
        curve.thresholds.push_back(g.threshold);
        if (kind == CurveKind::Roc) {
            curve.x.push_back(static_cast<double>(g.cum_fp) / static_cast<double>(neg));
            curve.y.push_back(static_cast<double>(g.cum_tp) / static_cast<double>(pos));
        } else {
            curve.x.push_back(static_cast<double>(g.cum_tp) / static_cast<double>(pos));
            curve.y.push_back(static_cast<double>(g.cum_tp) / static_cast<double>(g.cum_tp + g.cum_fp));
        }
    }
    return curve;
}

double curve_area(const CurvePoints& curve) {
    double area = 0.0;
    if (curve.kind == CurveKind::Roc) {
        for (std::size_t i = 1; i < curve.x.size(); ++i) {
            area += (curve.x[i] - curve.x[i - 1]) * (curve.y[i] + curve.y[i - 1]) / 2.0;
        }
        return area;
    }
    double previous_recall = 0.0;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        area += (curve.x[i] - previous_recall) * curve.y[i];
        previous_recall = curve.x[i];
    }
    return area;
}

} // namespace markhawkes::metrics

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace markhawkes::metrics {

/// A predicted positive-class probability with its true 0/1 label.
struct ScoredEvent {
    double score{0.0};
    int label{0};
};

[[nodiscard]] std::vector<ScoredEvent> make_scored(std::span<const double> scores, std::span<const int> labels);

struct Confusion {
    std::size_t tp{0};
    std::size_t fp{0};
    std::size_t tn{0};
    std::size_t fn{0};
    double accuracy{0.0};
    double precision{0.0};
    double recall{0.0};
    bool precision_undefined{false}; ///< no predicted positives; precision reported as 1
};

/// Predicts positive iff score >= threshold.
[[nodiscard]] Confusion confusion(std::span<const ScoredEvent> scored, double threshold);

/// (1 + b^2) p r / (b^2 p + r); 0 when p = r = 0.
[[nodiscard]] double f_beta(double precision, double recall, double beta);

/// Mann-Whitney statistic with average ranks for ties.
[[nodiscard]] double roc_auc(std::span<const ScoredEvent> scored);

/// Average precision over tie-grouped thresholds: sum_k (R_k - R_{k-1}) P_k.
[[nodiscard]] double pr_auc(std::span<const ScoredEvent> scored);

enum class CostProfile { Balanced, FalseNegativesCostly, FalsePositivesCostly };

/// Recommended metric name: "PR_AUC", "F(2)", "F(0.5)" or "ROC_AUC".
[[nodiscard]] std::string metric_advisor(bool positive_class_more_important, CostProfile profile);

enum class CurveKind { Roc, Pr };

struct CurvePoints {
    CurveKind kind{CurveKind::Roc};
    std::vector<double> x;          ///< FPR (ROC) or recall (PR)
    std::vector<double> y;          ///< TPR (ROC) or precision (PR)
    std::vector<double> thresholds; ///< score threshold for each point
};

/// One point per distinct score, descending threshold. ROC curves start at
/// (0, 0) with an infinite threshold.
[[nodiscard]] CurvePoints curve_points(std::span<const ScoredEvent> scored, CurveKind kind);

/// Trapezoidal area for ROC points, right-step area for PR points.
[[nodiscard]] double curve_area(const CurvePoints& curve);

} // namespace markhawkes::metrics

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "markhawkes/event.hpp"
#include "markhawkes/ingest.hpp"

namespace markhawkes::ingest {

struct ClassBalance {
    std::size_t normal{0};
    std::size_t fraud{0};

    [[nodiscard]] double fraud_share() const {
        const std::size_t n = normal + fraud;
        return n == 0 ? 0.0 : static_cast<double>(fraud) / static_cast<double>(n);
    }
};

[[nodiscard]] ClassBalance class_balance(const std::vector<TransactionRecord>& records);

struct InterArrival {
    double time{0.0}; ///< time of the later event
    double gap{0.0};
};

/// Gaps between consecutive events with time in [start, end).
[[nodiscard]] std::vector<InterArrival> eda_interarrival_series(const EventSequence& sequence,
                                                                double start,
                                                                double end);

/// min, Q1, median, Q3, max (linear-interpolation quantiles).
using FiveNumber = std::array<double, 5>;

[[nodiscard]] FiveNumber five_number_summary(std::vector<double> values);

struct WindowCounts {
    double window_minutes{30.0};
    std::size_t days{0};
    std::size_t windows_per_day{0};
    Eigen::MatrixXi counts;           ///< days x windows_per_day
    std::vector<FiveNumber> summaries; ///< per window, over days
    std::vector<std::size_t> daily_totals;
};

/// Counts per day and intra-day window. Covers max(1, ceil(horizon / day))
/// days. `window_minutes` must divide a day.
[[nodiscard]] WindowCounts eda_window_counts(const EventSequence& sequence, double window_minutes = 30.0);

struct ContingencyRow {
    std::string category;
    std::size_t normal{0};
    std::size_t fraud{0};
    double fraud_proportion{0.0};
};

/// Per-category class counts sorted by ascending fraud proportion, ties by
/// category name. Missing values form their own "missing" category.
[[nodiscard]] std::vector<ContingencyRow> eda_contingency(const std::vector<TransactionRecord>& records,
                                                          const std::string& column);

struct LogHistogram {
    std::vector<double> edges;                  ///< bins + 1 shared edges on the log(1 + x) scale
    std::array<std::vector<double>, 2> density; ///< per class (0 normal, 1 fraud)
    std::array<std::vector<std::size_t>, 2> counts;
};

/// Histogram of log(1 + value) per class with edges spanning the pooled range.
/// Throws DataError when the column has no values.
[[nodiscard]] LogHistogram eda_grouped_log_histogram(const std::vector<TransactionRecord>& records,
                                                     const std::string& column,
                                                     std::size_t bins);

/// Equal-frequency bin index of each value (ties share a bin).
[[nodiscard]] std::vector<int> quantile_bins(const Eigen::VectorXd& values, std::size_t bins);

/// Plug-in mutual information (nats) of two discrete label vectors.
[[nodiscard]] double plug_in_mutual_information(const std::vector<int>& a, const std::vector<int>& b);

/// Pairwise MI of all columns within one class.
[[nodiscard]] Eigen::MatrixXd mutual_information_matrix(const Eigen::MatrixXd& features, std::size_t bins);

/// |MI_0(i, j) - MI_1(i, j)| over feature pairs; zero diagonal.
[[nodiscard]] Eigen::MatrixXd mi_difference_matrix(const Eigen::MatrixXd& class0,
                                                   const Eigen::MatrixXd& class1,
                                                   std::size_t bins = 10);

} // namespace markhawkes::ingest

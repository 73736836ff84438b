#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "markhawkes/ingest.hpp"

namespace markhawkes::imbalance {

using ingest::FeatureMatrix;

/// How a synthetic row was made: base + u * (neighbor - base). For exact
/// duplicates neighbor == base and u == 0.
struct Provenance {
    std::size_t base{0};
    std::size_t neighbor{0};
    double u{0.0};
};

struct ResampleResult {
    FeatureMatrix features;
    std::vector<bool> synthetic;
    /// Source row in the input for kept originals; unset (-1) for synthetic rows.
    std::vector<std::ptrdiff_t> original_index;
    /// Parallel to rows; meaningful only where synthetic[i] is true.
    std::vector<Provenance> provenance;
};

/// Minority class label (the rarer of 0/1; 1 on a tie).
[[nodiscard]] int minority_label(const std::vector<int>& labels);

/// Minority size needed to reach minority / majority = target_ratio,
/// rounded up.
[[nodiscard]] std::size_t target_minority_count(std::size_t majority, double target_ratio);

/// Interpolates between random minority rows and one of their k nearest
/// minority neighbours (Euclidean; ties to the lower row index) until the
/// target ratio is reached. Throws std::invalid_argument when the minority
/// class has k rows or fewer.
[[nodiscard]] ResampleResult smote(const FeatureMatrix& features,
                                   std::size_t k = 5,
                                   double target_ratio = 1.0,
                                   std::uint64_t seed = 1);

/// Appends uniformly drawn copies of minority rows.
[[nodiscard]] ResampleResult random_oversample(const FeatureMatrix& features,
                                               double target_ratio = 1.0,
                                               std::uint64_t seed = 1);

/// Keeps ceil(minority / target_ratio) uniformly chosen majority rows.
[[nodiscard]] ResampleResult random_undersample(const FeatureMatrix& features,
                                                double target_ratio = 1.0,
                                                std::uint64_t seed = 1);

/// Indices of the k nearest rows to `query` among `candidates` (excluding
/// the query itself), nearest first.
[[nodiscard]] std::vector<std::size_t> nearest_neighbors(const Eigen::MatrixXd& rows,
                                                         const std::vector<std::size_t>& candidates,
                                                         std::size_t query,
                                                         std::size_t k);

} // namespace markhawkes::imbalance

#include "markhawkes/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "markhawkes/random.hpp"

namespace markhawkes::imbalance {

namespace {

void check_ratio(double target_ratio) {
    if (!(target_ratio > 0.0) || !std::isfinite(target_ratio)) {
        throw std::invalid_argument(fmt::format("target ratio must be positive, got {}", target_ratio));
    }
}

std::vector<std::size_t> rows_with(const std::vector<int>& labels, int label) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            out.push_back(i);
        }
    }
    return out;
}

ResampleResult copy_of(const FeatureMatrix& features) {
    ResampleResult out;
    out.features = features;
    out.synthetic.assign(features.rows(), false);
    out.original_index.resize(features.rows());
    std::iota(out.original_index.begin(), out.original_index.end(), 0);
    out.provenance.assign(features.rows(), Provenance{});
    return out;
}

// Appends synthetic rows produced by `make(i)` for i in [0, count).
template <class Make>
void append_rows(ResampleResult& out, std::size_t count, int label, Make make) {
    const auto start = out.features.values.rows();
    out.features.values.conservativeResize(start + static_cast<Eigen::Index>(count), Eigen::NoChange);
    for (std::size_t i = 0; i < count; ++i) {
        const auto [row, provenance] = make(i);
        out.features.values.row(start + static_cast<Eigen::Index>(i)) = row;
        out.features.labels.push_back(label);
        out.synthetic.push_back(true);
        out.original_index.push_back(-1);
        out.provenance.push_back(provenance);
    }
}

} // namespace

int minority_label(const std::vector<int>& labels) {
    const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    return ones <= labels.size() - ones ? 1 : 0;
}

std::size_t target_minority_count(std::size_t majority, double target_ratio) {
    check_ratio(target_ratio);
    // Guard against ratios like 0.3 * 10 = 3.0000000000000004 rounding up.
    const double exact = target_ratio * static_cast<double>(majority);
    const double rounded = std::round(exact);
    if (std::abs(exact - rounded) < 1e-9 * std::max(1.0, exact)) {
        return static_cast<std::size_t>(rounded);
    }
    return static_cast<std::size_t>(std::ceil(exact));
}

std::vector<std::size_t> nearest_neighbors(const Eigen::MatrixXd& rows,
                                           const std::vector<std::size_t>& candidates,
                                           std::size_t query,
                                           std::size_t k) {
    std::vector<std::pair<double, std::size_t>> distances;
    distances.reserve(candidates.size());
    const auto q = rows.row(static_cast<Eigen::Index>(query));
    for (std::size_t c : candidates) {
        if (c == query) {
            continue;
        }
        distances.emplace_back((rows.row(static_cast<Eigen::Index>(c)) - q).squaredNorm(), c);
    }
    const std::size_t take = std::min(k, distances.size());
    std::partial_sort(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(take), distances.end());
    std::vector<std::size_t> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(distances[i].second);
    }
    return out;
}

ResampleResult smote(const FeatureMatrix& features, std::size_t k, double target_ratio, std::uint64_t seed) {
    check_ratio(target_ratio);
    if (!features.values.allFinite()) {
        throw std::invalid_argument("SMOTE requires finite features");
    }
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    const int minority = minority_label(features.labels);
    const auto minority_rows = rows_with(features.labels, minority);
    const std::size_t majority = features.rows() - minority_rows.size();
    if (minority_rows.size() <= k) {
        throw std::invalid_argument(fmt::format(
            "minority class has {} rows but k = {}; choose k smaller than the minority count", minority_rows.size(), k));
    }

    ResampleResult out = copy_of(features);
    const std::size_t target = target_minority_count(majority, target_ratio);
    if (target <= minority_rows.size()) {
        return out;
    }
    const std::size_t needed = target - minority_rows.size();

    std::vector<std::vector<std::size_t>> neighbors(minority_rows.size());
    for (std::size_t i = 0; i < minority_rows.size(); ++i) {
        neighbors[i] = nearest_neighbors(features.values, minority_rows, minority_rows[i], k);
    }

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick_base(0, minority_rows.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_neighbor(0, k - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    append_rows(out, needed, minority, [&](std::size_t) {
        const std::size_t b = pick_base(rng);
        const std::size_t base = minority_rows[b];
        const std::size_t neighbor = neighbors[b][pick_neighbor(rng)];
        const double u = unit(rng);
        const Eigen::RowVectorXd a = features.values.row(static_cast<Eigen::Index>(base));
        const Eigen::RowVectorXd c = features.values.row(static_cast<Eigen::Index>(neighbor));
        return std::pair{Eigen::RowVectorXd(a + u * (c - a)), Provenance{base, neighbor, u}};
    });
    return out;
}

ResampleResult random_oversample(const FeatureMatrix& features, double target_ratio, std::uint64_t seed) {
    check_ratio(target_ratio);
    const int minority = minority_label(features.labels);
    const auto minority_rows = rows_with(features.labels, minority);
    if (minority_rows.empty()) {
        throw std::invalid_argument("no minority rows to oversample");
    }
    const std::size_t majority = features.rows() - minority_rows.size();
    ResampleResult out = copy_of(features);
    const std::size_t target = target_minority_count(majority, target_ratio);
    if (target <= minority_rows.size()) {
        return out;
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, minority_rows.size() - 1);
    append_rows(out, target - minority_rows.size(), minority, [&](std::size_t) {
        const std::size_t base = minority_rows[pick(rng)];
        return std::pair{Eigen::RowVectorXd(features.values.row(static_cast<Eigen::Index>(base))),
                         Provenance{base, base, 0.0}};
    });
    return out;
}

ResampleResult random_undersample(const FeatureMatrix& features, double target_ratio, std::uint64_t seed) {
    check_ratio(target_ratio);
    const int minority = minority_label(features.labels);
    const auto minority_rows = rows_with(features.labels, minority);
    const auto majority_rows = rows_with(features.labels, 1 - minority);
    const double exact = static_cast<double>(minority_rows.size()) / target_ratio;
    const double rounded = std::round(exact);
    const auto keep = std::abs(exact - rounded) < 1e-9 * std::max(1.0, exact) ? static_cast<std::size_t>(rounded)
                                                                               : static_cast<std::size_t>(std::ceil(exact));
    if (keep > majority_rows.size()) {
        throw std::invalid_argument(fmt::format("ratio {} needs {} majority rows but only {} exist", target_ratio,
                                                keep, majority_rows.size()));
    }
    if (keep == majority_rows.size()) {
        return copy_of(features);
    }
    Rng rng(seed);
    std::vector<std::size_t> chosen = majority_rows;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(keep);
    std::vector<bool> retain(features.rows(), false);
    for (std::size_t i : chosen) {
        retain[i] = true;
    }
    for (std::size_t i : minority_rows) {
        retain[i] = true;
    }

    ResampleResult out;
    out.features.names = features.names;
    const auto kept = static_cast<Eigen::Index>(keep + minority_rows.size());
    out.features.values.resize(kept, features.values.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        if (!retain[i]) {
            continue;
        }
        out.features.values.row(r++) = features.values.row(static_cast<Eigen::Index>(i));
        out.features.labels.push_back(features.labels[i]);
        out.synthetic.push_back(false);
        out.original_index.push_back(static_cast<std::ptrdiff_t>(i));
        out.provenance.push_back(Provenance{});
    }
    return out;
}

} // namespace markhawkes::imbalance

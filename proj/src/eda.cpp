#include "markhawkes/eda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

namespace markhawkes::ingest {

ClassBalance class_balance(const std::vector<TransactionRecord>& records) {
    ClassBalance out;
    for (const auto& r : records) {
        (r.is_fraud == 1 ? out.fraud : out.normal) += 1;
    }
    return out;
}

std::vector<InterArrival> eda_interarrival_series(const EventSequence& sequence, double start, double end) {
    std::vector<InterArrival> out;
    const Event* previous = nullptr;
    for (const Event& e : sequence) {
        if (e.time < start || e.time >= end) {
            continue;
        }
        if (previous != nullptr) {
            out.push_back(InterArrival{e.time, e.time - previous->time});
        }
        previous = &e;
    }
    return out;
}

FiveNumber five_number_summary(std::vector<double> values) {
    FiveNumber out{};
    if (values.empty()) {
        return out;
    }
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double h = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
    };
    out = {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
    return out;
}

WindowCounts eda_window_counts(const EventSequence& sequence, double window_minutes) {
    if (!(window_minutes > 0.0)) {
        throw std::invalid_argument("window length must be positive");
    }
    const double per_day = kMinutesPerDay / window_minutes;
    if (std::abs(per_day - std::round(per_day)) > 1e-9) {
        throw std::invalid_argument(fmt::format("window of {} minutes does not divide a day", window_minutes));
    }
    WindowCounts out;
    out.window_minutes = window_minutes;
    out.windows_per_day = static_cast<std::size_t>(std::round(per_day));
    double span = sequence.horizon();
    if (!sequence.empty()) {
        span = std::max(span, sequence.events().back().time);
    }
    std::size_t days = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / kMinutesPerDay)));
    if (!sequence.empty()) {
        days = std::max(days, static_cast<std::size_t>(sequence.events().back().time / kMinutesPerDay) + 1);
    }
    out.days = days;
    out.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(days), static_cast<Eigen::Index>(out.windows_per_day));
    for (const Event& e : sequence) {
        const auto day = static_cast<std::size_t>(e.time / kMinutesPerDay);
        const double within = e.time - static_cast<double>(day) * kMinutesPerDay;
        const auto window = std::min(out.windows_per_day - 1, static_cast<std::size_t>(within / window_minutes));
        out.counts(static_cast<Eigen::Index>(day), static_cast<Eigen::Index>(window)) += 1;
    }
    out.daily_totals.resize(days);
    for (std::size_t d = 0; d < days; ++d) {
        out.daily_totals[d] = static_cast<std::size_t>(out.counts.row(static_cast<Eigen::Index>(d)).sum());
    }
    for (std::size_t w = 0; w < out.windows_per_day; ++w) {
        std::vector<double> column(days);
        for (std::size_t d = 0; d < days; ++d) {
            column[d] = out.counts(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(w));
        }
        out.summaries.push_back(five_number_summary(std::move(column)));
    }
    return out;
}

std::vector<ContingencyRow> eda_contingency(const std::vector<TransactionRecord>& records, const std::string& column) {
    std::map<std::string, ContingencyRow> table;
    for (const auto& r : records) {
        const auto it = r.categories.find(column);
        if (it == r.categories.end()) {
            throw SchemaError(fmt::format("column '{}' is not a categorical column of the records", column));
        }
        const std::string key = it->second.value_or(kMissingLevel);
        auto& row = table[key];
        row.category = key;
        (r.is_fraud == 1 ? row.fraud : row.normal) += 1;
    }
    std::vector<ContingencyRow> out;
    for (auto& [key, row] : table) {
        row.fraud_proportion = static_cast<double>(row.fraud) / static_cast<double>(row.fraud + row.normal);
        out.push_back(row);
    }
    std::stable_sort(out.begin(), out.end(), [](const ContingencyRow& a, const ContingencyRow& b) {
        if (a.fraud_proportion != b.fraud_proportion) {
            return a.fraud_proportion < b.fraud_proportion;
        }
        return a.category < b.category;
    });
    return out;
}

LogHistogram eda_grouped_log_histogram(const std::vector<TransactionRecord>& records,
                                       const std::string& column,
                                       std::size_t bins) {
    if (bins < 2) {
        throw std::invalid_argument("histogram needs at least 2 bins");
    }
    std::array<std::vector<double>, 2> values;
    for (const auto& r : records) {
        const auto it = r.numeric.find(column);
        if (it == r.numeric.end()) {
            throw SchemaError(fmt::format("column '{}' is not a numeric column of the records", column));
        }
        if (it->second) {
            values[static_cast<std::size_t>(r.is_fraud)].push_back(std::log1p(*it->second));
        }
    }
    if (values[0].empty() && values[1].empty()) {
        throw DataError(fmt::format("column '{}' has no values", column));
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : values) {
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (hi == lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    LogHistogram out;
    const double width = (hi - lo) / static_cast<double>(bins);
    out.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        out.edges[k] = lo + width * static_cast<double>(k);
    }
    out.edges[bins] = hi;
    for (std::size_t c = 0; c < 2; ++c) {
        out.counts[c].assign(bins, 0);
        out.density[c].assign(bins, 0.0);
        for (double x : values[c]) {
            const auto k = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
            out.counts[c][k] += 1;
        }
        if (values[c].empty()) {
            continue;
        }
        for (std::size_t k = 0; k < bins; ++k) {
            out.density[c][k] = static_cast<double>(out.counts[c][k]) /
                                (static_cast<double>(values[c].size()) * (out.edges[k + 1] - out.edges[k]));
        }
    }
    return out;
}

std::vector<int> quantile_bins(const Eigen::VectorXd& values, std::size_t bins) {
    if (bins < 2) {
        throw std::invalid_argument("need at least 2 bins");
    }
    const auto n = static_cast<std::size_t>(values.size());
    std::vector<int> out(n, 0);
    if (n == 0) {
        return out;
    }
    std::vector<double> sorted(values.data(), values.data() + n);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (std::size_t k = 1; k < bins; ++k) {
        cuts.push_back(sorted[std::min(n - 1, k * n / bins)]);
    }
    // Bin = number of cut points <= value; duplicate cut points collapse bins.
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), values[static_cast<Eigen::Index>(i)]) -
                                  cuts.begin());
    }
    return out;
}

double plug_in_mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("label vectors differ in length");
    }
    if (a.empty()) {
        return 0.0;
    }
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> pa;
    std::map<int, double> pb;
    const double n = static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0;
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
    }
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        const double pxy = count / n;
        mi += pxy * std::log(pxy * n * n / (pa[key.first] * pb[key.second]));
    }
    return std::max(0.0, mi);
}

Eigen::MatrixXd mutual_information_matrix(const Eigen::MatrixXd& features, std::size_t bins) {
    const auto p = features.cols();
    std::vector<std::vector<int>> binned;
    binned.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        binned.push_back(quantile_bins(features.col(j), bins));
    }
    Eigen::MatrixXd mi = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double v = plug_in_mutual_information(binned[static_cast<std::size_t>(i)],
                                                        binned[static_cast<std::size_t>(j)]);
            mi(i, j) = v;
            mi(j, i) = v;
        }
    }
    return mi;
}

Eigen::MatrixXd mi_difference_matrix(const Eigen::MatrixXd& class0, const Eigen::MatrixXd& class1, std::size_t bins) {
    if (class0.cols() != class1.cols()) {
        throw std::invalid_argument("class feature matrices have different columns");
    }
    return (mutual_information_matrix(class0, bins) - mutual_information_matrix(class1, bins)).cwiseAbs();
}

} // namespace markhawkes::ingest

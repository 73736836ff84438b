#include "doctest.h"

#include <algorithm>
#include <random>

#include "markhawkes/imbalance.hpp"
#include "markhawkes/random.hpp"

using namespace markhawkes;
using namespace markhawkes::imbalance;

namespace {

FeatureMatrix make_matrix(std::size_t majority, std::size_t minority, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    FeatureMatrix m;
    for (std::size_t j = 0; j < cols; ++j) {
        m.names.push_back("f" + std::to_string(j));
    }
    m.values.resize(static_cast<Eigen::Index>(majority + minority), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
        // Minority rows spread evenly through the matrix.
        const bool minor = static_cast<std::size_t>(i) * minority / (majority + minority) !=
                           (static_cast<std::size_t>(i) + 1) * minority / (majority + minority);
        for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
            m.values(i, j) = g(rng) + (minor ? 2.0 : 0.0);
        }
        m.labels.push_back(minor ? 1 : 0);
    }
    return m;
}

std::size_t count_label(const FeatureMatrix& m, int label) {
    return static_cast<std::size_t>(std::count(m.labels.begin(), m.labels.end(), label));
}

void check_originals_untouched(const FeatureMatrix& input, const ResampleResult& out) {
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        if (out.synthetic[i]) {
            continue;
        }
        const auto src = out.original_index[i];
        REQUIRE(src >= 0);
        CHECK(out.features.values.row(static_cast<Eigen::Index>(i)) == input.values.row(src));
        CHECK(out.features.labels[i] == input.labels[static_cast<std::size_t>(src)]);
    }
}

} // namespace

TEST_CASE("SMOTE on a two-point minority stays on the segment") {
    FeatureMatrix m;
    m.names = {"x", "y"};
    m.values.resize(6, 2);
    m.values << 0, 0, 1, 1, 5, 5, 6, 6, 7, 7, 8, 8;
    m.labels = {1, 1, 0, 0, 0, 0};
    const auto out = smote(m, 1, 1.0, 3);
    CHECK(count_label(out.features, 1) == 4);
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        if (!out.synthetic[i]) {
            continue;
        }
        const auto row = out.features.values.row(static_cast<Eigen::Index>(i));
        CHECK(row[0] == row[1]);
        CHECK(row[0] >= 0.0);
        CHECK(row[0] <= 1.0);
    }
}

TEST_CASE("SMOTE reaches the requested ratio with exact provenance") {
    const auto m = make_matrix(900, 100, 3, 5);
    REQUIRE(count_label(m, 1) == 100);
    const auto out = smote(m, 5, 1.0, 7);
    CHECK(count_label(out.features, 0) == 900);
    CHECK(count_label(out.features, 1) == 900);
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        if (!out.synthetic[i]) {
            continue;
        }
        const auto& p = out.provenance[i];
        CHECK(p.u >= 0.0);
        CHECK(p.u <= 1.0);
        CHECK(m.labels[p.base] == 1);
        CHECK(m.labels[p.neighbor] == 1);
        CHECK(p.base != p.neighbor);
        const Eigen::RowVectorXd a = m.values.row(static_cast<Eigen::Index>(p.base));
        const Eigen::RowVectorXd b = m.values.row(static_cast<Eigen::Index>(p.neighbor));
        const Eigen::RowVectorXd rebuilt = a + p.u * (b - a);
        CHECK(out.features.values.row(static_cast<Eigen::Index>(i)) == rebuilt);
    }
    check_originals_untouched(m, out);
    const auto again = smote(m, 5, 1.0, 7);
    CHECK(again.features.values == out.features.values);
}

TEST_CASE("SMOTE neighbours are the nearest minority rows") {
    const auto m = make_matrix(90, 30, 2, 8);
    std::vector<std::size_t> minority;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        if (m.labels[i] == 1) {
            minority.push_back(i);
        }
    }
    for (std::size_t q : minority) {
        const auto nn = nearest_neighbors(m.values, minority, q, 5);
        REQUIRE(nn.size() == 5);
        const double kth = (m.values.row(static_cast<Eigen::Index>(nn.back())) -
                            m.values.row(static_cast<Eigen::Index>(q))).squaredNorm();
        for (std::size_t c : minority) {
            if (c == q || std::find(nn.begin(), nn.end(), c) != nn.end()) {
                continue;
            }
            CHECK((m.values.row(static_cast<Eigen::Index>(c)) - m.values.row(static_cast<Eigen::Index>(q)))
                      .squaredNorm() >= kth);
        }
    }
}

TEST_CASE("SMOTE rejects k not below the minority count") {
    const auto m = make_matrix(50, 5, 2, 9);
    CHECK_THROWS_WITH(static_cast<void>(smote(m, 5, 1.0, 1)), doctest::Contains("smaller"));
    CHECK_NOTHROW(static_cast<void>(smote(m, 4, 1.0, 1)));
}

TEST_CASE("ratio arithmetic rounds the synthetic count up") {
    CHECK(target_minority_count(900, 1.0) == 900);
    CHECK(target_minority_count(10, 0.3) == 3);
    CHECK(target_minority_count(10, 0.25) == 3);
    const auto m = make_matrix(900, 100, 2, 10);
    const auto out = smote(m, 5, 0.5, 2);
    CHECK(count_label(out.features, 1) == 450);
}

TEST_CASE("random oversampling duplicates minority rows") {
    const auto m = make_matrix(900, 100, 2, 11);
    const auto out = random_oversample(m, 1.0, 4);
    CHECK(count_label(out.features, 1) == 900);
    for (std::size_t i = 0; i < out.features.rows(); ++i) {
        if (out.synthetic[i]) {
            CHECK(out.features.values.row(static_cast<Eigen::Index>(i)) ==
                  m.values.row(static_cast<Eigen::Index>(out.provenance[i].base)));
            CHECK(m.labels[out.provenance[i].base] == 1);
        }
    }
    check_originals_untouched(m, out);
    CHECK(random_oversample(m, 1.0, 4).features.values == out.features.values);
    const auto noop = random_oversample(m, 100.0 / 900.0, 4);
    CHECK(noop.features.rows() == m.rows());
}

TEST_CASE("random undersampling keeps a subset of the majority") {
    const auto m = make_matrix(900, 100, 2, 12);
    const auto out = random_undersample(m, 1.0, 5);
    CHECK(count_label(out.features, 0) == 100);
    CHECK(count_label(out.features, 1) == 100);
    check_originals_untouched(m, out);
    CHECK(random_undersample(m, 1.0, 5).original_index == out.original_index);
    CHECK(random_undersample(m, 100.0 / 900.0, 5).features.rows() == m.rows());
    CHECK_THROWS(static_cast<void>(random_undersample(m, 0.05, 5)));
}

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "markhawkes/event.hpp"

namespace markhawkes::ingest {

/// Input data problems (unreadable file, bad schema, no usable rows).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class EmptyInputError : public DataError {
public:
    using DataError::DataError;
};

enum class TimeUnit { Seconds, Minutes };

[[nodiscard]] double to_minutes(double value, TimeUnit unit);
[[nodiscard]] double from_minutes(double minutes, TimeUnit unit);
[[nodiscard]] TimeUnit parse_time_unit(const std::string& name);

/// Column names of the transaction CSV.
struct CsvSchema {
    std::string time_column{"TransactionDT"};
    std::string label_column{"isFraud"};
    std::string amount_column{"TransactionAmt"};
    std::string product_column{"ProductCD"};
    std::vector<std::string> numeric_columns;     ///< optional extra numeric fields (e.g. days since last)
    std::vector<std::string> categorical_columns; ///< optional extra categorical fields
    TimeUnit time_unit{TimeUnit::Seconds};
};

struct TransactionRecord {
    double time_minutes{0.0};
    int is_fraud{0};
    std::string product;
    std::optional<double> amount;
    /// Every numeric column of the schema, amount included, keyed by column name.
    std::map<std::string, std::optional<double>> numeric;
    /// Every categorical column of the schema, product included.
    std::map<std::string, std::optional<std::string>> categories;
};

struct ParseResult {
    std::vector<TransactionRecord> records;
    std::size_t skipped{0};
    std::vector<std::size_t> skipped_lines; ///< 1-based line numbers
};

/// Splits one CSV line (RFC 4180 quoting).
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

/// Rows with an unparseable time, label or numeric field are skipped and
/// counted. Empty numeric/categorical cells are treated as missing.
[[nodiscard]] ParseResult parse_csv(std::istream& in, const CsvSchema& schema);
[[nodiscard]] ParseResult parse_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Maps covariate labels to 1-based codes in first-appearance order.
class CovariateEncoding {
public:
    CovariateEncoding() = default;
    explicit CovariateEncoding(std::vector<std::string> labels);

    /// 0 when the label is unknown.
    [[nodiscard]] int code_of(const std::string& label) const;
    int encode_or_extend(const std::string& label);

    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] int size() const { return static_cast<int>(labels_.size()); }

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static CovariateEncoding from_json(const nlohmann::json& j);

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> codes_;
};

/// Start of the day (in minutes) containing the earliest record.
[[nodiscard]] double day_origin(const std::vector<TransactionRecord>& records);

struct SequenceOptions {
    std::optional<double> origin_minutes;  ///< default: day_origin(records)
    std::optional<double> horizon_minutes; ///< relative to origin; default: last event time
    double tie_epsilon{kDefaultTieEpsilon};
};

struct BuiltSequence {
    EventSequence sequence;
    CovariateEncoding encoding;
    double origin_minutes{0.0};
};

/// Marks: is_fraud 0 -> 1, 1 -> 2. Covariates: product labels encoded via
/// `encoding` (extended in first-appearance order unless `frozen`).
/// Throws DataError for zero records, or for an unseen label when frozen.
[[nodiscard]] BuiltSequence build_event_sequence(const std::vector<TransactionRecord>& records,
                                                 const SequenceOptions& options = {},
                                                 CovariateEncoding encoding = {},
                                                 bool frozen = false);

struct SplitSpec {
    int train_days{14};
    int test_days{14};

    [[nodiscard]] double train_end() const { return train_days * kMinutesPerDay; }
    [[nodiscard]] double test_end() const { return (train_days + test_days) * kMinutesPerDay; }
    void validate() const;
};

struct SequenceSplit {
    EventSequence train;
    EventSequence test;
    EventSequence window; ///< train followed by test, for history-carrying scoring
    std::size_t excluded{0};
    std::vector<std::string> warnings;
};

/// train: t < train_end; test: train_end <= t < test_end; the rest excluded.
[[nodiscard]] SequenceSplit time_split(const EventSequence& sequence, const SplitSpec& spec);

struct RecordSplit {
    std::vector<TransactionRecord> train;
    std::vector<TransactionRecord> test;
    std::size_t excluded{0};
    std::vector<std::string> warnings;
};

/// Same windows as time_split, measured from `origin_minutes`.
[[nodiscard]] RecordSplit time_split(const std::vector<TransactionRecord>& records,
                                     const SplitSpec& spec,
                                     double origin_minutes);

// ---------------------------------------------------------------------------
// Features

struct FeatureConfig {
    std::vector<std::string> numeric_columns{"TransactionAmt"}; ///< log(1 + x) transformed
    std::vector<std::string> categorical_columns{"ProductCD"};  ///< one-hot, reference level dropped
    bool time_of_day{false}; ///< sin/cos of the daily phase
    bool intercept{true};
};

struct FeatureMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
    std::vector<int> labels;

    [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

inline constexpr const char* kMissingLevel = "missing";

/// Statistics learned on training records and reused for test rows.
struct FeatureTransform {
    FeatureConfig config;
    std::map<std::string, double> medians;                  ///< per numeric column
    std::map<std::string, std::vector<std::string>> levels; ///< sorted; first is the reference
    std::vector<std::string> names;

    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static FeatureTransform from_json(const nlohmann::json& j);
};

[[nodiscard]] FeatureTransform fit_feature_transform(const std::vector<TransactionRecord>& records,
                                                     const FeatureConfig& config);

[[nodiscard]] FeatureMatrix apply_feature_transform(const std::vector<TransactionRecord>& records,
                                                    const FeatureTransform& transform);

struct BuiltFeatures {
    FeatureMatrix matrix;
    FeatureTransform transform;
};

[[nodiscard]] BuiltFeatures build_feature_matrix(const std::vector<TransactionRecord>& records,
                                                 const FeatureConfig& config);

/// Rows of `matrix` with the given label.
[[nodiscard]] Eigen::MatrixXd rows_with_label(const FeatureMatrix& matrix, int label);

} // namespace markhawkes::ingest

#include "markhawkes/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace markhawkes::ingest {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) {
        return std::nullopt;
    }
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (*begin == '+') {
        ++begin;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw SchemaError(fmt::format("required column '{}' not found in header", name));
    }
    return static_cast<std::size_t>(it - header.begin());
}

enum class Cell { Missing, Ok, Bad };

Cell read_non_negative(const std::string& text, std::optional<double>& out) {
    if (text.empty()) {
        out.reset();
        return Cell::Missing;
    }
    const auto v = parse_double(text);
    if (!v || *v < 0.0) {
        return Cell::Bad;
    }
    out = *v;
    return Cell::Ok;
}

} // namespace

double to_minutes(double value, TimeUnit unit) { return unit == TimeUnit::Seconds ? value / 60.0 : value; }

double from_minutes(double minutes, TimeUnit unit) { return unit == TimeUnit::Seconds ? minutes * 60.0 : minutes; }

TimeUnit parse_time_unit(const std::string& name) {
    if (name == "seconds") {
        return TimeUnit::Seconds;
    }
    if (name == "minutes") {
        return TimeUnit::Minutes;
    }
    throw std::invalid_argument(fmt::format("unknown time unit '{}' (expected seconds or minutes)", name));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

ParseResult parse_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw EmptyInputError("input CSV is empty");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_csv_line(line);
    const std::size_t time_col = column_index(header, schema.time_column);
    const std::size_t label_col = column_index(header, schema.label_column);
    const std::size_t amount_col = column_index(header, schema.amount_column);
    const std::size_t product_col = column_index(header, schema.product_column);
    std::vector<std::pair<std::string, std::size_t>> numeric_cols{{schema.amount_column, amount_col}};
    for (const auto& name : schema.numeric_columns) {
        if (name != schema.amount_column) {
            numeric_cols.emplace_back(name, column_index(header, name));
        }
    }
    std::vector<std::pair<std::string, std::size_t>> categorical_cols{{schema.product_column, product_col}};
    for (const auto& name : schema.categorical_columns) {
        if (name != schema.product_column) {
            categorical_cols.emplace_back(name, column_index(header, name));
        }
    }

    ParseResult result;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        auto skip = [&] {
            ++result.skipped;
            result.skipped_lines.push_back(line_number);
        };
        if (fields.size() < header.size()) {
            skip();
            continue;
        }
        TransactionRecord record;
        const auto time = parse_double(fields[time_col]);
        const auto label = parse_double(fields[label_col]);
        if (!time || *time < 0.0 || !label || (*label != 0.0 && *label != 1.0)) {
            skip();
            continue;
        }
        record.time_minutes = to_minutes(*time, schema.time_unit);
        record.is_fraud = static_cast<int>(*label);

        bool bad = false;
        for (const auto& [name, col] : numeric_cols) {
            std::optional<double> value;
            if (read_non_negative(fields[col], value) == Cell::Bad) {
                bad = true;
                break;
            }
            record.numeric[name] = value;
        }
        if (bad) {
            skip();
            continue;
        }
        record.amount = record.numeric[schema.amount_column];
        for (const auto& [name, col] : categorical_cols) {
            const std::string& text = fields[col];
            record.categories[name] = text.empty() ? std::nullopt : std::optional<std::string>(text);
        }
        record.product = fields[product_col].empty() ? std::string(kMissingLevel) : fields[product_col];
        result.records.push_back(std::move(record));
    }
    return result;
}

ParseResult parse_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open '{}'", path.string()));
    }
    return parse_csv(in, schema);
}

// ---------------------------------------------------------------------------

CovariateEncoding::CovariateEncoding(std::vector<std::string> labels) {
    for (auto& label : labels) {
        encode_or_extend(label);
    }
}

int CovariateEncoding::code_of(const std::string& label) const {
    const auto it = codes_.find(label);
    return it == codes_.end() ? 0 : it->second;
}

int CovariateEncoding::encode_or_extend(const std::string& label) {
    if (const int code = code_of(label); code != 0) {
        return code;
    }
    labels_.push_back(label);
    const int code = static_cast<int>(labels_.size());
    codes_.emplace(label, code);
    return code;
}

nlohmann::json CovariateEncoding::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        j.push_back({{"code", i + 1}, {"label", labels_[i]}});
    }
    return j;
}

CovariateEncoding CovariateEncoding::from_json(const nlohmann::json& j) {
    std::vector<std::pair<int, std::string>> entries;
    for (const auto& item : j) {
        entries.emplace_back(item.at("code").get<int>(), item.at("label").get<std::string>());
    }
    std::sort(entries.begin(), entries.end());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != static_cast<int>(i + 1)) {
            throw DataError("covariate encoding codes are not 1..Z");
        }
        labels.push_back(entries[i].second);
    }
    return CovariateEncoding(std::move(labels));
}

double day_origin(const std::vector<TransactionRecord>& records) {
    if (records.empty()) {
        return 0.0;
    }
    double earliest = records.front().time_minutes;
    for (const auto& r : records) {
        earliest = std::min(earliest, r.time_minutes);
    }
    return std::floor(earliest / kMinutesPerDay) * kMinutesPerDay;
}

BuiltSequence build_event_sequence(const std::vector<TransactionRecord>& records,
                                   const SequenceOptions& options,
                                   CovariateEncoding encoding,
                                   bool frozen) {
    if (records.empty()) {
        throw DataError("cannot build an event sequence from zero records");
    }
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return records[a].time_minutes < records[b].time_minutes;
    });

    const double origin = options.origin_minutes.value_or(day_origin(records));
    std::vector<double> times;
    std::vector<int> marks;
    std::vector<int> covariates;
    times.reserve(records.size());
    marks.reserve(records.size());
    covariates.reserve(records.size());
    for (std::size_t idx : order) {
        const auto& r = records[idx];
        const double t = r.time_minutes - origin;
        if (t < 0.0) {
            throw DataError(fmt::format("record at {} min precedes origin {}", r.time_minutes, origin));
        }
        int code = encoding.code_of(r.product);
        if (code == 0) {
            if (frozen) {
                throw DataError(fmt::format("covariate label '{}' was not seen in training", r.product));
            }
            code = encoding.encode_or_extend(r.product);
        }
        times.push_back(t);
        marks.push_back(r.is_fraud + 1);
        covariates.push_back(code);
    }
    const double horizon = options.horizon_minutes.value_or(0.0);
    BuiltSequence out{EventSequence::from_raw(times, marks, covariates, horizon, 2, std::max(1, encoding.size()),
                                              options.tie_epsilon),
                      std::move(encoding), origin};
    return out;
}

void SplitSpec::validate() const {
    if (train_days <= 0 || test_days <= 0) {
        throw std::invalid_argument(fmt::format("split days must be positive, got {}/{}", train_days, test_days));
    }
}

SequenceSplit time_split(const EventSequence& sequence, const SplitSpec& spec) {
    spec.validate();
    const double train_end = spec.train_end();
    const double test_end = spec.test_end();
    std::vector<Event> train;
    std::vector<Event> test;
    std::size_t excluded = 0;
    for (const Event& e : sequence) {
        if (e.time < train_end) {
            train.push_back(e);
        } else if (e.time < test_end) {
            test.push_back(e);
        } else {
            ++excluded;
        }
    }
    std::vector<Event> window(train);
    window.insert(window.end(), test.begin(), test.end());

    SequenceSplit out;
    if (train.empty()) {
        out.warnings.push_back("training partition is empty");
    }
    if (test.empty()) {
        out.warnings.push_back("test partition is empty");
    }
    const int M = sequence.mark_count();
    const int Z = sequence.covariate_count();
    out.train = EventSequence(std::move(train), train_end, M, Z);
    out.test = EventSequence(std::move(test), test_end, M, Z);
    out.window = EventSequence(std::move(window), test_end, M, Z);
    out.excluded = excluded;
    return out;
}

RecordSplit time_split(const std::vector<TransactionRecord>& records, const SplitSpec& spec, double origin_minutes) {
    spec.validate();
    RecordSplit out;
    for (const auto& r : records) {
        const double t = r.time_minutes - origin_minutes;
        if (t < 0.0) {
            ++out.excluded;
        } else if (t < spec.train_end()) {
            out.train.push_back(r);
        } else if (t < spec.test_end()) {
            out.test.push_back(r);
        } else {
            ++out.excluded;
        }
    }
    if (out.train.empty()) {
        out.warnings.push_back("training partition is empty");
    }
    if (out.test.empty()) {
        out.warnings.push_back("test partition is empty");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Features

namespace {

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string level_of(const TransactionRecord& r, const std::string& column) {
    const auto it = r.categories.find(column);
    if (it == r.categories.end()) {
        throw SchemaError(fmt::format("feature column '{}' is not present in the records", column));
    }
    return it->second.value_or(kMissingLevel);
}

std::optional<double> numeric_of(const TransactionRecord& r, const std::string& column) {
    const auto it = r.numeric.find(column);
    if (it == r.numeric.end()) {
        throw SchemaError(fmt::format("feature column '{}' is not present in the records", column));
    }
    return it->second;
}

} // namespace

nlohmann::json FeatureTransform::to_json() const {
    return nlohmann::json{{"numeric_columns", config.numeric_columns},
                          {"categorical_columns", config.categorical_columns},
                          {"time_of_day", config.time_of_day},
                          {"intercept", config.intercept},
                          {"medians", medians},
                          {"levels", levels},
                          {"names", names}};
}

FeatureTransform FeatureTransform::from_json(const nlohmann::json& j) {
    FeatureTransform t;
    t.config.numeric_columns = j.at("numeric_columns").get<std::vector<std::string>>();
    t.config.categorical_columns = j.at("categorical_columns").get<std::vector<std::string>>();
    t.config.time_of_day = j.at("time_of_day").get<bool>();
    t.config.intercept = j.at("intercept").get<bool>();
    t.medians = j.at("medians").get<std::map<std::string, double>>();
    t.levels = j.at("levels").get<std::map<std::string, std::vector<std::string>>>();
    t.names = j.at("names").get<std::vector<std::string>>();
    return t;
}

FeatureTransform fit_feature_transform(const std::vector<TransactionRecord>& records, const FeatureConfig& config) {
    FeatureTransform t;
    t.config = config;
    for (const auto& column : config.numeric_columns) {
        std::vector<double> present;
        for (const auto& r : records) {
            if (const auto v = numeric_of(r, column)) {
                present.push_back(*v);
            }
        }
        t.medians[column] = median(std::move(present));
        t.names.push_back(fmt::format("log1p_{}", column));
    }
    for (const auto& column : config.categorical_columns) {
        std::set<std::string> seen;
        for (const auto& r : records) {
            seen.insert(level_of(r, column));
        }
        std::vector<std::string> levels(seen.begin(), seen.end());
        for (std::size_t k = 1; k < levels.size(); ++k) {
            t.names.push_back(fmt::format("{}={}", column, levels[k]));
        }
        t.levels[column] = std::move(levels);
    }
    if (config.time_of_day) {
        t.names.emplace_back("time_of_day_sin");
        t.names.emplace_back("time_of_day_cos");
    }
    if (config.intercept) {
        t.names.emplace_back("intercept");
    }
    return t;
}

FeatureMatrix apply_feature_transform(const std::vector<TransactionRecord>& records, const FeatureTransform& t) {
    FeatureMatrix out;
    out.names = t.names;
    out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(records.size()),
                                       static_cast<Eigen::Index>(t.names.size()));
    out.labels.reserve(records.size());
    constexpr double kTwoPi = 6.283185307179586;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const auto row = static_cast<Eigen::Index>(i);
        Eigen::Index col = 0;
        for (const auto& column : t.config.numeric_columns) {
            const double v = numeric_of(r, column).value_or(t.medians.at(column));
            out.values(row, col++) = std::log1p(v);
        }
        for (const auto& column : t.config.categorical_columns) {
            const auto& levels = t.levels.at(column);
            const std::string level = level_of(r, column);
            const auto it = std::find(levels.begin(), levels.end(), level);
            // Unseen levels fall back to the reference (all zeros).
            if (it != levels.end() && it != levels.begin()) {
                out.values(row, col + (it - levels.begin()) - 1) = 1.0;
            }
            col += static_cast<Eigen::Index>(levels.size()) - 1;
        }
        if (t.config.time_of_day) {
            const double phase = std::fmod(r.time_minutes, kMinutesPerDay) / kMinutesPerDay;
            out.values(row, col++) = std::sin(kTwoPi * phase);
            out.values(row, col++) = std::cos(kTwoPi * phase);
        }
        if (t.config.intercept) {
            out.values(row, col++) = 1.0;
        }
        out.labels.push_back(r.is_fraud);
    }
    return out;
}

BuiltFeatures build_feature_matrix(const std::vector<TransactionRecord>& records, const FeatureConfig& config) {
    BuiltFeatures out;
    out.transform = fit_feature_transform(records, config);
    out.matrix = apply_feature_transform(records, out.transform);
    return out;
}

Eigen::MatrixXd rows_with_label(const FeatureMatrix& matrix, int label) {
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
        if (matrix.labels[i] == label) {
            keep.push_back(static_cast<Eigen::Index>(i));
        }
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), matrix.values.cols());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.row(static_cast<Eigen::Index>(k)) = matrix.values.row(keep[k]);
    }
    return out;
}

} // namespace markhawkes::ingest

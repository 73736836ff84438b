#include "markhawkes/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "markhawkes/baseline.hpp"
#include "markhawkes/eda.hpp"
#include "markhawkes/estimation.hpp"
#include "markhawkes/imbalance.hpp"
#include "markhawkes/ingest.hpp"
#include "markhawkes/mark_model.hpp"
#include "markhawkes/metrics.hpp"
#include "markhawkes/random.hpp"
#include "markhawkes/serialize.hpp"
#include "markhawkes/simulation.hpp"

namespace markhawkes::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = MARKHAWKES_VERSION;

/// Bad flags, config files or generator settings (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::string input;
    std::string outdir{"markhawkes_out"};
    std::uint64_t seed{20220101};
    std::string time_unit{"seconds"};
    std::string time_column{"TransactionDT"};
    std::string label_column{"isFraud"};
    std::string amount_column{"TransactionAmt"};
    std::string product_column{"ProductCD"};
    std::string numeric_columns;
    std::string categorical_columns;
};

struct EdaOptions {
    std::size_t histogram_bins{30};
    std::size_t mi_bins{10};
    double interarrival_days{7.0};
    double window_minutes{30.0};
};

struct FitOptions {
    int train_days{14};
    int test_days{14};
    std::size_t restarts{3};
    std::size_t max_iterations{500};
    double initial_alpha_star{1.0};
    double initial_beta{0.1};
    double l2{1e-4};
    std::string lr_numeric_columns{"default"};
    std::string lr_categorical_columns{"default"};
    bool lr_time_of_day{false};
    std::string resample{"none"};
    std::size_t smote_k{5};
    double resample_ratio{1.0};
    std::size_t cdf_simulations{100};
};

struct EvaluateOptions {
    std::string model_dir;
    std::size_t timeline{100};
    double threshold{0.5};
    std::string cost_profile{"balanced"};
    bool positive_important{true};
};

struct SimulateOptions {
    std::string process{"marked"};
    double horizon{40320.0};
    double rate{1.0};
    double mu{0.5};
    double alpha{0.5};
    double beta{1.0};
    std::string covariate_probs{"1"};
    std::string covariate_labels;
    std::string delta{"0.9,0.1"};
    std::string gamma{"0.5,0.5,0.5,0.5"};
    double amount_log_mean{4.0};
    double amount_log_sd{1.0};
    std::string output{"simulated.csv"};
};

struct SmoteOptions {
    std::string method{"smote"};
    std::size_t k{5};
    double ratio{1.0};
    bool time_of_day{false};
    std::string output{"resampled.csv"};
};

// ---------------------------------------------------------------------------
// Small helpers

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("{}: '{}' is not a number", key, item));
        }
    }
    return out;
}

std::string num(double v) { return fmt::format("{}", v); }

std::string file_safe(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
            c = '_';
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ingest::DataError(fmt::format("model file '{}' not found", path.string()));
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ingest::DataError(fmt::format("cannot read '{}': {}", path.string(), e.what()));
    }
}

ingest::CsvSchema schema_of(const Common& c) {
    ingest::CsvSchema s;
    s.time_column = c.time_column;
    s.label_column = c.label_column;
    s.amount_column = c.amount_column;
    s.product_column = c.product_column;
    s.numeric_columns = split_list(c.numeric_columns);
    s.categorical_columns = split_list(c.categorical_columns);
    try {
        s.time_unit = ingest::parse_time_unit(c.time_unit);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

std::vector<std::string> all_numeric(const Common& c) {
    auto cols = split_list(c.numeric_columns);
    cols.erase(std::remove(cols.begin(), cols.end(), c.amount_column), cols.end());
    cols.insert(cols.begin(), c.amount_column);
    return cols;
}

std::vector<std::string> all_categorical(const Common& c) {
    auto cols = split_list(c.categorical_columns);
    cols.erase(std::remove(cols.begin(), cols.end(), c.product_column), cols.end());
    cols.insert(cols.begin(), c.product_column);
    return cols;
}

/// Records sorted by time (stable, so equal times keep file order).
std::vector<ingest::TransactionRecord> load_records(const Common& c, std::size_t& skipped, std::ostream& err) {
    if (c.input.empty()) {
        throw ConfigError("--input is required");
    }
    auto parsed = ingest::parse_csv(fs::path(c.input), schema_of(c));
    skipped = parsed.skipped;
    if (parsed.skipped > 0) {
        err << fmt::format("warning: skipped {} unparseable row(s)\n", parsed.skipped);
    }
    if (parsed.records.empty()) {
        throw ingest::DataError(fmt::format("'{}' has no usable rows", c.input));
    }
    std::stable_sort(parsed.records.begin(), parsed.records.end(),
                     [](const auto& a, const auto& b) { return a.time_minutes < b.time_minutes; });
    return std::move(parsed.records);
}

/// Collects output files and writes the run manifest.
class Run {
public:
    Run(std::string command, const Common& common, std::map<std::string, std::string> config)
        : command_(std::move(command)), outdir_(common.outdir), seed_(common.seed), config_(std::move(config)) {
        std::error_code ec;
        fs::create_directories(outdir_, ec);
        if (ec) {
            throw ingest::DataError(fmt::format("cannot create output directory '{}': {}", outdir_.string(),
                                                ec.message()));
        }
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = outdir_ / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        if (!out) {
            throw ingest::DataError(fmt::format("cannot write '{}'", path.string()));
        }
        outputs_.push_back(name);
    }

    void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

    void warn(std::string message) { warnings_.push_back(std::move(message)); }

    void set(const std::string& key, json value) { extra_[key] = std::move(value); }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] const fs::path& outdir() const { return outdir_; }

    void finish(std::ostream& err) {
        std::string canonical = command_ + "\n";
        for (const auto& [k, v] : config_) {
            canonical += k + "=" + v + "\n";
        }
        auto outputs = outputs_;
        std::sort(outputs.begin(), outputs.end());
        json manifest{{"command", command_},
                      {"version", kVersion},
                      {"seed", seed_},
                      {"config_hash", "fnv1a64:" + fnv1a_hex(canonical)},
                      {"config", config_},
                      {"outputs", outputs},
                      {"warnings", warnings_},
                      {"libraries",
                       {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                                              EIGEN_MINOR_VERSION)},
                        {"fmt", FMT_VERSION},
                        {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                                      NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)},
                        {"cli11", CLI11_VERSION}}}};
        for (const auto& item : extra_.items()) {
            manifest[item.key()] = item.value();
        }
        write_json("manifest.json", manifest);
        for (const auto& w : warnings_) {
            err << "warning: " << w << "\n";
        }
    }

private:
    std::string command_;
    fs::path outdir_;
    std::uint64_t seed_;
    std::map<std::string, std::string> config_;
    std::vector<std::string> outputs_;
    std::vector<std::string> warnings_;
    json extra_ = json::object();
};

// ---------------------------------------------------------------------------
// eda

void cmd_eda(const Common& c, const EdaOptions& o, Run& run, std::ostream& out, std::ostream& err) {
    if (o.histogram_bins < 2 || o.mi_bins < 2) {
        throw ConfigError("bins must be at least 2");
    }
    std::size_t skipped = 0;
    const auto records = load_records(c, skipped, err);
    run.set("skipped_rows", skipped);
    const auto built = ingest::build_event_sequence(records);
    const auto& seq = built.sequence;

    const auto balance = ingest::class_balance(records);
    const double n = static_cast<double>(balance.normal + balance.fraud);
    run.write("class_balance.csv", fmt::format("class,mark,count,share\nnormal,1,{},{}\nfraud,2,{},{}\n",
                                               balance.normal, num(balance.normal / n), balance.fraud,
                                               num(balance.fraud / n)));

    for (const auto& column : all_numeric(c)) {
        const auto h = ingest::eda_grouped_log_histogram(records, column, o.histogram_bins);
        std::string text = "bin,lower,upper,count_normal,density_normal,count_fraud,density_fraud\n";
        for (std::size_t k = 0; k < o.histogram_bins; ++k) {
            text += fmt::format("{},{},{},{},{},{},{}\n", k, num(h.edges[k]), num(h.edges[k + 1]), h.counts[0][k],
                                num(h.density[0][k]), h.counts[1][k], num(h.density[1][k]));
        }
        run.write("log_histogram_" + file_safe(column) + ".csv", text);
    }

    for (const auto& column : all_categorical(c)) {
        std::string text = "category,normal,fraud,fraud_proportion\n";
        for (const auto& row : ingest::eda_contingency(records, column)) {
            text += fmt::format("{},{},{},{}\n", csv_field(row.category), row.normal, row.fraud,
                                num(row.fraud_proportion));
        }
        run.write("contingency_" + file_safe(column) + ".csv", text);
    }

    std::string gaps = "time,gap\n";
    for (const auto& g : ingest::eda_interarrival_series(seq, 0.0, o.interarrival_days * kMinutesPerDay)) {
        gaps += fmt::format("{},{}\n", num(g.time), num(g.gap));
    }
    run.write("interarrival.csv", gaps);

    const auto windows = ingest::eda_window_counts(seq, o.window_minutes);
    std::string wc = "window,start_minute";
    for (std::size_t d = 0; d < windows.days; ++d) {
        wc += fmt::format(",day_{}", d + 1);
    }
    wc += ",min,q1,median,q3,max\n";
    for (std::size_t w = 0; w < windows.windows_per_day; ++w) {
        wc += fmt::format("{},{}", w, num(static_cast<double>(w) * o.window_minutes));
        for (std::size_t d = 0; d < windows.days; ++d) {
            wc += fmt::format(",{}", windows.counts(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(w)));
        }
        for (double v : windows.summaries[w]) {
            wc += "," + num(v);
        }
        wc += "\n";
    }
    run.write("window_counts.csv", wc);

    ingest::FeatureConfig features;
    features.numeric_columns = all_numeric(c);
    features.categorical_columns = all_categorical(c);
    features.intercept = false;
    const auto matrix = ingest::build_feature_matrix(records, features).matrix;
    const auto mi = ingest::mi_difference_matrix(ingest::rows_with_label(matrix, 0),
                                                 ingest::rows_with_label(matrix, 1), o.mi_bins);
    std::string mt = "feature";
    for (const auto& name : matrix.names) {
        mt += "," + csv_field(name);
    }
    mt += "\n";
    for (Eigen::Index i = 0; i < mi.rows(); ++i) {
        mt += csv_field(matrix.names[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < mi.cols(); ++j) {
            mt += "," + num(mi(i, j));
        }
        mt += "\n";
    }
    run.write("mi_difference.csv", mt);

    out << fmt::format("{} events ({} fraud, share {:.4f}) over {} day(s)\n", records.size(), balance.fraud,
                       balance.fraud_share(), windows.days);
}

// ---------------------------------------------------------------------------
// fit

ingest::FeatureConfig logistic_features(const Common& c, const std::string& numeric, const std::string& categorical,
                                        bool time_of_day) {
    ingest::FeatureConfig f;
    f.numeric_columns = numeric == "default" ? all_numeric(c) : split_list(numeric);
    f.categorical_columns = categorical == "default" ? all_categorical(c) : split_list(categorical);
    f.time_of_day = time_of_day;
    f.intercept = true;
    return f;
}

void cmd_fit(const Common& c, const FitOptions& o, Run& run, std::ostream& out, std::ostream& err) {
    const ingest::SplitSpec split{o.train_days, o.test_days};
    try {
        split.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (o.resample != "none" && o.resample != "smote" && o.resample != "oversample" && o.resample != "undersample") {
        throw ConfigError(fmt::format("unknown resample method '{}'", o.resample));
    }
    std::size_t skipped = 0;
    const auto records = load_records(c, skipped, err);
    run.set("skipped_rows", skipped);
    const double origin = ingest::day_origin(records);
    const auto parts = ingest::time_split(records, split, origin);
    for (const auto& w : parts.warnings) {
        run.warn(w);
    }
    if (parts.train.empty()) {
        throw ingest::DataError("no records fall in the training window");
    }

    ingest::SequenceOptions seq_options;
    seq_options.origin_minutes = origin;
    seq_options.horizon_minutes = split.train_end();
    const auto built = ingest::build_event_sequence(parts.train, seq_options);
    const auto& train = built.sequence;

    MarkFitConfig mark_config;
    mark_config.seed = derive_seed(run.seed(), "mark_fit");
    mark_config.restarts = o.restarts;
    mark_config.optimizer.max_iterations = o.max_iterations;
    mark_config.initial_alpha_star = o.initial_alpha_star;
    mark_config.initial_beta = o.initial_beta;
    const auto fit = fit_mark_model(train, mark_config);
    if (!fit.converged) {
        run.warn("mark model optimiser did not converge");
    }
    if (fit.hessian_singular) {
        run.warn("mark model Hessian is singular; intervals use a pseudo-inverse");
    }
    run.write_json("mark_model.json", json{{"model", "mark_probability"},
                                           {"seed", run.seed()},
                                           {"fit", to_json(fit)},
                                           {"covariate_encoding", built.encoding.to_json()},
                                           {"origin_minutes", origin},
                                           {"split", {{"train_days", split.train_days}, {"test_days", split.test_days}}},
                                           {"train_events", train.size()}});

    const auto features = logistic_features(c, o.lr_numeric_columns, o.lr_categorical_columns, o.lr_time_of_day);
    auto lr_data = ingest::build_feature_matrix(parts.train, features);
    ingest::FeatureMatrix lr_train = lr_data.matrix;
    const std::uint64_t resample_seed = derive_seed(run.seed(), "resample");
    if (o.resample == "smote") {
        lr_train = imbalance::smote(lr_train, o.smote_k, o.resample_ratio, resample_seed).features;
    } else if (o.resample == "oversample") {
        lr_train = imbalance::random_oversample(lr_train, o.resample_ratio, resample_seed).features;
    } else if (o.resample == "undersample") {
        lr_train = imbalance::random_undersample(lr_train, o.resample_ratio, resample_seed).features;
    }
    baseline::LogisticConfig lr_config;
    lr_config.l2_penalty = o.l2;
    const auto lr = baseline::fit_logistic(lr_train, lr_config);
    run.write_json("logistic_model.json", json{{"model", "logistic_regression"},
                                               {"seed", run.seed()},
                                               {"resample", o.resample},
                                               {"training_rows", lr_train.rows()},
                                               {"feature_transform", lr_data.transform.to_json()},
                                               {"fit", lr.to_json()}});

    // Ground-process diagnostic on the rare-event times.
    std::vector<double> rare_times;
    for (const Event& e : train) {
        if (e.mark == 2) {
            rare_times.push_back(e.time);
        }
    }
    const double horizon = split.train_end();
    if (rare_times.size() < 10) {
        run.warn(fmt::format("only {} fraud events in training; ground-process fits skipped", rare_times.size()));
    } else {
        const auto poisson = fit_poisson(rare_times.size(), horizon);
        HawkesFitConfig hawkes_config;
        hawkes_config.seed = derive_seed(run.seed(), "hawkes_fit");
        const auto hawkes = fit_unmarked_hawkes(rare_times, horizon, hawkes_config);
        const auto cmp = cdf_comparison(rare_times, horizon, poisson, hawkes.params, o.cdf_simulations,
                                        derive_seed(run.seed(), "cdf"));
        run.write_json("ground_process.json", json{{"seed", run.seed()},
                                                   {"events", rare_times.size()},
                                                   {"horizon_minutes", horizon},
                                                   {"poisson", to_json(poisson)},
                                                   {"hawkes", to_json(hawkes)},
                                                   {"sup_distance_poisson", cmp.sup_distance_poisson},
                                                   {"sup_distance_hawkes", cmp.sup_distance_hawkes},
                                                   {"simulated_runs", cmp.simulated_runs},
                                                   {"simulated_gaps", cmp.simulated_gaps}});
        std::string text = "x,empirical,poisson,hawkes\n";
        for (const auto& row : cmp.rows) {
            text += fmt::format("{},{},{},{}\n", num(row.x), num(row.empirical), num(row.poisson), num(row.hawkes));
        }
        run.write("interarrival_cdf.csv", text);
    }

    out << fmt::format("mark model: log-likelihood {:.4f}, alpha* {:.4f}, beta {:.4f}, converged {}\n",
                       fit.log_likelihood, fit.params.alpha_star(), fit.params.beta(), fit.converged);
    out << fmt::format("logistic regression: {} features, {} iterations\n", lr.feature_names.size(), lr.iterations);
}

// ---------------------------------------------------------------------------
// evaluate

json metric_block(const std::vector<metrics::ScoredEvent>& scored, double threshold, const std::string& name, Run& run) {
    const auto conf = metrics::confusion(scored, threshold);
    json j{{"threshold", threshold},
           {"tp", conf.tp},
           {"fp", conf.fp},
           {"tn", conf.tn},
           {"fn", conf.fn},
           {"accuracy", conf.accuracy},
           {"precision", conf.precision},
           {"precision_undefined", conf.precision_undefined},
           {"recall", conf.recall},
           {"f1", metrics::f_beta(conf.precision, conf.recall, 1.0)},
           {"f2", metrics::f_beta(conf.precision, conf.recall, 2.0)},
           {"f0_5", metrics::f_beta(conf.precision, conf.recall, 0.5)}};
    const bool has_pos = conf.tp + conf.fn > 0;
    const bool has_neg = conf.fp + conf.tn > 0;
    auto write_curve = [&](metrics::CurveKind kind, const std::string& file) {
        const auto curve = metrics::curve_points(scored, kind);
        std::string text = "threshold,x,y\n";
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            text += fmt::format("{},{},{}\n", num(curve.thresholds[i]), num(curve.x[i]), num(curve.y[i]));
        }
        run.write(file, text);
    };
    if (has_pos && has_neg) {
        j["roc_auc"] = metrics::roc_auc(scored);
        write_curve(metrics::CurveKind::Roc, "roc_curve_" + name + ".csv");
    } else {
        j["roc_auc"] = nullptr;
        run.warn(fmt::format("ROC AUC undefined for {}: test partition has a single class", name));
    }
    if (has_pos) {
        j["pr_auc"] = metrics::pr_auc(scored);
        write_curve(metrics::CurveKind::Pr, "pr_curve_" + name + ".csv");
    } else {
        j["pr_auc"] = nullptr;
        run.warn(fmt::format("PR AUC undefined for {}: test partition has no fraud", name));
    }
    return j;
}

metrics::CostProfile cost_profile_of(const std::string& name) {
    if (name == "balanced") {
        return metrics::CostProfile::Balanced;
    }
    if (name == "fn_costly") {
        return metrics::CostProfile::FalseNegativesCostly;
    }
    if (name == "fp_costly") {
        return metrics::CostProfile::FalsePositivesCostly;
    }
    throw ConfigError(fmt::format("unknown cost profile '{}' (balanced, fn_costly, fp_costly)", name));
}

void cmd_evaluate(const Common& c, const EvaluateOptions& o, Run& run, std::ostream& out, std::ostream& err) {
    const auto profile = cost_profile_of(o.cost_profile);
    if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) {
        throw ConfigError("threshold must lie in [0, 1]");
    }
    const fs::path model_dir = o.model_dir.empty() ? fs::path(c.outdir) : fs::path(o.model_dir);
    const json mark_json = read_json(model_dir / "mark_model.json");
    const json lr_json = read_json(model_dir / "logistic_model.json");

    MarkModelParams params;
    ingest::CovariateEncoding encoding;
    double origin = 0.0;
    ingest::SplitSpec split;
    baseline::LogisticModel lr;
    ingest::FeatureTransform transform;
    try {
        params = mark_params_from_json(mark_json.at("fit").at("params"));
        encoding = ingest::CovariateEncoding::from_json(mark_json.at("covariate_encoding"));
        origin = mark_json.at("origin_minutes").get<double>();
        split.train_days = mark_json.at("split").at("train_days").get<int>();
        split.test_days = mark_json.at("split").at("test_days").get<int>();
        lr = baseline::LogisticModel::from_json(lr_json.at("fit"));
        transform = ingest::FeatureTransform::from_json(lr_json.at("feature_transform"));
    } catch (const json::exception& e) {
        throw ingest::DataError(fmt::format("malformed model file: {}", e.what()));
    }

    std::size_t skipped = 0;
    const auto records = load_records(c, skipped, err);
    run.set("skipped_rows", skipped);
    std::vector<ingest::TransactionRecord> window;
    for (const auto& r : records) {
        const double t = r.time_minutes - origin;
        if (t >= 0.0 && t < split.test_end()) {
            window.push_back(r);
        }
    }
    if (window.empty()) {
        throw ingest::DataError("no records fall in the train/test window");
    }
    ingest::SequenceOptions seq_options;
    seq_options.origin_minutes = origin;
    seq_options.horizon_minutes = split.test_end();
    const auto seq = ingest::build_event_sequence(window, seq_options, encoding, true).sequence;
    if (seq.covariate_count() != params.covariate_count()) {
        throw ingest::DataError("covariate encoding does not match the fitted model");
    }

    // Train history is carried into the test period; only test events are scored.
    const auto all_scores = score_sequence(seq, params);
    std::vector<EventScore> test_scores;
    std::vector<ingest::TransactionRecord> test_records;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].time >= split.train_end()) {
            test_scores.push_back(all_scores[i]);
            test_records.push_back(window[i]);
        }
    }
    if (test_scores.empty()) {
        throw ingest::DataError("test partition is empty");
    }

    const auto lr_matrix = ingest::apply_feature_transform(test_records, transform);
    const auto lr_probs = baseline::predict_logistic(lr, lr_matrix.values);
    std::vector<double> mark_probs;
    std::vector<int> labels;
    for (const auto& s : test_scores) {
        mark_probs.push_back(s.probability);
        labels.push_back(s.mark == 2 ? 1 : 0);
    }
    const auto fused = baseline::fuse(mark_probs, lr_probs);

    json models = json::object();
    models["mark_model"] = metric_block(metrics::make_scored(mark_probs, labels), o.threshold, "mark_model", run);
    models["logistic"] = metric_block(metrics::make_scored(lr_probs, labels), o.threshold, "logistic", run);
    models["fusion"] = metric_block(metrics::make_scored(fused, labels), o.threshold, "fusion", run);
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    run.write_json("metrics.json", json{{"seed", run.seed()},
                                        {"test_events", labels.size()},
                                        {"test_frauds", positives},
                                        {"recommended_metric", metrics::metric_advisor(o.positive_important, profile)},
                                        {"models", models}});

    std::string timeline = "index,time,covariate,mark,probability\n";
    for (std::size_t i = 0; i < std::min(o.timeline, test_scores.size()); ++i) {
        const auto& s = test_scores[i];
        timeline += fmt::format("{},{},{},{},{}\n", i, num(s.time), s.covariate, s.mark, num(s.probability));
    }
    run.write("timeline.csv", timeline);

    std::string scores = "index,time,covariate,mark,mark_model,logistic,fusion\n";
    for (std::size_t i = 0; i < test_scores.size(); ++i) {
        const auto& s = test_scores[i];
        scores += fmt::format("{},{},{},{},{},{},{}\n", i, num(s.time), s.covariate, s.mark, num(mark_probs[i]),
                              num(lr_probs[i]), num(fused[i]));
    }
    run.write("scores.csv", scores);

    auto show = [](const json& v) { return v.is_null() ? std::string("undefined") : fmt::format("{:.4f}", v.get<double>()); };
    out << fmt::format("{} test events, {} fraud\n", labels.size(), positives);
    for (const char* name : {"mark_model", "logistic", "fusion"}) {
        out << fmt::format("{:<11} PR AUC {}  ROC AUC {}  accuracy {:.4f}\n", name, show(models[name]["pr_auc"]),
                           show(models[name]["roc_auc"]), models[name]["accuracy"].get<double>());
    }
}

// ---------------------------------------------------------------------------
// simulate

void cmd_simulate(const Common& c, const SimulateOptions& o, Run& run, std::ostream& out) {
    if (!(o.horizon > 0.0)) {
        throw ConfigError("horizon must be positive");
    }
    if (o.process != "poisson" && o.process != "hawkes" && o.process != "marked") {
        throw ConfigError(fmt::format("unknown process '{}' (poisson, hawkes, marked)", o.process));
    }
    if (o.process != "poisson" && !(o.alpha < 1.0)) {
        throw ConfigError(fmt::format("branching ratio alpha = {} is not below 1; the process is not stationary",
                                      o.alpha));
    }
    const auto unit = schema_of(c).time_unit;
    const std::uint64_t sim_seed = derive_seed(run.seed(), "simulate");
    const UnmarkedHawkesParams ground{o.mu, o.alpha, o.beta};

    std::vector<double> times;
    std::vector<int> marks;
    std::vector<int> covariates;
    int covariate_count = 1;
    try {
        if (o.process == "poisson") {
            if (!(o.rate >= 0.0)) {
                throw ConfigError("rate must be non-negative");
            }
            times = simulate_poisson(o.rate, o.horizon, sim_seed);
        } else if (o.process == "hawkes") {
            ground.validate();
            times = simulate_hawkes_unmarked(ground, o.horizon, sim_seed);
        } else {
            MarkedSimConfig config;
            config.horizon = o.horizon;
            config.seed = sim_seed;
            config.covariate_probs = parse_numbers(o.covariate_probs, "covariate-probs");
            config.ground = ground;
            config.delta = parse_numbers(o.delta, "delta");
            config.gamma = parse_numbers(o.gamma, "gamma");
            const auto Z = config.covariate_probs.size();
            if (Z == 0 || config.delta.size() % Z != 0) {
                throw ConfigError("delta must hold covariate-count rows of equal length");
            }
            config.mark_count = static_cast<int>(config.delta.size() / Z);
            config.validate();
            const auto seq = simulate_marked_hawkes(config);
            times = seq.times();
            marks = seq.marks();
            for (const Event& e : seq) {
                covariates.push_back(e.covariate);
            }
            covariate_count = static_cast<int>(Z);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    if (marks.empty()) {
        marks.assign(times.size(), 1);
        covariates.assign(times.size(), 1);
    }
    if (std::any_of(marks.begin(), marks.end(), [](int m) { return m > 2; })) {
        throw ConfigError("the transaction schema only carries two marks");
    }

    auto labels = split_list(o.covariate_labels);
    if (labels.empty()) {
        for (int z = 1; z <= covariate_count; ++z) {
            labels.push_back(fmt::format("P{}", z));
        }
    }
    if (static_cast<int>(labels.size()) != covariate_count) {
        throw ConfigError(fmt::format("{} covariate labels given for {} covariates", labels.size(), covariate_count));
    }

    Rng amount_rng(derive_seed(run.seed(), "amount"));
    std::lognormal_distribution<double> amount(o.amount_log_mean, o.amount_log_sd);
    std::string text = fmt::format("{},{},{},{}\n", csv_field(c.time_column), csv_field(c.label_column),
                                   csv_field(c.amount_column), csv_field(c.product_column));
    for (std::size_t i = 0; i < times.size(); ++i) {
        text += fmt::format("{},{},{},{}\n", num(ingest::from_minutes(times[i], unit)), marks[i] - 1,
                            num(amount(amount_rng)), csv_field(labels[static_cast<std::size_t>(covariates[i] - 1)]));
    }
    run.write(o.output, text);
    run.write_json("covariate_map.json", ingest::CovariateEncoding(labels).to_json());
    const auto frauds = static_cast<std::size_t>(std::count(marks.begin(), marks.end(), 2));
    run.set("generated_events", times.size());
    out << fmt::format("{} events ({} fraud) over {} minutes\n", times.size(), frauds, num(o.horizon));
}

// ---------------------------------------------------------------------------
// smote

void cmd_smote(const Common& c, const SmoteOptions& o, Run& run, std::ostream& out, std::ostream& err) {
    if (o.method != "smote" && o.method != "oversample" && o.method != "undersample") {
        throw ConfigError(fmt::format("unknown method '{}' (smote, oversample, undersample)", o.method));
    }
    if (!(o.ratio > 0.0)) {
        throw ConfigError("ratio must be positive");
    }
    std::size_t skipped = 0;
    const auto records = load_records(c, skipped, err);
    run.set("skipped_rows", skipped);
    ingest::FeatureConfig features;
    features.numeric_columns = all_numeric(c);
    features.categorical_columns = all_categorical(c);
    features.time_of_day = o.time_of_day;
    features.intercept = false;
    const auto matrix = ingest::build_feature_matrix(records, features).matrix;

    const std::uint64_t seed = derive_seed(run.seed(), "smote");
    imbalance::ResampleResult result;
    if (o.method == "smote") {
        result = imbalance::smote(matrix, o.k, o.ratio, seed);
    } else if (o.method == "oversample") {
        result = imbalance::random_oversample(matrix, o.ratio, seed);
    } else {
        result = imbalance::random_undersample(matrix, o.ratio, seed);
    }

    std::string text;
    for (const auto& name : result.features.names) {
        text += csv_field(name) + ",";
    }
    text += "label,synthetic,source,base,neighbor,u\n";
    for (std::size_t i = 0; i < result.features.rows(); ++i) {
        for (Eigen::Index j = 0; j < result.features.values.cols(); ++j) {
            text += num(result.features.values(static_cast<Eigen::Index>(i), j)) + ",";
        }
        if (result.synthetic[i]) {
            const auto& p = result.provenance[i];
            text += fmt::format("{},1,,{},{},{}\n", result.features.labels[i], p.base, p.neighbor, num(p.u));
        } else {
            text += fmt::format("{},0,{},,,\n", result.features.labels[i], result.original_index[i]);
        }
    }
    run.write(o.output, text);
    const auto ones = std::count(result.features.labels.begin(), result.features.labels.end(), 1);
    out << fmt::format("{} rows in, {} rows out ({} label 0, {} label 1)\n", matrix.rows(), result.features.rows(),
                       static_cast<std::ptrdiff_t>(result.features.rows()) - ones, ones);
}

// ---------------------------------------------------------------------------
// Argument handling

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "key = value file; command-line flags take precedence");
    app->add_option("--input", c.input, "transaction CSV");
    app->add_option("--outdir", c.outdir, "output directory");
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--time-unit", c.time_unit, "unit of the CSV time column")
        ->check(CLI::IsMember({"seconds", "minutes"}));
    app->add_option("--time-column", c.time_column);
    app->add_option("--label-column", c.label_column);
    app->add_option("--amount-column", c.amount_column);
    app->add_option("--product-column", c.product_column, "categorical column used as the covariate");
    app->add_option("--numeric-columns", c.numeric_columns, "comma-separated extra numeric columns");
    app->add_option("--categorical-columns", c.categorical_columns, "comma-separated extra categorical columns");
}

/// Reads `key = value` lines ('#' starts a comment) into `--key=value` arguments.
std::vector<std::string> config_arguments(const std::string& path, const CLI::App& sub) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    }
    std::vector<std::string> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected key = value", path, number));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config" || sub.get_option_no_throw("--" + key) == nullptr) {
            throw ConfigError(fmt::format("{}:{}: unknown key '{}' for '{}'", path, number, key, sub.get_name()));
        }
        out.push_back(fmt::format("--{}={}", key, value));
    }
    return out;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    return std::nullopt;
}

/// Effective value of every option except help, config and outdir.
std::map<std::string, std::string> effective_config(const CLI::App& sub) {
    std::map<std::string, std::string> out;
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config" || name == "outdir") {
            continue;
        }
        out[name] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Marked Hawkes fraud classifier", "markhawkes"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    EdaOptions eda;
    FitOptions fit;
    EvaluateOptions evaluate;
    SimulateOptions simulate;
    SmoteOptions smote;

    auto* eda_cmd = app.add_subcommand("eda", "exploratory aggregations of a transaction CSV");
    add_common(eda_cmd, common);
    eda_cmd->add_option("--histogram-bins", eda.histogram_bins);
    eda_cmd->add_option("--mi-bins", eda.mi_bins, "equal-frequency bins for mutual information");
    eda_cmd->add_option("--interarrival-days", eda.interarrival_days, "days covered by interarrival.csv");
    eda_cmd->add_option("--window-minutes", eda.window_minutes);

    auto* fit_cmd = app.add_subcommand("fit", "fit the mark model and the logistic baseline on the training window");
    add_common(fit_cmd, common);
    fit_cmd->add_option("--train-days", fit.train_days);
    fit_cmd->add_option("--test-days", fit.test_days);
    fit_cmd->add_option("--restarts", fit.restarts);
    fit_cmd->add_option("--max-iterations", fit.max_iterations);
    fit_cmd->add_option("--initial-alpha-star", fit.initial_alpha_star);
    fit_cmd->add_option("--initial-beta", fit.initial_beta);
    fit_cmd->add_option("--l2", fit.l2, "logistic regression L2 penalty");
    fit_cmd->add_option("--lr-numeric-columns", fit.lr_numeric_columns, "comma list or 'default'");
    fit_cmd->add_option("--lr-categorical-columns", fit.lr_categorical_columns, "comma list or 'default'");
    fit_cmd->add_option("--lr-time-of-day", fit.lr_time_of_day, "add sin/cos time-of-day features");
    fit_cmd->add_option("--resample", fit.resample, "none, smote, oversample or undersample");
    fit_cmd->add_option("--smote-k", fit.smote_k);
    fit_cmd->add_option("--resample-ratio", fit.resample_ratio);
    fit_cmd->add_option("--cdf-simulations", fit.cdf_simulations, "simulated horizons for the Hawkes CDF");

    auto* eval_cmd = app.add_subcommand("evaluate", "score the test window with fitted models");
    add_common(eval_cmd, common);
    eval_cmd->add_option("--model-dir", evaluate.model_dir, "directory with fitted models (default: outdir)");
    eval_cmd->add_option("--timeline", evaluate.timeline, "test events in timeline.csv");
    eval_cmd->add_option("--threshold", evaluate.threshold);
    eval_cmd->add_option("--cost-profile", evaluate.cost_profile, "balanced, fn_costly or fp_costly");
    eval_cmd->add_option("--positive-important", evaluate.positive_important);

    auto* sim_cmd = app.add_subcommand("simulate", "write a simulated transaction CSV");
    add_common(sim_cmd, common);
    sim_cmd->add_option("--process", simulate.process, "poisson, hawkes or marked");
    sim_cmd->add_option("--horizon", simulate.horizon, "minutes");
    sim_cmd->add_option("--rate", simulate.rate, "Poisson rate per minute");
    sim_cmd->add_option("--mu", simulate.mu);
    sim_cmd->add_option("--alpha", simulate.alpha, "branching ratio");
    sim_cmd->add_option("--beta", simulate.beta, "decay rate per minute");
    sim_cmd->add_option("--covariate-probs", simulate.covariate_probs);
    sim_cmd->add_option("--covariate-labels", simulate.covariate_labels);
    sim_cmd->add_option("--delta", simulate.delta, "background mark probabilities, row per covariate");
    sim_cmd->add_option("--gamma", simulate.gamma, "triggering probabilities [covariate][source][target]");
    sim_cmd->add_option("--amount-log-mean", simulate.amount_log_mean);
    sim_cmd->add_option("--amount-log-sd", simulate.amount_log_sd);
    sim_cmd->add_option("--output", simulate.output, "CSV file name inside outdir");

    auto* smote_cmd = app.add_subcommand("smote", "rebalance the feature matrix of a transaction CSV");
    add_common(smote_cmd, common);
    smote_cmd->add_option("--method", smote.method, "smote, oversample or undersample");
    smote_cmd->add_option("--k", smote.k);
    smote_cmd->add_option("--ratio", smote.ratio, "target minority / majority ratio");
    smote_cmd->add_option("--time-of-day", smote.time_of_day);
    smote_cmd->add_option("--output", smote.output, "CSV file name inside outdir");

    try {
        std::vector<std::string> full = args;
        if (!args.empty()) {
            if (const auto* sub = app.get_subcommand_no_throw(args[0]); sub != nullptr) {
                if (const auto path = find_config(args)) {
                    const auto extra = config_arguments(*path, *sub);
                    full.insert(full.begin() + 1, extra.begin(), extra.end());
                }
            }
        }
        std::vector<std::string> reversed(full.rbegin(), full.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        Run run(sub->get_name(), common, effective_config(*sub));
        if (sub == eda_cmd) {
            cmd_eda(common, eda, run, out, err);
        } else if (sub == fit_cmd) {
            cmd_fit(common, fit, run, out, err);
        } else if (sub == eval_cmd) {
            cmd_evaluate(common, evaluate, run, out, err);
        } else if (sub == sim_cmd) {
            cmd_simulate(common, simulate, run, out);
        } else {
            cmd_smote(common, smote, run, out, err);
        }
        run.finish(err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ingest::DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const SimulationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        // Includes ValidationError: the data cannot support the request.
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace markhawkes::cli

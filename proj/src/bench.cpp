#include "caeac/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "caeac/model_io.hpp"
#include "caeac/rng.hpp"

namespace caeac {

EvalMode EvalMode::holdout(double fraction) {
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw ConfigError("holdout fraction must lie strictly between 0 and 1");
  EvalMode mode;
  mode.holdout_fraction = fraction;
  return mode;
}

std::string EvalMode::to_string() const {
  if (!holdout_fraction.has_value()) return "train";
  return "holdout:" + format_double(*holdout_fraction);
}

EvalMode EvalMode::parse(const std::string& text) {
  if (text == "train") return train_set();
  const std::string prefix = "holdout:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return holdout(std::stod(text.substr(prefix.size())));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("cannot parse holdout fraction in eval mode: " + text);
    }
  }
  throw ConfigError("unknown eval mode '" + text + "' (use train or holdout:F)");
}

std::size_t worker_thread_cap() {
  if (const char* env = std::getenv("CAEAC_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1)
      throw ConfigError("CAEAC_THREADS must be a positive integer");
    return static_cast<std::size_t>(value);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_thread_cap(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& thread : threads) thread.join();
}

void validate_config(const Dataset& dataset, const TrialConfig& config) {
  if (dataset.size() == 0) throw DataError("empty dataset");
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  // Reuses the model's own parameter validation.
  try {
    CaeacConfig probe{config.lambda, config.a_max, config.variant,
                      config.predict_metric};
    CaeacModel model(probe);
    (void)model;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.eval_mode.holdout_fraction.has_value()) {
    const double f = *config.eval_mode.holdout_fraction;
    const auto n = static_cast<double>(dataset.size());
    const auto n_eval = static_cast<std::size_t>(std::llround(f * n));
    if (n_eval == 0 || n_eval >= dataset.size())
      throw ConfigError("holdout fraction leaves an empty train or eval split");
  }
}

TrialResult run_single_trial(const Dataset& dataset, const TrialConfig& config,
                             std::size_t trial) {
  TrialResult result;
  result.trial = trial;
  result.seed = trial_seed(config.seed, trial);
  try {
    std::mt19937_64 eng(result.seed);
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    fisher_yates(order, eng);

    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    features.reserve(order.size());
    labels.reserve(order.size());
    for (const std::size_t idx : order) {
      features.push_back(dataset.features[idx]);
      labels.push_back(dataset.labels[idx]);
    }

    std::size_t n_train = dataset.size();
    if (config.eval_mode.holdout_fraction.has_value()) {
      const auto n_eval = static_cast<std::size_t>(std::llround(
          *config.eval_mode.holdout_fraction * static_cast<double>(dataset.size())));
      n_train = dataset.size() - n_eval;
    }

    if (config.normalize) {
      // Scaling bounds come from the training split only, then apply to all
      // rows so held-out points are mapped through the same transform.
      const std::size_t d = features.front().size();
      std::vector<double> lo(d, std::numeric_limits<double>::infinity());
      std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
      for (std::size_t r = 0; r < n_train; ++r)
        for (std::size_t i = 0; i < d; ++i) {
          lo[i] = std::min(lo[i], features[r][i]);
          hi[i] = std::max(hi[i], features[r][i]);
        }
      for (auto& row : features)
        for (std::size_t i = 0; i < d; ++i)
          row[i] = hi[i] > lo[i] ? (row[i] - lo[i]) / (hi[i] - lo[i]) : 0.0;
    }

    CaeacConfig model_config{config.lambda, config.a_max, config.variant,
                             config.predict_metric};
    CaeacModel model(model_config);
    std::vector<LabeledPoint> batch;
    batch.reserve(n_train);
    for (std::size_t i = 0; i < n_train; ++i)
      batch.push_back({features[i], labels[i]});

    const auto start = std::chrono::steady_clock::now();
    model.fit(batch);
    const auto stop = std::chrono::steady_clock::now();
    result.train_seconds =
        std::chrono::duration<double>(stop - start).count();

    const std::size_t eval_begin =
        config.eval_mode.holdout_fraction.has_value() ? n_train : 0;
    const std::vector<std::vector<double>> eval_features(
        features.begin() + eval_begin, features.end());
    const std::vector<std::string> eval_labels(labels.begin() + eval_begin,
                                               labels.end());

    const auto predicted = model.predict_batch(eval_features);
    result.accuracy = accuracy(predicted, eval_labels);
    result.nmi = nmi(predicted, eval_labels);
    result.ari = eval_labels.size() >= 2 ? ari(predicted, eval_labels) : 1.0;
    result.node_count = model.total_node_count();
    result.cluster_count = model.total_cluster_count();
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

Aggregate aggregate_of(const std::vector<TrialResult>& trials,
                       const std::function<double(const TrialResult&)>& get) {
  Aggregate out;
  std::vector<double> values;
  for (const auto& trial : trials)
    if (!trial.failed()) values.push_back(get(trial));
  if (values.empty()) return out;
  for (const double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) {
      const double diff = v - out.mean;
      ss += diff * diff;
    }
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

void fill_aggregates(EvalReport& report) {
  report.successful_trials = 0;
  for (const auto& trial : report.trials)
    if (!trial.failed()) ++report.successful_trials;
  report.accuracy = aggregate_of(report.trials, [](const auto& t) { return t.accuracy; });
  report.nmi = aggregate_of(report.trials, [](const auto& t) { return t.nmi; });
  report.ari = aggregate_of(report.trials, [](const auto& t) { return t.ari; });
  report.node_count = aggregate_of(
      report.trials, [](const auto& t) { return static_cast<double>(t.node_count); });
  report.cluster_count = aggregate_of(
      report.trials, [](const auto& t) { return static_cast<double>(t.cluster_count); });
  report.train_seconds =
      aggregate_of(report.trials, [](const auto& t) { return t.train_seconds; });
}

EvalReport make_report_shell(const Dataset& dataset, const TrialConfig& config) {
  EvalReport report;
  report.dataset_name = dataset.name;
  report.n = dataset.size();
  report.d = dataset.dimension();
  report.classes = dataset.class_count();
  report.provenance = dataset.provenance;
  report.config = config;
  report.trials.resize(config.trials);
  return report;
}

}  // namespace

EvalReport run_trials(const Dataset& dataset, const TrialConfig& config) {
  validate_config(dataset, config);
  EvalReport report = make_report_shell(dataset, config);
  parallel_for(config.trials, [&](std::size_t t) {
    report.trials[t] = run_single_trial(dataset, config, t);
  });
  fill_aggregates(report);
  return report;
}

GridSpec GridSpec::defaults() {
  GridSpec grid;
  for (std::size_t lambda = 10; lambda <= 100; lambda += 10)
    grid.lambdas.push_back(lambda);
  for (int a_max = 2; a_max <= 20; a_max += 2) grid.a_maxes.push_back(a_max);
  return grid;
}

GridSearchResult grid_search(const Dataset& dataset, const TrialConfig& base,
                             const GridSpec& grid) {
  if (grid.lambdas.empty() || grid.a_maxes.empty())
    throw ConfigError("grid search requires nonempty lambda and a_max lists");
  GridSearchResult result;
  std::vector<TrialConfig> configs;
  for (const std::size_t lambda : grid.lambdas)
    for (const int a_max : grid.a_maxes) {
      TrialConfig cell = base;
      cell.lambda = lambda;
      cell.a_max = a_max;
      configs.push_back(cell);
      result.cells.push_back(make_report_shell(dataset, cell));
    }

  // One flat task list over (cell, trial) so a single worker pool covers the
  // whole grid; each task writes its own slot.
  const std::size_t per_cell = base.trials;
  parallel_for(configs.size() * per_cell, [&](std::size_t task) {
    const std::size_t cell = task / per_cell;
    const std::size_t trial = task % per_cell;
    // Configuration errors surface identically on every trial of the cell.
    try {
      validate_config(dataset, configs[cell]);
    } catch (const std::exception& e) {
      TrialResult failed;
      failed.trial = trial;
      failed.seed = trial_seed(configs[cell].seed, trial);
      failed.error = e.what();
      result.cells[cell].trials[trial] = failed;
      return;
    }
    result.cells[cell].trials[trial] =
        run_single_trial(dataset, configs[cell], trial);
  });

  for (auto& cell : result.cells) fill_aggregates(cell);
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    if (result.cells[c].successful_trials == 0) continue;
    if (!result.best_index.has_value() ||
        result.cells[c].accuracy.mean >
            result.cells[*result.best_index].accuracy.mean)
      result.best_index = c;
  }
  return result;
}

ComparisonResult compare_algorithms(
    const std::vector<std::pair<std::string, std::vector<double>>>& algorithms) {
  if (algorithms.size() < 2)
    throw ConfigError("comparison requires at least 2 algorithms");
  std::vector<std::vector<double>> matrix;
  ComparisonResult result;
  for (const auto& [name, values] : algorithms) {
    result.names.push_back(name);
    matrix.push_back(values);
  }
  try {
    result.stats = friedman_nemenyi(matrix, 0.05);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return result;
}

// --- JSON emission ------------------------------------------------------------

namespace {

void append_json_string_value(std::string& out, const std::string& text) {
  out += '"';
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_aggregate(std::string& out, const char* key, const Aggregate& agg) {
  out += '"';
  out += key;
  out += "\":{\"mean\":";
  out += format_double(agg.mean);
  out += ",\"std\":";
  out += format_double(agg.stddev);
  out += '}';
}

void append_config(std::string& out, const TrialConfig& config) {
  out += "\"config\":{\"variant\":";
  append_json_string_value(out, to_string(config.variant));
  out += ",\"lambda\":" + std::to_string(config.lambda);
  out += ",\"a_max\":" + std::to_string(config.a_max);
  out += ",\"seed\":" + std::to_string(config.seed);
  out += ",\"trials\":" + std::to_string(config.trials);
  out += ",\"eval_mode\":";
  append_json_string_value(out, config.eval_mode.to_string());
  out += ",\"predict_metric\":";
  append_json_string_value(out, to_string(config.predict_metric));
  out += ",\"normalize\":";
  out += config.normalize ? "true" : "false";
  out += ",\"prng\":";
  append_json_string_value(out, kPrngDescription);
  out += '}';
}

void append_report_body(std::string& out, const EvalReport& report) {
  out += "{\"dataset\":{\"name\":";
  append_json_string_value(out, report.dataset_name);
  out += ",\"n\":" + std::to_string(report.n);
  out += ",\"d\":" + std::to_string(report.d);
  out += ",\"classes\":" + std::to_string(report.classes);
  out += ",\"provenance\":";
  append_json_string_value(out, report.provenance);
  out += "},";
  append_config(out, report.config);
  out += ",\"trials\":[";
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const auto& trial = report.trials[t];
    if (t > 0) out += ',';
    out += "{\"trial\":" + std::to_string(trial.trial);
    out += ",\"seed\":" + std::to_string(trial.seed);
    if (trial.failed()) {
      out += ",\"error\":";
      append_json_string_value(out, trial.error);
    } else {
      out += ",\"accuracy\":" + format_double(trial.accuracy);
      out += ",\"nmi\":" + format_double(trial.nmi);
      out += ",\"ari\":" + format_double(trial.ari);
      out += ",\"node_count\":" + std::to_string(trial.node_count);
      out += ",\"cluster_count\":" + std::to_string(trial.cluster_count);
      out += ",\"train_seconds\":" + format_double(trial.train_seconds);
    }
    out += '}';
  }
  out += "],\"aggregate\":{\"successful_trials\":" +
         std::to_string(report.successful_trials) + ',';
  append_aggregate(out, "accuracy", report.accuracy);
  out += ',';
  append_aggregate(out, "nmi", report.nmi);
  out += ',';
  append_aggregate(out, "ari", report.ari);
  out += ',';
  append_aggregate(out, "node_count", report.node_count);
  out += ',';
  append_aggregate(out, "cluster_count", report.cluster_count);
  out += ',';
  append_aggregate(out, "train_seconds", report.train_seconds);
  out += "}}";
}

}  // namespace

std::string EvalReport::to_json() const {
  std::string out = "{\"schema_version\":\"1\",\"kind\":\"eval_report\",\"report\":";
  append_report_body(out, *this);
  out += '}';
  return out;
}

std::string GridSearchResult::to_json() const {
  std::string out = "{\"schema_version\":\"1\",\"kind\":\"grid_report\",\"cells\":[";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c > 0) out += ',';
    append_report_body(out, cells[c]);
  }
  out += "],\"best\":";
  if (best_index.has_value()) {
    const auto& best = cells[*best_index];
    out += "{\"lambda\":" + std::to_string(best.config.lambda);
    out += ",\"a_max\":" + std::to_string(best.config.a_max);
    out += ",\"accuracy_mean\":" + format_double(best.accuracy.mean);
    out += "}";
  } else {
    out += "null";
  }
  out += '}';
  return out;
}

std::string ComparisonResult::to_json() const {
  std::string out =
      "{\"schema_version\":\"1\",\"kind\":\"comparison\",\"alpha\":0.05,"
      "\"algorithms\":[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ',';
    append_json_string_value(out, names[i]);
  }
  out += "],\"friedman_statistic\":" + format_double(stats.statistic);
  out += ",\"friedman_p\":" + format_double(stats.p_value);
  out += ",\"mean_ranks\":{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ',';
    append_json_string_value(out, names[i]);
    out += ':' + format_double(stats.mean_ranks[i]);
  }
  out += "},\"critical_distance\":" + format_double(stats.critical_distance);
  out += ",\"significant_pairs\":[";
  bool first = true;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (!stats.significant[i][j]) continue;
      if (!first) out += ',';
      first = false;
      out += '[';
      append_json_string_value(out, names[i]);
      out += ',';
      append_json_string_value(out, names[j]);
      out += ']';
    }
  out += "]}";
  return out;
}

}  // namespace caeac

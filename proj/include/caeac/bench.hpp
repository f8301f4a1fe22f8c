#pragma once
// Benchmark harness: seeded repeated trials, (lambda, a_max) grid search and
// cross-algorithm statistical comparison, with deterministic JSON reports.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caeac/caeac.hpp"
#include "caeac/dataset.hpp"
#include "caeac/metrics.hpp"

namespace caeac {

struct EvalMode {
  static EvalMode train_set() { return {}; }
  static EvalMode holdout(double fraction);
  // Empty = evaluate on the training rows themselves.
  std::optional<double> holdout_fraction;
  std::string to_string() const;
  static EvalMode parse(const std::string& text);  // "train" | "holdout:F"
};

struct TrialConfig {
  CimVariant variant = CimVariant::kBase;
  std::size_t lambda = 50;
  int a_max = 10;
  std::uint64_t seed = 0;
  std::size_t trials = 20;
  EvalMode eval_mode;
  PredictMetric predict_metric = PredictMetric::kCim;
  bool normalize = false;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // derived per-trial seed
  double accuracy = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  std::size_t node_count = 0;
  std::size_t cluster_count = 0;
  double train_seconds = 0.0;
  std::string error;  // nonempty = trial aborted; metrics fields unset
  bool failed() const { return !error.empty(); }
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample std over successful trials
};

struct EvalReport {
  std::string dataset_name;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t classes = 0;
  std::string provenance;
  TrialConfig config;
  std::vector<TrialResult> trials;
  Aggregate accuracy, nmi, ari, node_count, cluster_count, train_seconds;
  std::size_t successful_trials = 0;

  std::string to_json() const;  // deterministic except timing fields
};

// Runs config.trials seeded trials: shuffle rows with the trial seed, fit
// CAEAC, evaluate per eval_mode, collect metrics. Trial errors are recorded
// in the report and excluded from aggregates. Worker threads are capped by
// the CAEAC_THREADS environment variable.
EvalReport run_trials(const Dataset& dataset, const TrialConfig& config);

struct GridSpec {
  std::vector<std::size_t> lambdas;  // default 10..100 step 10
  std::vector<int> a_maxes;          // default 2..20 step 2
  static GridSpec defaults();
};

struct GridSearchResult {
  std::vector<EvalReport> cells;          // lambda-major order
  std::optional<std::size_t> best_index;  // none when every cell failed
  std::string to_json() const;
};

// run_trials per grid cell (same base seed everywhere, so every cell sees the
// same trial reorderings). Best cell = highest mean accuracy among cells with
// at least one successful trial; ties break toward smaller lambda, then
// smaller a_max.
GridSearchResult grid_search(const Dataset& dataset, const TrialConfig& base,
                             const GridSpec& grid);

struct ComparisonResult {
  std::vector<std::string> names;
  FriedmanNemenyiResult stats;
  std::string to_json() const;
};

// Paired-measurement comparison across algorithms at alpha = 0.05. Requires
// >= 2 algorithms with equal-length value lists.
ComparisonResult compare_algorithms(
    const std::vector<std::pair<std::string, std::vector<double>>>& algorithms);

// Worker cap from CAEAC_THREADS (>= 1; hardware concurrency when unset).
std::size_t worker_thread_cap();

}  // namespace caeac

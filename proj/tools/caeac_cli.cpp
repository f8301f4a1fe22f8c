// Command-line harness for the correntropy-based growing classifier.
//
// Subcommands:
//   train    fit a classifier on a labeled CSV and write the model as JSON
//   eval     score a saved model against a labeled CSV
//   grid     grid search over (lambda, a_max) with seeded repeated trials
//   compare  Friedman/Nemenyi comparison across metric-value lists
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caeac/bench.hpp"
#include "caeac/caeac.hpp"
#include "caeac/dataset.hpp"
#include "caeac/metrics.hpp"
#include "caeac/model_io.hpp"
#include "caeac/rng.hpp"

namespace {

struct DataOpts {
  std::string path;
  int label_col = -1;
  std::string label_name;
  bool header = false;
  bool normalize = false;
};

void add_data_options(CLI::App* sub, DataOpts* opts) {
  sub->add_option("--data", opts->path, "labeled CSV file")->required();
  sub->add_option("--label-col", opts->label_col,
                  "0-based index of the label column");
  sub->add_option("--label-name", opts->label_name,
                  "label column name (requires --header)");
  sub->add_flag("--header", opts->header, "first CSV row is a header");
  sub->add_flag("--normalize", opts->normalize,
                "min-max scale features (off by default)");
}

caeac::Dataset load_from_opts(const DataOpts& opts) {
  const bool by_name = !opts.label_name.empty();
  const bool by_index = opts.label_col >= 0;
  if (by_name == by_index)
    throw caeac::ConfigError(
        "exactly one of --label-col and --label-name must be given");
  const caeac::LabelColumn column =
      by_name ? caeac::LabelColumn::name(opts.label_name)
              : caeac::LabelColumn::index(static_cast<std::size_t>(opts.label_col));
  return caeac::load_csv(opts.path, column, opts.header);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw caeac::DataError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw caeac::DataError("cannot open output file: " + path);
  out << text << "\n";
  if (!out) throw caeac::DataError("failed writing output file: " + path);
}

caeac::CimVariant parse_variant(const std::string& text) {
  try {
    return caeac::cim_variant_from_string(text);
  } catch (const std::invalid_argument& e) {
    throw caeac::ConfigError(e.what());
  }
}

caeac::PredictMetric parse_metric(const std::string& text) {
  try {
    return caeac::predict_metric_from_string(text);
  } catch (const std::invalid_argument& e) {
    throw caeac::ConfigError(e.what());
  }
}

int run_train(const DataOpts& data_opts, const std::string& variant_text,
              std::size_t lambda, int a_max, bool seed_given,
              std::uint64_t seed, const std::string& metric_text,
              const std::string& out_path) {
  caeac::Dataset dataset = load_from_opts(data_opts);
  if (data_opts.normalize) caeac::min_max_normalize(dataset.features);

  std::vector<caeac::LabeledPoint> batch;
  batch.reserve(dataset.size());
  if (seed_given) {
    std::mt19937_64 eng(caeac::trial_seed(seed, 0));
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    caeac::fisher_yates(order, eng);
    for (const std::size_t idx : order)
      batch.push_back({dataset.features[idx], dataset.labels[idx]});
  } else {
    for (std::size_t i = 0; i < dataset.size(); ++i)
      batch.push_back({dataset.features[i], dataset.labels[i]});
  }

  caeac::CaeacConfig config;
  config.lambda = lambda;
  config.a_max = a_max;
  config.variant = parse_variant(variant_text);
  config.predict_metric = parse_metric(metric_text);
  caeac::CaeacModel model = [&]() {
    try {
      return caeac::CaeacModel(config);
    } catch (const std::invalid_argument& e) {
      throw caeac::ConfigError(e.what());
    }
  }();
  model.fit(batch);
  write_output(out_path, caeac::to_json(model));

  std::string summary = "{\"classes\":" + std::to_string(model.class_order().size());
  summary += ",\"node_count\":" + std::to_string(model.total_node_count());
  summary += ",\"cluster_count\":" + std::to_string(model.total_cluster_count());
  summary += ",\"model\":";
  summary += '"' + out_path + '"';
  summary += '}';
  std::cout << summary << "\n";
  return 0;
}

int run_eval(const std::string& model_path, const DataOpts& data_opts) {
  caeac::CaeacModel model = [&]() {
    try {
      return caeac::caeac_from_json(read_file(model_path));
    } catch (const caeac::DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw caeac::DataError(model_path + ": " + e.what());
    }
  }();

  caeac::Dataset dataset = load_from_opts(data_opts);
  if (data_opts.normalize) caeac::min_max_normalize(dataset.features);

  const auto predicted = model.predict_batch(dataset.features);
  const double acc = caeac::accuracy(predicted, dataset.labels);
  const double nmi_value = caeac::nmi(predicted, dataset.labels);
  const double ari_value =
      dataset.size() >= 2 ? caeac::ari(predicted, dataset.labels) : 1.0;

  std::string out = "{\"n\":" + std::to_string(dataset.size());
  out += ",\"accuracy\":" + caeac::format_double(acc);
  out += ",\"nmi\":" + caeac::format_double(nmi_value);
  out += ",\"ari\":" + caeac::format_double(ari_value);
  out += ",\"node_count\":" + std::to_string(model.total_node_count());
  out += ",\"cluster_count\":" + std::to_string(model.total_cluster_count());
  out += '}';
  std::cout << out << "\n";
  return 0;
}

int run_grid(const DataOpts& data_opts, const std::string& variant_text,
             std::size_t trials, std::uint64_t seed,
             const std::string& eval_mode_text,
             const std::vector<std::size_t>& lambda_grid,
             const std::vector<int>& amax_grid, const std::string& metric_text,
             const std::string& out_path) {
  const caeac::Dataset dataset = load_from_opts(data_opts);

  caeac::TrialConfig base;
  base.variant = parse_variant(variant_text);
  base.seed = seed;
  base.trials = trials;
  base.eval_mode = caeac::EvalMode::parse(eval_mode_text);
  base.predict_metric = parse_metric(metric_text);
  base.normalize = data_opts.normalize;

  caeac::GridSpec grid = caeac::GridSpec::defaults();
  if (!lambda_grid.empty()) grid.lambdas = lambda_grid;
  if (!amax_grid.empty()) grid.a_maxes = amax_grid;

  const caeac::GridSearchResult result = caeac::grid_search(dataset, base, grid);
  write_output(out_path, result.to_json());
  if (!out_path.empty()) {
    if (result.best_index.has_value()) {
      const auto& best = result.cells[*result.best_index];
      std::cout << "{\"best_lambda\":" << best.config.lambda
                << ",\"best_a_max\":" << best.config.a_max
                << ",\"accuracy_mean\":"
                << caeac::format_double(best.accuracy.mean) << ",\"report\":\""
                << out_path << "\"}\n";
    } else {
      std::cout << "{\"best\":null,\"report\":\"" << out_path << "\"}\n";
    }
  }
  return 0;
}

int run_compare(const std::vector<std::string>& report_paths,
                const std::string& metric, const std::string& out_path) {
  std::vector<std::pair<std::string, std::vector<double>>> algorithms;
  for (const auto& path : report_paths) {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw caeac::DataError(path + ": invalid JSON: " + e.what());
    }
    if (parsed.is_object() && parsed.contains("name") &&
        parsed.contains("values")) {
      std::vector<double> values;
      for (const auto& v : parsed.at("values")) values.push_back(v.get<double>());
      algorithms.emplace_back(parsed.at("name").get<std::string>(), values);
      continue;
    }
    if (parsed.is_object() && parsed.value("kind", "") == "eval_report") {
      const auto& report = parsed.at("report");
      const std::string name = report.at("dataset").at("name").get<std::string>() +
                               ":" +
                               report.at("config").at("variant").get<std::string>();
      std::vector<double> values;
      for (const auto& trial : report.at("trials")) {
        if (trial.contains("error")) continue;
        values.push_back(trial.at(metric).get<double>());
      }
      algorithms.emplace_back(name, values);
      continue;
    }
    throw caeac::DataError(
        path +
        ": unrecognized report (expected an eval report or {name, values})");
  }
  const caeac::ComparisonResult result = caeac::compare_algorithms(algorithms);
  write_output(out_path, result.to_json());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growing self-organizing classifier with correntropy-induced similarity"};
  app.require_subcommand(1);

  DataOpts train_data, eval_data, grid_data;
  std::string variant = "base", grid_variant = "base";
  std::string predict_metric = "cim", grid_metric = "cim";
  std::size_t lambda = 50;
  int a_max = 10;
  std::uint64_t train_seed = 0, grid_seed = 0;
  std::string train_out, model_path, grid_out, compare_out;
  std::size_t grid_trials = 20;
  std::string eval_mode = "train";
  std::vector<std::size_t> lambda_grid;
  std::vector<int> amax_grid;
  std::vector<std::string> report_paths;
  std::string compare_metric = "accuracy";

  CLI::App* train = app.add_subcommand("train", "fit a classifier and save it");
  add_data_options(train, &train_data);
  train->add_option("--variant", variant, "base|individual|clustering");
  train->add_option("--lambda", lambda, "bandwidth adaptation interval (even, >= 4)");
  train->add_option("--amax", a_max, "maximum edge age (>= 1)");
  CLI::Option* seed_opt = train->add_option(
      "--seed", train_seed, "shuffle rows once before training (file order when absent)");
  train->add_option("--predict-metric", predict_metric, "cim|euclidean");
  train->add_option("--out", train_out, "output model JSON path")->required();

  CLI::App* eval = app.add_subcommand("eval", "score a saved model on a CSV");
  eval->add_option("--model", model_path, "model JSON path")->required();
  add_data_options(eval, &eval_data);

  CLI::App* grid = app.add_subcommand("grid", "grid search with repeated seeded trials");
  add_data_options(grid, &grid_data);
  grid->add_option("--variant", grid_variant, "base|individual|clustering");
  grid->add_option("--trials", grid_trials, "trials per grid cell");
  grid->add_option("--seed", grid_seed, "base seed for trial derivation");
  grid->add_option("--eval-mode", eval_mode, "train or holdout:F (0 < F < 1)");
  grid->add_option("--lambda-grid", lambda_grid, "comma-separated lambda values")
      ->delimiter(',');
  grid->add_option("--amax-grid", amax_grid, "comma-separated a_max values")
      ->delimiter(',');
  grid->add_option("--predict-metric", grid_metric, "cim|euclidean");
  grid->add_option("--out", grid_out, "report JSON path (stdout when absent)");

  CLI::App* compare =
      app.add_subcommand("compare", "Friedman/Nemenyi comparison of reports");
  compare->add_option("--reports", report_paths, "two or more report JSON paths")
      ->required()
      ->expected(-2);
  compare->add_option("--metric", compare_metric,
                      "metric pulled from eval reports (accuracy|nmi|ari)");
  compare->add_option("--out", compare_out, "summary JSON path (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed())
      return run_train(train_data, variant, lambda, a_max, seed_opt->count() > 0,
                       train_seed, predict_metric, train_out);
    if (eval->parsed()) return run_eval(model_path, eval_data);
    if (grid->parsed())
      return run_grid(grid_data, grid_variant, grid_trials, grid_seed, eval_mode,
                      lambda_grid, amax_grid, grid_metric, grid_out);
    if (compare->parsed()) {
      if (compare_metric != "accuracy" && compare_metric != "nmi" &&
          compare_metric != "ari")
        throw caeac::ConfigError("--metric must be accuracy, nmi, or ari");
      return run_compare(report_paths, compare_metric, compare_out);
    }
  } catch (const caeac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const caeac::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

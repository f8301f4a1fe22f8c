#pragma once
// CAEAC: class-incremental classifier holding one CAEA model per class.
// Fitting data of one class only ever touches that class's model, so earlier
// classes are never degraded by later ones. Prediction pools every node of
// every class model and returns the class owning the nearest node.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "caeac/caea.hpp"

namespace caeac {

enum class PredictMetric { kCim, kEuclidean };

std::string to_string(PredictMetric m);
PredictMetric predict_metric_from_string(const std::string& name);

struct CaeacConfig {
  std::size_t lambda = 50;
  int a_max = 10;
  CimVariant variant = CimVariant::kBase;
  PredictMetric predict_metric = PredictMetric::kCim;
};

struct LabeledPoint {
  std::vector<double> features;
  std::string label;
};

class CaeacModel {
 public:
  explicit CaeacModel(CaeacConfig config);

  const CaeacConfig& config() const { return config_; }
  const std::vector<std::string>& class_order() const { return class_order_; }
  // Throws std::out_of_range for unknown labels.
  const CaeaModel& class_model(const std::string& label) const;
  bool has_class(const std::string& label) const;

  // Partitions the batch by label (arrival order preserved within each
  // class), creates missing per-class models, and trains each class model on
  // its own subsequence. Classes absent from the batch are untouched.
  void fit(std::span<const LabeledPoint> batch);

  // Label of the class owning the node nearest to x. Each node is scored
  // with its own class model's mean bandwidth (provisional for mid-init
  // models); ties break by class order, then node index. Throws
  // std::logic_error when no class has any node.
  std::string predict(std::span<const double> x) const;

  std::vector<std::string> predict_batch(
      std::span<const std::vector<double>> xs) const;

  std::size_t total_node_count() const;
  std::size_t total_cluster_count() const;  // connected components, all classes

  // --- deserialization support ----------------------------------------------
  void adopt_class_model(const std::string& label, CaeaModel model);

 private:
  struct ClassScorer;

  CaeacConfig config_;
  std::map<std::string, CaeaModel> models_;
  std::vector<std::string> class_order_;
  std::size_t dim_ = 0;
};

}  // namespace caeac

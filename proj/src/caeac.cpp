#include "caeac/caeac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace caeac {

std::string to_string(PredictMetric m) {
  switch (m) {
    case PredictMetric::kCim: return "cim";
    case PredictMetric::kEuclidean: return "euclidean";
  }
  throw std::logic_error("to_string: unknown PredictMetric");
}

PredictMetric predict_metric_from_string(const std::string& name) {
  if (name == "cim") return PredictMetric::kCim;
  if (name == "euclidean") return PredictMetric::kEuclidean;
  throw std::invalid_argument("unknown predict metric: " + name);
}

CaeacModel::CaeacModel(CaeacConfig config) : config_(config) {
  // Validate lambda/a_max eagerly with the same rules the per-class engines
  // apply, so a bad configuration fails before any data arrives.
  CaeaModel probe(config_.lambda, config_.a_max, config_.variant);
  (void)probe;
}

const CaeaModel& CaeacModel::class_model(const std::string& label) const {
  return models_.at(label);
}

bool CaeacModel::has_class(const std::string& label) const {
  return models_.contains(label);
}

void CaeacModel::fit(std::span<const LabeledPoint> batch) {
  if (batch.empty()) return;
  for (const auto& point : batch) {
    if (dim_ == 0) dim_ = point.features.size();
    if (point.features.size() != dim_ || dim_ == 0)
      throw std::invalid_argument("CaeacModel::fit: input dimension mismatch");
  }
  // Partition by label, preserving arrival order within each class and
  // first-seen order across classes.
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> parts;
  for (const auto& point : batch) {
    auto it = std::find_if(parts.begin(), parts.end(),
                           [&](const auto& p) { return p.first == point.label; });
    if (it == parts.end()) {
      parts.push_back({point.label, {}});
      it = parts.end() - 1;
    }
    it->second.push_back(point.features);
  }
  for (auto& [label, stream] : parts) {
    auto it = models_.find(label);
    if (it == models_.end()) {
      it = models_
               .emplace(label, CaeaModel(config_.lambda, config_.a_max,
                                         config_.variant))
               .first;
      class_order_.push_back(label);
    }
    it->second.train(stream);
  }
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    total += diff * diff;
  }
  return std::sqrt(total);
}

}  // namespace

// Per-class scoring context: the bandwidth/grouping every node of the class is
// scored with, resolved once per prediction batch.
struct CaeacModel::ClassScorer {
  const CaeaModel* model = nullptr;
  std::vector<double> bandwidth;
  std::optional<AttributeGrouping> grouping;
};

std::string CaeacModel::predict(std::span<const double> x) const {
  const std::vector<std::vector<double>> one{{x.begin(), x.end()}};
  return predict_batch(one).front();
}

std::vector<std::string> CaeacModel::predict_batch(
    std::span<const std::vector<double>> xs) const {
  std::vector<std::string> out;
  if (xs.empty()) return out;

  std::vector<std::pair<std::string, ClassScorer>> scorers;
  for (const auto& label : class_order_) {
    const CaeaModel& model = models_.at(label);
    if (model.nodes().empty()) continue;
    ClassScorer scorer;
    scorer.model = &model;
    if (config_.predict_metric == PredictMetric::kCim) {
      auto scoring = model.provisional_scoring_bandwidth();
      scorer.bandwidth = std::move(scoring.bandwidth);
      scorer.grouping = std::move(scoring.grouping);
    }
    scorers.push_back({label, std::move(scorer)});
  }
  if (scorers.empty())
    throw std::logic_error("CaeacModel::predict: no trained nodes in any class");

  out.reserve(xs.size());
  for (const auto& x : xs) {
    if (x.size() != dim_ && dim_ != 0)
      throw std::invalid_argument("CaeacModel::predict: input dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    const std::string* best_label = nullptr;
    for (const auto& [label, scorer] : scorers) {
      const auto& nodes = scorer.model->nodes();
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double dist =
            config_.predict_metric == PredictMetric::kEuclidean
                ? euclidean(x, nodes[k].weight)
                : scorer.model->node_distance(
                      x, k, scorer.bandwidth,
                      scorer.grouping.has_value() ? &*scorer.grouping : nullptr);
        if (dist < best) {
          best = dist;
          best_label = &label;
        }
      }
    }
    out.push_back(*best_label);
  }
  return out;
}

std::size_t CaeacModel::total_node_count() const {
  std::size_t total = 0;
  for (const auto& [label, model] : models_) total += model.nodes().size();
  return total;
}

std::size_t CaeacModel::total_cluster_count() const {
  std::size_t total = 0;
  for (const auto& [label, model] : models_)
    total += model.connected_components().size();
  return total;
}

void CaeacModel::adopt_class_model(const std::string& label, CaeaModel model) {
  if (model.lambda() != config_.lambda || model.a_max() != config_.a_max ||
      model.variant() != config_.variant)
    throw std::invalid_argument(
        "CaeacModel::adopt_class_model: configuration mismatch");
  if (model.dimension() != 0) {
    if (dim_ == 0)
      dim_ = model.dimension();
    else if (model.dimension() != dim_)
      throw std::invalid_argument(
          "CaeacModel::adopt_class_model: dimension mismatch");
  }
  if (!models_.contains(label)) class_order_.push_back(label);
  models_.insert_or_assign(label, std::move(model));
}

}  // namespace caeac

#include "caeac/caea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace caeac {

std::string to_string(CimVariant v) {
  switch (v) {
    case CimVariant::kBase: return "base";
    case CimVariant::kIndividual: return "individual";
    case CimVariant::kClustering: return "clustering";
  }
  throw std::logic_error("to_string: unknown CimVariant");
}

CimVariant cim_variant_from_string(const std::string& name) {
  if (name == "base") return CimVariant::kBase;
  if (name == "individual") return CimVariant::kIndividual;
  if (name == "clustering") return CimVariant::kClustering;
  throw std::invalid_argument("unknown CIM variant: " + name);
}

VigilanceCase vigilance_case(double v1, std::optional<double> v2,
                             double threshold) {
  if (v1 > threshold) return VigilanceCase::kCaseI;
  if (!v2.has_value() || *v2 > threshold) return VigilanceCase::kCaseII;
  return VigilanceCase::kCaseIII;
}

// --- EdgeSet -----------------------------------------------------------------

namespace {

std::pair<std::size_t, std::size_t> ordered(std::size_t i, std::size_t j) {
  return i < j ? std::pair{i, j} : std::pair{j, i};
}

}  // namespace

void EdgeSet::resize(std::size_t node_count) {
  if (node_count < adjacency_.size())
    throw std::logic_error("EdgeSet::resize: use remap to shrink");
  adjacency_.resize(node_count);
}

void EdgeSet::set_edge(std::size_t i, std::size_t j, int edge_age) {
  if (i == j) throw std::logic_error("EdgeSet: self-edge");
  if (i >= adjacency_.size() || j >= adjacency_.size())
    throw std::logic_error("EdgeSet: node index out of range");
  auto link = [this, edge_age](std::size_t from, std::size_t to) {
    auto& list = adjacency_[from];
    auto it = std::lower_bound(
        list.begin(), list.end(), to,
        [](const auto& entry, std::size_t value) { return entry.first < value; });
    if (it != list.end() && it->first == to)
      it->second = edge_age;
    else
      list.insert(it, {to, edge_age});
  };
  link(i, j);
  link(j, i);
}

void EdgeSet::connect(std::size_t i, std::size_t j) { set_edge(i, j, 0); }

bool EdgeSet::contains(std::size_t i, std::size_t j) const {
  return age(i, j).has_value();
}

std::optional<int> EdgeSet::age(std::size_t i, std::size_t j) const {
  if (i >= adjacency_.size()) return std::nullopt;
  const auto& list = adjacency_[i];
  auto it = std::lower_bound(
      list.begin(), list.end(), j,
      [](const auto& entry, std::size_t value) { return entry.first < value; });
  if (it == list.end() || it->first != j) return std::nullopt;
  return it->second;
}

std::size_t EdgeSet::age_incident_edges(std::size_t i, int a_max) {
  if (i >= adjacency_.size()) return 0;
  auto& list = adjacency_[i];
  std::vector<std::size_t> removed;
  for (auto& [neighbor, edge_age] : list) {
    ++edge_age;
    // mirror entry
    auto& other = adjacency_[neighbor];
    auto it = std::lower_bound(
        other.begin(), other.end(), i,
        [](const auto& entry, std::size_t value) { return entry.first < value; });
    it->second = edge_age;
    if (edge_age > a_max) removed.push_back(neighbor);
  }
  for (std::size_t neighbor : removed) {
    auto drop = [this](std::size_t from, std::size_t to) {
      auto& l = adjacency_[from];
      auto it = std::lower_bound(
          l.begin(), l.end(), to,
          [](const auto& entry, std::size_t value) { return entry.first < value; });
      l.erase(it);
    };
    drop(i, neighbor);
    drop(neighbor, i);
  }
  return removed.size();
}

std::vector<std::size_t> EdgeSet::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  if (i < adjacency_.size()) {
    out.reserve(adjacency_[i].size());
    for (const auto& [neighbor, edge_age] : adjacency_[i]) out.push_back(neighbor);
  }
  return out;
}

bool EdgeSet::has_neighbors(std::size_t i) const {
  return i < adjacency_.size() && !adjacency_[i].empty();
}

std::vector<std::tuple<std::size_t, std::size_t, int>> EdgeSet::sorted_edges()
    const {
  std::vector<std::tuple<std::size_t, std::size_t, int>> out;
  for (std::size_t i = 0; i < adjacency_.size(); ++i)
    for (const auto& [j, edge_age] : adjacency_[i])
      if (i < j) out.emplace_back(i, j, edge_age);
  return out;
}

std::size_t EdgeSet::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

void EdgeSet::remap(const std::vector<std::size_t>& old_to_new,
                    std::size_t new_count) {
  std::vector<std::vector<std::pair<std::size_t, int>>> fresh(new_count);
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    if (old_to_new[i] == kRemoved) continue;
    for (const auto& [j, edge_age] : adjacency_[i]) {
      if (old_to_new[j] == kRemoved) continue;
      fresh[old_to_new[i]].push_back({old_to_new[j], edge_age});
    }
  }
  for (auto& list : fresh) std::sort(list.begin(), list.end());
  adjacency_ = std::move(fresh);
}

// --- CaeaModel ---------------------------------------------------------------

CaeaModel::CaeaModel(std::size_t lambda, int a_max, CimVariant variant)
    : lambda_(lambda), a_max_(a_max), variant_(variant) {
  if (lambda_ < 4 || lambda_ % 2 != 0)
    throw std::invalid_argument("CaeaModel: lambda must be even and >= 4");
  if (a_max_ < 1) throw std::invalid_argument("CaeaModel: a_max must be >= 1");
}

std::vector<double> CaeaModel::estimate_node_bandwidth() const {
  if (window_.empty())
    throw std::logic_error("CaeaModel: bandwidth window is empty");
  const std::vector<std::vector<double>> buffer(window_.begin(), window_.end());
  if (variant_ == CimVariant::kBase)
    return {estimate_bandwidth(buffer, lambda_).scalar};
  return estimate_bandwidth_per_attribute(buffer, lambda_);
}

std::vector<double> CaeaModel::incoming_node_bandwidth(
    std::span<const double> x) const {
  if (!window_.empty()) return estimate_node_bandwidth();
  if (!nodes_.empty()) {
    // Deserialized models resume with an empty trailing window; borrow the
    // average stored bandwidth until fresh inputs refill it.
    std::vector<double> mean(nodes_.front().bandwidth.size(), 0.0);
    for (const auto& existing : nodes_)
      for (std::size_t i = 0; i < mean.size(); ++i)
        mean[i] += existing.bandwidth[i];
    for (double& b : mean) b /= static_cast<double>(nodes_.size());
    return mean;
  }
  // Deserialized empty model: nothing buffered and nothing to borrow from;
  // fall back to the degenerate single-point estimate.
  const std::vector<std::vector<double>> only{{x.begin(), x.end()}};
  if (variant_ == CimVariant::kBase)
    return {estimate_bandwidth(only, lambda_).scalar};
  return estimate_bandwidth_per_attribute(only, lambda_);
}

std::vector<double> CaeaModel::derived_bandwidth(std::size_t k) const {
  if (variant_ == CimVariant::kClustering) return group_bandwidth_cache_[k];
  return nodes_[k].bandwidth;
}

std::vector<double> CaeaModel::mean_bandwidth() const {
  if (nodes_.empty())
    throw std::logic_error("CaeaModel::mean_bandwidth: no nodes");
  std::vector<double> mean = derived_bandwidth(0);
  for (std::size_t k = 1; k < nodes_.size(); ++k) {
    const auto bw = derived_bandwidth(k);
    if (bw.size() != mean.size())
      throw std::logic_error("CaeaModel::mean_bandwidth: inconsistent bandwidths");
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += bw[i];
  }
  for (double& v : mean) v /= static_cast<double>(nodes_.size());
  return mean;
}

double CaeaModel::node_distance(std::span<const double> x, std::size_t k,
                                std::span<const double> bandwidth,
                                const AttributeGrouping* g) const {
  const auto& weight = nodes_[k].weight;
  switch (variant_) {
    case CimVariant::kBase:
      return cim(x, weight, bandwidth[0]);
    case CimVariant::kIndividual:
      return cim_individual(x, weight, bandwidth);
    case CimVariant::kClustering:
      if (g == nullptr)
        throw std::logic_error("CaeaModel::node_distance: grouping required");
      return cim_clustering(x, weight, *g, bandwidth);
  }
  throw std::logic_error("CaeaModel::node_distance: unknown variant");
}

WinnerSelection CaeaModel::select_winners(std::span<const double> x) const {
  if (nodes_.empty())
    throw std::logic_error("CaeaModel::select_winners: empty model");
  const auto scoring = provisional_scoring_bandwidth();
  const AttributeGrouping* g =
      scoring.grouping.has_value() ? &*scoring.grouping : nullptr;
  WinnerSelection out;
  double best1 = std::numeric_limits<double>::infinity();
  double best2 = std::numeric_limits<double>::infinity();
  std::size_t idx1 = 0, idx2 = 0;
  bool have2 = false;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double dist = node_distance(x, k, scoring.bandwidth, g);
    if (dist < best1) {
      best2 = best1;
      idx2 = idx1;
      have2 = k > 0;
      best1 = dist;
      idx1 = k;
    } else if (dist < best2) {
      best2 = dist;
      idx2 = k;
      have2 = true;
    }
  }
  out.k1 = idx1;
  out.v1 = best1;
  if (have2) {
    out.k2 = idx2;
    out.v2 = best2;
  }
  return out;
}

CaeaModel::ScoringBandwidth CaeaModel::provisional_scoring_bandwidth() const {
  ScoringBandwidth out;
  // Once a threshold exists every node carries a bandwidth, so the stored
  // values work even while a pruned-down block is refilling. (The clustering
  // variant additionally needs its grouping, which a full wipe discards.)
  if (v_threshold_.has_value() && !nodes_.empty() &&
      (variant_ != CimVariant::kClustering || grouping_.has_value())) {
    out.bandwidth = mean_bandwidth();
    out.grouping = grouping_;
    return out;
  }
  // Mid-init: adopt the bandwidth (and grouping) init completion would derive
  // from the current buffer, without mutating anything.
  if (window_.empty())
    throw std::logic_error("CaeaModel: no bandwidth available before any input");
  const std::vector<std::vector<double>> buffer(window_.begin(), window_.end());
  if (variant_ == CimVariant::kBase) {
    out.bandwidth = {estimate_bandwidth(buffer, lambda_).scalar};
  } else if (variant_ == CimVariant::kIndividual) {
    out.bandwidth = estimate_bandwidth_per_attribute(buffer, lambda_);
  } else {
    out.grouping = group_attributes(buffer, a_max_);
    out.bandwidth = estimate_group_bandwidths(buffer, *out.grouping, lambda_);
  }
  return out;
}

void CaeaModel::complete_init() {
  // Nodes grown before any threshold existed (the very first block) share one
  // bandwidth estimated from the buffered window; a refilled block keeps the
  // per-node bandwidths its members arrived with.
  const bool first_fill = !v_threshold_.has_value();
  if (first_fill) {
    const auto raw = estimate_node_bandwidth();
    for (auto& node : nodes_) node.bandwidth = raw;
  }
  if (variant_ == CimVariant::kClustering) {
    const std::vector<std::vector<double>> buffer(window_.begin(), window_.end());
    grouping_ = group_attributes(buffer, a_max_);
    rederive_group_bandwidths();
  }
  // The threshold is refit every time the block fills: the mean over the
  // block of each node's closest-other-node dissimilarity. On a first fill
  // all nodes share the fresh bandwidth, so node 0 supplies it verbatim (no
  // mean needed, avoiding rounding drift); refills average per-node values.
  const std::vector<double> sigma =
      first_fill ? derived_bandwidth(0) : mean_bandwidth();
  const AttributeGrouping* g = grouping_.has_value() ? &*grouping_ : nullptr;
  double total = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (j == i) continue;
      best = std::min(best, node_distance(nodes_[i].weight, j, sigma, g));
    }
    total += best;
  }
  v_threshold_ = total / static_cast<double>(nodes_.size());
}

void CaeaModel::rederive_group_bandwidths() {
  group_bandwidth_cache_.clear();
  group_bandwidth_cache_.reserve(nodes_.size());
  for (const auto& node : nodes_)
    group_bandwidth_cache_.push_back(group_bandwidths_from_attribute_bandwidths(
        node.bandwidth, *grouping_, dim_, lambda_));
}

void CaeaModel::refresh_grouping() {
  const std::vector<std::vector<double>> buffer(window_.begin(), window_.end());
  grouping_ = group_attributes(buffer, a_max_);
  rederive_group_bandwidths();
}

void CaeaModel::init_step(std::span<const double> x) {
  if (nodes_.size() >= lambda_ / 2)
    throw std::logic_error("CaeaModel::init_step: node block already full");
  if (dim_ == 0) dim_ = x.size();
  if (x.size() != dim_ || dim_ == 0)
    throw std::invalid_argument("CaeaModel: input dimension mismatch");
  Node node;
  node.weight.assign(x.begin(), x.end());
  // First-block nodes wait for the shared bandwidth assigned at completion;
  // refill nodes (a threshold already exists) immediately carry their own
  // trailing-window bandwidth, exactly like nodes spawned while learning.
  if (v_threshold_.has_value()) node.bandwidth = incoming_node_bandwidth(x);
  nodes_.push_back(std::move(node));
  edges_.resize(nodes_.size());
  if (variant_ == CimVariant::kClustering && grouping_.has_value())
    group_bandwidth_cache_.push_back(group_bandwidths_from_attribute_bandwidths(
        nodes_.back().bandwidth, *grouping_, dim_, lambda_));
  window_.push_back({x.begin(), x.end()});
  while (window_.size() > lambda_ / 2) window_.pop_front();
  if (nodes_.size() == lambda_ / 2) complete_init();
}

void CaeaModel::learn_step(std::span<const double> x) {
  if (!initialized())
    throw std::logic_error("CaeaModel::learn_step: model not initialized");
  if (x.size() != dim_)
    throw std::invalid_argument("CaeaModel: input dimension mismatch");
  const auto winners = select_winners(x);
  edges_.age_incident_edges(winners.k1, a_max_);

  switch (vigilance_case(winners.v1, winners.v2, *v_threshold_)) {
    case VigilanceCase::kCaseI: {
      Node node;
      node.weight.assign(x.begin(), x.end());
      node.bandwidth = incoming_node_bandwidth(x);
      nodes_.push_back(std::move(node));
      edges_.resize(nodes_.size());
      if (variant_ == CimVariant::kClustering)
        group_bandwidth_cache_.push_back(group_bandwidths_from_attribute_bandwidths(
            nodes_.back().bandwidth, *grouping_, dim_, lambda_));
      break;
    }
    case VigilanceCase::kCaseIII: {
      // Neighbor pull happens around k2's neighborhood as it was before the
      // new edge, so k1 only receives the extra nudge when already linked.
      const std::size_t k2 = *winners.k2;
      auto& winner = nodes_[winners.k1];
      winner.counter += 1;
      for (std::size_t i = 0; i < dim_; ++i)
        winner.weight[i] += (x[i] - winner.weight[i]) /
                            static_cast<double>(winner.counter);
      const auto neighbors = edges_.neighbors(k2);
      for (std::size_t j : neighbors) {
        auto& node = nodes_[j];
        for (std::size_t i = 0; i < dim_; ++i)
          node.weight[i] += (x[i] - node.weight[i]) /
                            (10.0 * static_cast<double>(node.counter));
      }
      edges_.connect(winners.k1, k2);
      break;
    }
    case VigilanceCase::kCaseII: {
      auto& winner = nodes_[winners.k1];
      winner.counter += 1;
      for (std::size_t i = 0; i < dim_; ++i)
        winner.weight[i] += (x[i] - winner.weight[i]) /
                            static_cast<double>(winner.counter);
      break;
    }
  }
}

void CaeaModel::step(std::span<const double> x) {
  if (nodes_.size() < lambda_ / 2) {
    init_step(x);
  } else {
    // The window is only empty right after deserialization; skip the refresh
    // until it refills (organic models always have a full window here).
    if (variant_ == CimVariant::kClustering && input_count_ > 0 &&
        input_count_ % lambda_ == 0 && !window_.empty())
      refresh_grouping();
    learn_step(x);
    window_.push_back({x.begin(), x.end()});
    while (window_.size() > lambda_ / 2) window_.pop_front();
  }
  ++input_count_;
  if (input_count_ % lambda_ == 0) {
    prune_isolated();
    // Dropping below lambda/2 nodes re-enters the block-refill phase through
    // the dispatch above; the trailing window and threshold carry over. A
    // full wipe also invalidates the attribute grouping — the next block
    // completion recomputes it from the then-current window.
    if (nodes_.empty()) {
      grouping_.reset();
      group_bandwidth_cache_.clear();
    }
  }
}

void CaeaModel::train(std::span<const std::vector<double>> stream) {
  for (const auto& x : stream) step(x);
}

std::size_t CaeaModel::prune_isolated() {
  std::vector<std::size_t> old_to_new(nodes_.size(), EdgeSet::kRemoved);
  std::size_t kept = 0;
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (edges_.has_neighbors(k)) old_to_new[k] = kept++;
  const std::size_t removed = nodes_.size() - kept;
  if (removed == 0) return 0;
  std::vector<Node> surviving;
  surviving.reserve(kept);
  std::vector<std::vector<double>> surviving_cache;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (old_to_new[k] == EdgeSet::kRemoved) continue;
    surviving.push_back(std::move(nodes_[k]));
    if (variant_ == CimVariant::kClustering && !group_bandwidth_cache_.empty())
      surviving_cache.push_back(std::move(group_bandwidth_cache_[k]));
  }
  nodes_ = std::move(surviving);
  group_bandwidth_cache_ = std::move(surviving_cache);
  edges_.remap(old_to_new, kept);
  return removed;
}

std::vector<std::vector<std::size_t>> CaeaModel::connected_components() const {
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const auto& [i, j, edge_age] : edges_.sorted_edges()) {
    const std::size_t ri = find(i), rj = find(j);
    if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
  }
  std::map<std::size_t, std::vector<std::size_t>> by_root;
  for (std::size_t v = 0; v < nodes_.size(); ++v) by_root[find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> components;
  components.reserve(by_root.size());
  for (auto& [root, members] : by_root) components.push_back(std::move(members));
  return components;
}

void CaeaModel::audit() const {
  auto fail = [](const std::string& what) {
    throw std::logic_error("CaeaModel::audit: " + what);
  };
  if (nodes_.size() > input_count_ + loaded_node_count_)
    fail("more nodes than inputs");
  if (edges_.node_capacity() < nodes_.size()) fail("edge set smaller than nodes");
  const bool has_threshold = v_threshold_.has_value();
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto& node = nodes_[k];
    if (node.counter < 1) fail("counter below 1");
    if (dim_ != 0 && node.weight.size() != dim_) fail("weight dimension drift");
    if (has_threshold) {
      const std::size_t expected =
          variant_ == CimVariant::kBase ? 1 : dim_;
      if (node.bandwidth.size() != expected) fail("bandwidth size mismatch");
      for (double b : node.bandwidth)
        if (!(b > 0.0)) fail("non-positive bandwidth");
    } else if (!node.bandwidth.empty()) {
      fail("bandwidth assigned before the threshold");
    }
  }
  for (const auto& [i, j, edge_age] : edges_.sorted_edges()) {
    if (i == j) fail("self-edge");
    if (i >= nodes_.size() || j >= nodes_.size()) fail("edge to dead node");
    if (edge_age < 0 || edge_age > a_max_) fail("edge age out of bounds");
    const auto mirrored = edges_.age(j, i);
    if (!mirrored.has_value() || *mirrored != edge_age) fail("asymmetric edge");
  }
  if (has_threshold) {
    if (*v_threshold_ < 0.0 || *v_threshold_ > 1.0 ||
        !std::isfinite(*v_threshold_))
      fail("threshold out of [0,1]");
  } else {
    if (!edges_.empty()) fail("edges before the first block completes");
    if (nodes_.size() >= lambda_ / 2) fail("full node block without threshold");
  }
  if (variant_ == CimVariant::kClustering) {
    if (initialized() && !grouping_.has_value())
      fail("clustering variant without grouping");
    if (grouping_.has_value()) {
      if (!has_threshold) fail("grouping before the threshold");
      if (group_bandwidth_cache_.size() != nodes_.size())
        fail("group bandwidth cache out of sync");
    } else if (!group_bandwidth_cache_.empty()) {
      fail("group bandwidth cache without grouping");
    }
  }
  if (window_.size() > lambda_ / 2) fail("window longer than lambda/2");
}

CaeaModel CaeaModel::from_raw_state(RawState state) {
  CaeaModel model(state.lambda, state.a_max, state.variant);
  model.v_threshold_ = state.v_threshold;
  model.nodes_ = std::move(state.nodes);
  if (!model.nodes_.empty()) model.dim_ = model.nodes_.front().weight.size();
  const bool has_threshold = model.v_threshold_.has_value();
  if (!has_threshold && model.nodes_.size() >= model.lambda_ / 2)
    throw std::invalid_argument(
        "CaeaModel: full node block without a threshold");
  for (const auto& node : model.nodes_) {
    if (node.weight.size() != model.dim_)
      throw std::invalid_argument("CaeaModel: node dimension drift");
    if (has_threshold) {
      const std::size_t expected =
          model.variant_ == CimVariant::kBase ? 1 : model.dim_;
      if (node.bandwidth.size() != expected)
        throw std::invalid_argument("CaeaModel: node bandwidth size mismatch");
      for (double b : node.bandwidth)
        if (!(b > 0.0))
          throw std::invalid_argument(
              "CaeaModel: node bandwidth must be positive");
    } else if (!node.bandwidth.empty()) {
      throw std::invalid_argument(
          "CaeaModel: bandwidth assigned before the threshold");
    }
  }
  model.edges_.resize(model.nodes_.size());
  for (const auto& [i, j, edge_age] : state.edges) {
    if (!has_threshold)
      throw std::invalid_argument(
          "CaeaModel: edges before the first block completes");
    if (i >= model.nodes_.size() || j >= model.nodes_.size())
      throw std::invalid_argument("CaeaModel: edge references missing node");
    if (edge_age < 0 || edge_age > model.a_max_)
      throw std::invalid_argument("CaeaModel: edge age out of bounds");
    model.edges_.set_edge(i, j, edge_age);
  }
  model.grouping_ = std::move(state.grouping);
  if (model.grouping_.has_value()) {
    if (model.variant_ != CimVariant::kClustering)
      throw std::invalid_argument(
          "CaeaModel: grouping only applies to the clustering variant");
    if (!has_threshold)
      throw std::invalid_argument("CaeaModel: grouping before the threshold");
  }
  // The schema carries no input counter. Restart it at zero so maintenance
  // (pruning, grouping refresh) triggers lambda *resumed* inputs from now —
  // any other origin would tie an immediate prune to the loaded node count.
  model.input_count_ = 0;
  model.loaded_node_count_ = model.nodes_.size();
  if (model.variant_ == CimVariant::kClustering) {
    if (model.initialized() && !model.grouping_.has_value())
      throw std::invalid_argument(
          "CaeaModel: clustering model requires a grouping");
    if (model.grouping_.has_value()) model.rederive_group_bandwidths();
  }
  return model;
}

}  // namespace caeac

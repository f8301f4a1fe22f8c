#include "caeac/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "caeac/caea.hpp"

namespace caeac {

AttributeGrouping::AttributeGrouping(
    std::vector<std::vector<std::size_t>> groups, std::size_t d)
    : groups_(std::move(groups)), d_(d) {
  if (d_ == 0)
    throw std::invalid_argument("AttributeGrouping: zero attributes");
  std::vector<bool> seen(d_, false);
  std::size_t covered = 0;
  for (auto& group : groups_) {
    if (group.empty())
      throw std::invalid_argument("AttributeGrouping: empty group");
    std::sort(group.begin(), group.end());
    for (std::size_t attr : group) {
      if (attr >= d_)
        throw std::invalid_argument("AttributeGrouping: attribute index out of range");
      if (seen[attr])
        throw std::invalid_argument("AttributeGrouping: attribute in two groups");
      seen[attr] = true;
      ++covered;
    }
  }
  if (covered != d_)
    throw std::invalid_argument("AttributeGrouping: groups do not cover all attributes");
  std::sort(groups_.begin(), groups_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

AttributeGrouping AttributeGrouping::single_group(std::size_t d) {
  std::vector<std::size_t> all(d);
  for (std::size_t i = 0; i < d; ++i) all[i] = i;
  return AttributeGrouping({std::move(all)}, d);
}

AttributeGrouping AttributeGrouping::singletons(std::size_t d) {
  std::vector<std::vector<std::size_t>> groups(d);
  for (std::size_t i = 0; i < d; ++i) groups[i] = {i};
  return AttributeGrouping(std::move(groups), d);
}

std::vector<std::size_t> AttributeGrouping::group_sizes() const {
  std::vector<std::size_t> sizes(groups_.size());
  for (std::size_t j = 0; j < groups_.size(); ++j) sizes[j] = groups_[j].size();
  return sizes;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    total += diff * diff;
  }
  return total;
}

}  // namespace

AttributeGrouping group_attributes(std::span<const std::vector<double>> window,
                                   int a_max) {
  if (window.empty())
    throw std::invalid_argument("group_attributes: empty window");
  const std::size_t d = window.front().size();
  if (d == 0) throw std::invalid_argument("group_attributes: empty points");
  for (const auto& row : window)
    if (row.size() != d)
      throw std::invalid_argument("group_attributes: ragged window rows");
  if (d < 2) return AttributeGrouping::single_group(d);

  // Summarize each attribute's distribution over the window as (mean, std).
  const double n = static_cast<double>(window.size());
  std::vector<std::vector<double>> summaries(d, std::vector<double>(2, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    double mean = 0.0;
    for (const auto& row : window) mean += row[i];
    mean /= n;
    double var = 0.0;
    for (const auto& row : window) {
      const double diff = row[i] - mean;
      var += diff * diff;
    }
    summaries[i] = {mean, std::sqrt(var / n)};
  }

  // Cluster the distinct summary points with a Base-variant pass, fed in
  // canonical sorted order so attribute permutations cannot change the result
  // and coincident summaries share one node.
  std::vector<std::vector<double>> unique_points(summaries.begin(), summaries.end());
  std::sort(unique_points.begin(), unique_points.end());
  unique_points.erase(std::unique(unique_points.begin(), unique_points.end()),
                      unique_points.end());

  const std::size_t lambda_inner = window.size() - window.size() % 2;
  if (lambda_inner < 4) return AttributeGrouping::single_group(d);

  CaeaModel inner(lambda_inner, a_max, CimVariant::kBase);
  inner.train(unique_points);
  if (inner.nodes().empty()) return AttributeGrouping::single_group(d);

  const auto components = inner.connected_components();
  std::vector<std::size_t> component_of_node(inner.nodes().size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (std::size_t node : components[c]) component_of_node[node] = c;

  // Assign each attribute's summary to the Euclidean-nearest surviving node
  // (lowest node index on ties), then group by connected component.
  std::map<std::size_t, std::vector<std::size_t>> by_component;
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t best_node = 0;
    double best = squared_distance(summaries[i], inner.nodes()[0].weight);
    for (std::size_t k = 1; k < inner.nodes().size(); ++k) {
      const double dist = squared_distance(summaries[i], inner.nodes()[k].weight);
      if (dist < best) {
        best = dist;
        best_node = k;
      }
    }
    by_component[component_of_node[best_node]].push_back(i);
  }

  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(by_component.size());
  for (auto& [component, attrs] : by_component) groups.push_back(std::move(attrs));
  return AttributeGrouping(std::move(groups), d);
}

}  // namespace caeac

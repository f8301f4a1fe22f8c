#pragma once
// Attribute grouping for the clustering-based CIM variant: attributes with
// similar value distributions are placed in one group, and each group shares a
// bandwidth.

#include <cstddef>
#include <span>
#include <vector>

namespace caeac {

// A partition of the attribute indices {0..d-1}. Groups are nonempty, disjoint
// and sorted (indices ascending inside a group, groups ordered by smallest
// member).
class AttributeGrouping {
 public:
  // Throws std::invalid_argument unless `groups` is an exact partition of
  // {0..d-1} with nonempty parts.
  AttributeGrouping(std::vector<std::vector<std::size_t>> groups, std::size_t d);

  // Single group holding all of {0..d-1}.
  static AttributeGrouping single_group(std::size_t d);
  // One singleton group per attribute.
  static AttributeGrouping singletons(std::size_t d);

  std::size_t attribute_count() const { return d_; }
  std::size_t group_count() const { return groups_.size(); }
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  std::vector<std::size_t> group_sizes() const;

  bool operator==(const AttributeGrouping& other) const = default;

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t d_ = 0;
};

// Groups attributes by the similarity of their value distributions over a
// window of data points. Each attribute i is summarized as the 2-vector
// (mean_i, std_i) over the window; the distinct summary points are clustered
// with a small self-organizing pass (run in a canonical order so the result is
// equivariant under attribute permutation), and attributes whose summaries
// land in the same connected component form a group. Falls back to a single
// group when d < 2, the window is shorter than 4 points, or the inner pass
// retains no nodes. Throws std::invalid_argument on an empty window or ragged
// rows.
AttributeGrouping group_attributes(std::span<const std::vector<double>> window,
                                   int a_max);

}  // namespace caeac

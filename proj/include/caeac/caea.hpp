#pragma once
// CAEA: a growing self-organizing clustering engine. Nodes are prototype
// vectors with kernel bandwidths and accumulation counters; edges carry ages
// and define topological clusters. Learning is fully deterministic: while the
// model holds fewer than lambda/2 nodes, inputs become nodes verbatim, and a
// vigilance threshold is (re)fit from the block each time it fills; every
// later input either spawns a node (similarity worse than the threshold),
// refines the nearest node, or additionally links the two nearest nodes and
// nudges the neighborhood. Isolated nodes are pruned every lambda inputs,
// which can drop the model back into the block-refill phase.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "caeac/cim.hpp"
#include "caeac/grouping.hpp"

namespace caeac {

enum class CimVariant { kBase, kIndividual, kClustering };

std::string to_string(CimVariant v);
CimVariant cim_variant_from_string(const std::string& name);

struct Node {
  std::vector<double> weight;     // prototype vector y_k
  std::vector<double> bandwidth;  // size 1 for Base, size d otherwise
  std::uint64_t counter = 1;      // number of accumulated points M_k
};

enum class VigilanceCase { kCaseI, kCaseII, kCaseIII };

// CaseI iff v1 > threshold; CaseII iff v1 <= threshold < v2; CaseIII iff
// v2 <= threshold. An absent v2 (single-node model) behaves as +infinity.
VigilanceCase vigilance_case(double v1, std::optional<double> v2,
                             double threshold);

struct WinnerSelection {
  std::size_t k1 = 0;
  std::optional<std::size_t> k2;
  double v1 = 0.0;
  std::optional<double> v2;
};

// Symmetric edge set over node indices with per-edge ages.
class EdgeSet {
 public:
  void connect(std::size_t i, std::size_t j);          // creates or resets age 0
  void set_edge(std::size_t i, std::size_t j, int age); // creates with an age
  bool contains(std::size_t i, std::size_t j) const;
  std::optional<int> age(std::size_t i, std::size_t j) const;
  // Adds 1 to the age of every edge incident to `i`; removes edges whose age
  // exceeds a_max. Returns the number of removed edges.
  std::size_t age_incident_edges(std::size_t i, int a_max);
  std::vector<std::size_t> neighbors(std::size_t i) const;
  bool has_neighbors(std::size_t i) const;
  std::size_t node_capacity() const { return adjacency_.size(); }
  void resize(std::size_t node_count);
  // Sorted (i, j, age) triples with i < j.
  std::vector<std::tuple<std::size_t, std::size_t, int>> sorted_edges() const;
  std::size_t edge_count() const;
  bool empty() const { return edge_count() == 0; }
  // Rebuilds the edge set after nodes were removed: old index -> new index,
  // or kRemoved for deleted nodes.
  static constexpr std::size_t kRemoved = static_cast<std::size_t>(-1);
  void remap(const std::vector<std::size_t>& old_to_new, std::size_t new_count);

 private:
  // adjacency_[i] holds (neighbor, age) pairs sorted by neighbor index.
  std::vector<std::vector<std::pair<std::size_t, int>>> adjacency_;
};

class CaeaModel {
 public:
  // lambda must be even and >= 4; a_max >= 1. Throws std::invalid_argument.
  CaeaModel(std::size_t lambda, int a_max, CimVariant variant);

  // --- configuration / state accessors -------------------------------------
  std::size_t lambda() const { return lambda_; }
  int a_max() const { return a_max_; }
  CimVariant variant() const { return variant_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const EdgeSet& edges() const { return edges_; }
  std::optional<double> v_threshold() const { return v_threshold_; }
  std::uint64_t input_count() const { return input_count_; }
  // True while the model is in the learning phase: a vigilance threshold
  // exists and the node block is full. False both before the first block
  // completes and while a pruned-down block is refilling.
  bool initialized() const {
    return v_threshold_.has_value() && nodes_.size() >= lambda_ / 2;
  }
  const std::optional<AttributeGrouping>& grouping() const { return grouping_; }
  const std::deque<std::vector<double>>& window() const { return window_; }

  // Mean bandwidth across nodes (element-wise; one entry per group for the
  // clustering variant). Requires at least one node with an assigned
  // bandwidth; `provisional_scoring_bandwidth` covers mid-init models.
  std::vector<double> mean_bandwidth() const;

  // CIM between x and node `k` under the active variant with the supplied
  // mean bandwidth (and grouping for the clustering variant).
  double node_distance(std::span<const double> x, std::size_t k,
                       std::span<const double> bandwidth,
                       const AttributeGrouping* grouping) const;

  // --- learning -------------------------------------------------------------
  // Appends x as a node verbatim. Before the first threshold exists the node
  // waits for the block to fill; afterwards (block refill) it immediately
  // carries a trailing-window bandwidth. On reaching lambda/2 nodes the block
  // completes: first-time nodes receive the common window bandwidth, the
  // clustering variant recomputes its grouping, and the vigilance threshold
  // is (re)fit. Precondition: fewer than lambda/2 nodes.
  void init_step(std::span<const double> x);

  // One post-init learning step: select winners, age the first winner's
  // edges, then apply the vigilance case. Does not touch the trailing window
  // or input counter — `step` does.
  void learn_step(std::span<const double> x);

  // Feeds one input through the full per-input pipeline: grouping refresh (at
  // lambda boundaries, clustering variant), init_step (fewer than lambda/2
  // nodes) or learn_step + window push, input counting, and isolated-node
  // pruning every lambda inputs. Pruning below lambda/2 nodes re-enters the
  // block-refill phase; the trailing window and threshold persist across it.
  void step(std::span<const double> x);

  // step() over a whole stream. Throws on dimension drift.
  void train(std::span<const std::vector<double>> stream);

  // Winner node (lowest index on ties) and runner-up under the mean
  // bandwidth. Throws std::logic_error on an empty model.
  WinnerSelection select_winners(std::span<const double> x) const;

  // Removes nodes with no incident edges and re-indexes the remainder
  // (stable order). Returns the number of removed nodes.
  std::size_t prune_isolated();

  // Node-index partition induced by edge connectivity; isolated nodes are
  // singletons. Components ordered by smallest member.
  std::vector<std::vector<std::size_t>> connected_components() const;

  // Structural self-check for tests: edge symmetry/bounds, counter and
  // bandwidth invariants, threshold/phase consistency. Throws
  // std::logic_error naming the violated invariant.
  void audit() const;

  // Bandwidth (and grouping) used to score inputs against the nodes. Models
  // whose nodes all carry bandwidths (threshold present) supply the stored
  // mean; a model still filling its first block adopts what completion would
  // derive from the current buffer, without mutating anything.
  struct ScoringBandwidth {
    std::vector<double> bandwidth;
    std::optional<AttributeGrouping> grouping;
  };
  ScoringBandwidth provisional_scoring_bandwidth() const;

  // --- internal state injection (deserialization) ---------------------------
  struct RawState {
    std::size_t lambda = 0;
    int a_max = 0;
    CimVariant variant = CimVariant::kBase;
    std::optional<double> v_threshold;
    std::vector<Node> nodes;
    std::vector<std::tuple<std::size_t, std::size_t, int>> edges;
    std::optional<AttributeGrouping> grouping;
  };
  static CaeaModel from_raw_state(RawState state);

 private:
  void complete_init();
  void refresh_grouping();
  void rederive_group_bandwidths();
  std::vector<double> estimate_node_bandwidth() const;
  std::vector<double> incoming_node_bandwidth(std::span<const double> x) const;
  std::vector<double> derived_bandwidth(std::size_t k) const;

  std::size_t lambda_;
  int a_max_;
  CimVariant variant_;
  std::size_t dim_ = 0;  // fixed by the first input (or deserialized nodes)

  std::vector<Node> nodes_;
  EdgeSet edges_;
  std::optional<double> v_threshold_;
  std::optional<AttributeGrouping> grouping_;  // clustering variant only
  // Per-node group bandwidths derived from the raw per-attribute values;
  // parallel to nodes_ (clustering variant only).
  std::vector<std::vector<double>> group_bandwidth_cache_;

  std::deque<std::vector<double>> window_;  // trailing lambda/2 inputs
  std::uint64_t input_count_ = 0;
  // Nodes present when the model was rebuilt from raw state; lets the audit
  // keep "node count never exceeds inputs seen" meaningful across resumes.
  std::size_t loaded_node_count_ = 0;
};

}  // namespace caeac

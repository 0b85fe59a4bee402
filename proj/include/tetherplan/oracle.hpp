#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "tetherplan/curve.hpp"
#include "tetherplan/gcp.hpp"
#include "tetherplan/gridmap.hpp"
#include "tetherplan/homotopy.hpp"

namespace tetherplan {

inline constexpr std::size_t kWorkspaceNodeCap = 5'000'000;

/// Augmented states (cell, homotopy class) reachable from the base by grid paths no longer than
/// kGcpPruneFactor * max_length, found by exhaustive uniform-cost search. Exact tether lengths
/// are computed only for the nodes a query inspects. Holds a pointer to the world, which must
/// outlive the graph.
class WorkspaceGraph {
 public:
  struct Node {
    std::uint32_t cell;
    WordTrie::Id word;
    std::uint32_t parent;
    double cost;
  };

  const GridWorld& world() const { return *world_; }
  Cell base() const { return base_; }
  double max_length() const { return max_length_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::optional<std::size_t> find(Cell cell, const HSignature& signature) const;
  /// Successor of `node` after one 8-connected step, if that state is in the graph.
  std::optional<std::size_t> step(std::size_t node, Cell to) const;

  Cell cell(std::size_t node) const { return world_->cell_at(nodes_[node].cell); }
  HSignature signature(std::size_t node) const { return trie_.signature(nodes_[node].word); }
  /// Grid path from the base that discovered the node.
  Polyline raw_path(std::size_t node) const;

 private:
  friend WorkspaceGraph build_workspace(const GridWorld&, Cell, double, std::size_t);

  const GridWorld* world_ = nullptr;
  Cell base_;
  double max_length_ = 0.0;
  std::vector<Node> nodes_;
  mutable WordTrie trie_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;

  std::optional<std::size_t> lookup(std::uint32_t cell, WordTrie::Id word) const;
};

/// Throws PreconditionError if the base is not in C or max_length < 0, BudgetError past node_cap.
WorkspaceGraph build_workspace(const GridWorld& world, Cell base, double max_length,
                               std::size_t node_cap = kWorkspaceNodeCap);

/// Exact configurations (C-shortened, within the tether length, not self-crossing) of every
/// workspace node at `cell`, sorted like gcp's output.
std::vector<Configuration> workspace_configurations(const WorkspaceGraph& graph, Cell cell);

struct OracleTpResult {
  Polyline raw{Cell{}};
  Polyline shortened{Cell{}};
  double length = 0.0;
  Configuration goal_configuration;
  std::size_t nodes_settled = 0;
};

/// Reference TP: Dijkstra through the workspace from the start
/// configuration. Every admissible goal configuration it reaches is scored by the C-shortened
/// length of its grid path; the shortest wins, ties by signature.
/// Throws PreconditionError if start is not a workspace node, UnreachableError if no goal
/// configuration is reached.
OracleTpResult oracle_tp(const WorkspaceGraph& graph, const Configuration& start, Cell goal);

struct ConvexityViolation {
  Configuration from;
  Configuration to;
  Polyline motion{Cell{}};
  double max_induced = 0.0;
  double bound = 0.0;
};

struct ConvexityReport {
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  double worst_excess = 0.0;  // max over pairs of max_induced - max(endpoint lengths)
  std::vector<ConvexityViolation> violations;
};

/// Samples admissible configuration pairs, runs tr, and checks the induced tether length along
/// the motion stays within max(endpoint lengths) + kGridEpsilon and 1.001 * max_length.
ConvexityReport verify_convexity(const WorkspaceGraph& graph, std::size_t samples, std::uint64_t seed);

struct SimplyConnectedReport {
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  std::size_t unreachable = 0;
  std::size_t not_homotopic = 0;
};

/// Samples admissible configuration pairs and checks that a workspace path between them exists
/// and is homotopic to the tr motion.
SimplyConnectedReport verify_simply_connected(const WorkspaceGraph& graph, std::size_t samples, std::uint64_t seed);

}  // namespace tetherplan

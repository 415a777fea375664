#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace predsync {

using NodeId = std::uint64_t;
using Color = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Parent marker of the root in a rooted tree (identifiers start at 1).
inline constexpr NodeId kRoot = 0;

/// Undirected simple graph over distinct identifiers drawn from {1..d}.
/// Immutable after construction. Nodes are also addressable by their rank
/// in ascending identifier order, which is what the oracles and the engine
/// index by.
class Graph {
 public:
  Graph() = default;

  /// Validates identifiers (distinct, in range) and edges (known endpoints,
  /// no self-loops). Duplicate edges are merged.
  Graph(std::uint64_t d, std::vector<NodeId> ids, std::span<const Edge> edges);

  std::size_t n() const noexcept { return ids_.size(); }
  std::uint64_t d() const noexcept { return d_; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> ids() const noexcept { return ids_; }
  NodeId id_at(std::size_t index) const { return ids_.at(index); }
  bool contains(NodeId id) const noexcept;
  /// Rank of `id`; throws InvalidArgument for unknown identifiers.
  std::size_t index_of(NodeId id) const;

  std::span<const NodeId> neighbors(NodeId id) const { return adj_.at(index_of(id)); }
  std::span<const NodeId> neighbors_at(std::size_t index) const { return adj_.at(index); }
  std::span<const std::uint32_t> neighbor_indices(std::size_t index) const { return adj_idx_.at(index); }
  std::size_t degree(NodeId id) const { return neighbors(id).size(); }
  bool adjacent(NodeId u, NodeId v) const;

  /// Edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const noexcept {
    return d_ == other.d_ && ids_ == other.ids_ && adj_ == other.adj_;
  }

 private:
  std::uint64_t d_ = 0;
  std::vector<NodeId> ids_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::vector<std::uint32_t>> adj_idx_;
  std::size_t max_degree_ = 0;
  std::size_t edge_count_ = 0;
};

/// A tree together with a parent pointer for every node.
class RootedTree {
 public:
  /// `parent[i]` is the parent identifier of graph.id_at(i), or kRoot.
  /// Throws InvalidArgument unless the graph is a tree, exactly one node is
  /// the root, and every parent is a neighbor.
  RootedTree(Graph graph, std::vector<NodeId> parent);

  const Graph& graph() const noexcept { return graph_; }
  NodeId parent(NodeId id) const { return parent_.at(graph_.index_of(id)); }
  NodeId parent_at(std::size_t index) const { return parent_.at(index); }
  std::span<const NodeId> parents() const noexcept { return parent_; }
  NodeId root() const noexcept { return root_; }
  /// Distance from the root.
  std::size_t depth(NodeId id) const;

 private:
  Graph graph_;
  std::vector<NodeId> parent_;
  NodeId root_ = kRoot;
};

enum class ProblemKind { Mis, MaximalMatching, VertexColoring, EdgeColoring };

const char* to_string(ProblemKind kind) noexcept;
std::optional<ProblemKind> parse_problem(std::string_view text) noexcept;

struct MisBit {
  bool in_set = false;
  auto operator<=>(const MisBit&) const = default;
};

/// Matching output; an empty partner is the unmatched marker.
struct MatchPartner {
  std::optional<NodeId> partner;
  auto operator<=>(const MatchPartner&) const = default;
};

struct VertexColor {
  Color color = 0;
  auto operator<=>(const VertexColor&) const = default;
};

/// One color per incident edge, keyed by the neighbor at the other end.
struct EdgeColors {
  std::map<NodeId, Color> by_neighbor;
  auto operator<=>(const EdgeColors&) const = default;
};

using OutputValue = std::variant<MisBit, MatchPartner, VertexColor, EdgeColors>;

/// Per-node values: predictions or outputs.
using Assignment = std::map<NodeId, OutputValue>;

ProblemKind kind_of(const OutputValue& value) noexcept;
std::string to_string(const OutputValue& value);

/// Induced subgraph on `keep`; d is unchanged. Throws InvalidArgument for
/// identifiers not in `g`.
Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep);

/// Maximal connected induced subgraphs, ordered by smallest member.
std::vector<Graph> components(const Graph& g);

}  // namespace predsync

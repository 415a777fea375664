#include "predsync/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "predsync/error.hpp"

namespace predsync {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::DuplicateId: return "DUPLICATE_ID";
    case ErrorCode::SelfLoop: return "SELF_LOOP";
    case ErrorCode::IdOutOfRange: return "ID_OUT_OF_RANGE";
    case ErrorCode::MalformedLine: return "MALFORMED_LINE";
    case ErrorCode::NonTermination: return "NON_TERMINATION";
    case ErrorCode::ProtocolViolation: return "PROTOCOL_VIOLATION";
    case ErrorCode::EmptyPalette: return "EMPTY_PALETTE";
    case ErrorCode::InconsistentPrediction: return "INCONSISTENT_PREDICTION";
    case ErrorCode::IncompatiblePattern: return "INCOMPATIBLE_PATTERN";
    case ErrorCode::RoundOutOfRange: return "ROUND_OUT_OF_RANGE";
    case ErrorCode::Config: return "CONFIG";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Graph::Graph(std::uint64_t d, std::vector<NodeId> ids, std::span<const Edge> edges)
    : d_(d), ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] < 1 || ids_[i] > d_) {
      throw Error(ErrorCode::IdOutOfRange, "identifier " + std::to_string(ids_[i]) + " not in {1.." +
                                               std::to_string(d_) + "}");
    }
    if (i > 0 && ids_[i] == ids_[i - 1]) {
      throw Error(ErrorCode::DuplicateId, "identifier " + std::to_string(ids_[i]) + " repeated");
    }
  }
  adj_.assign(ids_.size(), {});
  for (const auto& [u, v] : edges) {
    if (u == v) throw Error(ErrorCode::SelfLoop, "edge " + std::to_string(u) + " " + std::to_string(v));
    adj_[index_of(u)].push_back(v);
    adj_[index_of(v)].push_back(u);
  }
  adj_idx_.assign(ids_.size(), {});
  for (std::size_t i = 0; i < adj_.size(); ++i) {
    auto& list = adj_[i];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    max_degree_ = std::max(max_degree_, list.size());
    edge_count_ += list.size();
    adj_idx_[i].reserve(list.size());
    for (NodeId v : list) adj_idx_[i].push_back(static_cast<std::uint32_t>(index_of(v)));
  }
  edge_count_ /= 2;
}

bool Graph::contains(NodeId id) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

std::size_t Graph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw Error(ErrorCode::InvalidArgument, "unknown node " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

bool Graph::adjacent(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    for (NodeId v : adj_[i]) {
      if (ids_[i] < v) out.emplace_back(ids_[i], v);
    }
  }
  return out;
}

RootedTree::RootedTree(Graph graph, std::vector<NodeId> parent)
    : graph_(std::move(graph)), parent_(std::move(parent)) {
  const std::size_t n = graph_.n();
  if (parent_.size() != n) throw Error(ErrorCode::InvalidArgument, "parent list size mismatch");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "rooted tree needs a node");
  if (graph_.edge_count() != n - 1) throw Error(ErrorCode::InvalidArgument, "graph is not a tree");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent_[i] == kRoot) {
      ++roots;
      root_ = graph_.id_at(i);
    } else if (!graph_.contains(parent_[i]) || !graph_.adjacent(graph_.id_at(i), parent_[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "parent of " + std::to_string(graph_.id_at(i)) + " is not a neighbor");
    }
  }
  if (roots != 1) throw Error(ErrorCode::InvalidArgument, "expected exactly one root");
  // n-1 edges, every non-root points to a neighbor, and no cycle of parent
  // pointers: then parent edges are exactly the tree edges.
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 reaches root
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      if (parent_[cur] == kRoot) break;
      cur = graph_.index_of(parent_[cur]);
    }
    if (state[cur] == 1 && parent_[cur] != kRoot) {
      throw Error(ErrorCode::InvalidArgument, "parent pointers form a cycle");
    }
    for (auto i : path) state[i] = 2;
  }
}

std::size_t RootedTree::depth(NodeId id) const {
  std::size_t depth = 0;
  for (NodeId p = parent(id); p != kRoot; p = parent(p)) ++depth;
  return depth;
}

const char* to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Mis: return "MIS";
    case ProblemKind::MaximalMatching: return "MAXIMAL_MATCHING";
    case ProblemKind::VertexColoring: return "VERTEX_COLORING";
    case ProblemKind::EdgeColoring: return "EDGE_COLORING";
  }
  return "?";
}

std::optional<ProblemKind> parse_problem(std::string_view text) noexcept {
  if (text == "MIS" || text == "mis") return ProblemKind::Mis;
  if (text == "MAXIMAL_MATCHING" || text == "mm" || text == "matching") return ProblemKind::MaximalMatching;
  if (text == "VERTEX_COLORING" || text == "vc") return ProblemKind::VertexColoring;
  if (text == "EDGE_COLORING" || text == "ec") return ProblemKind::EdgeColoring;
  return std::nullopt;
}

ProblemKind kind_of(const OutputValue& value) noexcept {
  switch (value.index()) {
    case 0: return ProblemKind::Mis;
    case 1: return ProblemKind::MaximalMatching;
    case 2: return ProblemKind::VertexColoring;
    default: return ProblemKind::EdgeColoring;
  }
}

std::string to_string(const OutputValue& value) {
  struct Visitor {
    std::string operator()(const MisBit& b) const { return b.in_set ? "1" : "0"; }
    std::string operator()(const MatchPartner& m) const {
      return m.partner ? std::to_string(*m.partner) : "-";
    }
    std::string operator()(const VertexColor& c) const { return std::to_string(c.color); }
    std::string operator()(const EdgeColors& e) const {
      std::ostringstream os;
      bool first = true;
      for (const auto& [nb, c] : e.by_neighbor) {
        os << (first ? "" : ";") << nb << ':' << c;
        first = false;
      }
      return os.str();
    }
  };
  return std::visit(Visitor{}, value);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
  std::vector<NodeId> ids(keep.begin(), keep.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Edge> edges;
  for (NodeId u : ids) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v && std::binary_search(ids.begin(), ids.end(), v)) edges.emplace_back(u, v);
    }
  }
  return Graph(g.d(), std::move(ids), edges);
}

std::vector<Graph> components(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<int> label(n, -1);
  std::vector<Graph> out;
  std::vector<std::size_t> stack;
  // Ranks ascend with identifiers, so discovery order is already sorted by
  // smallest member.
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != -1) continue;
    const int c = static_cast<int>(out.size());
    std::vector<NodeId> members;
    label[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      members.push_back(g.id_at(u));
      for (auto v : g.neighbor_indices(u)) {
        if (label[v] == -1) {
          label[v] = c;
          stack.push_back(v);
        }
      }
    }
    out.push_back(induced_subgraph(g, members));
  }
  return out;
}

}  // namespace predsync

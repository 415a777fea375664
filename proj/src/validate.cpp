#include "predsync/validate.hpp"

#include <set>

namespace predsync {

const char* to_string(ViolationCode code) noexcept {
  switch (code) {
    case ViolationCode::Independence: return "INDEPENDENCE";
    case ViolationCode::Maximality: return "MAXIMALITY";
    case ViolationCode::Symmetry: return "SYMMETRY";
    case ViolationCode::Range: return "RANGE";
    case ViolationCode::Conflict: return "CONFLICT";
    case ViolationCode::Incomplete: return "INCOMPLETE";
  }
  return "?";
}

std::string Violation::describe() const {
  std::string out = std::string(to_string(code)) + " node=" + std::to_string(node);
  if (other) out += " other=" + std::to_string(*other);
  if (!detail.empty()) out += ": " + detail;
  return out;
}

namespace {

template <typename T>
const T* get(const Assignment& outputs, NodeId v) {
  auto it = outputs.find(v);
  if (it == outputs.end()) return nullptr;
  return std::get_if<T>(&it->second);
}

template <typename T>
std::optional<Violation> require_all(const Graph& g, const Assignment& outputs) {
  for (NodeId v : g.ids()) {
    auto it = outputs.find(v);
    if (it == outputs.end()) return Violation{ViolationCode::Incomplete, v, {}, "no output"};
    if (!std::holds_alternative<T>(it->second)) {
      return Violation{ViolationCode::Range, v, {}, "output of the wrong problem kind"};
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_mis(const Graph& g, const Assignment& out) {
  if (auto bad = require_all<MisBit>(g, out)) return bad;
  for (NodeId v : g.ids()) {
    const bool in = get<MisBit>(out, v)->in_set;
    bool has_one = false;
    for (NodeId u : g.neighbors(v)) {
      if (get<MisBit>(out, u)->in_set) {
        if (in) return Violation{ViolationCode::Independence, v, u, "adjacent nodes both output 1"};
        has_one = true;
      }
    }
    if (!in && !has_one) return Violation{ViolationCode::Maximality, v, {}, "outputs 0 without a neighbor in the set"};
  }
  return std::nullopt;
}

std::optional<Violation> validate_matching(const Graph& g, const Assignment& out) {
  if (auto bad = require_all<MatchPartner>(g, out)) return bad;
  for (NodeId v : g.ids()) {
    const auto& partner = get<MatchPartner>(out, v)->partner;
    if (partner) {
      if (!g.contains(*partner) || !g.adjacent(v, *partner)) {
        return Violation{ViolationCode::Range, v, partner, "partner is not a neighbor"};
      }
      if (get<MatchPartner>(out, *partner)->partner != v) {
        return Violation{ViolationCode::Symmetry, v, partner, "partner does not reciprocate"};
      }
    } else {
      for (NodeId u : g.neighbors(v)) {
        if (!get<MatchPartner>(out, u)->partner) {
          return Violation{ViolationCode::Maximality, v, u, "two adjacent unmatched nodes"};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_vertex_coloring(const Graph& g, const Assignment& out) {
  if (auto bad = require_all<VertexColor>(g, out)) return bad;
  const auto max_color = static_cast<Color>(g.max_degree() + 1);
  for (NodeId v : g.ids()) {
    const Color c = get<VertexColor>(out, v)->color;
    if (c < 1 || c > max_color) {
      return Violation{ViolationCode::Range, v, {}, "color " + std::to_string(c) + " outside {1.." +
                                                        std::to_string(max_color) + "}"};
    }
  }
  for (NodeId v : g.ids()) {
    for (NodeId u : g.neighbors(v)) {
      if (get<VertexColor>(out, u)->color == get<VertexColor>(out, v)->color) {
        return Violation{ViolationCode::Conflict, v, u, "adjacent nodes share a color"};
      }
    }
  }
  return std::nullopt;
}

std::optional<Violation> validate_edge_coloring(const Graph& g, const Assignment& out) {
  if (auto bad = require_all<EdgeColors>(g, out)) return bad;
  const auto max_color = static_cast<Color>(2 * g.max_degree() - 1);
  for (NodeId v : g.ids()) {
    const auto& colors = get<EdgeColors>(out, v)->by_neighbor;
    for (const auto& [u, c] : colors) {
      if (!g.contains(u) || !g.adjacent(v, u)) {
        return Violation{ViolationCode::Range, v, u, "color for a non-incident edge"};
      }
    }
    std::set<Color> used;
    for (NodeId u : g.neighbors(v)) {
      auto it = colors.find(u);
      if (it == colors.end()) return Violation{ViolationCode::Incomplete, v, u, "edge has no color"};
      if (it->second < 1 || it->second > max_color) {
        return Violation{ViolationCode::Range, v, u, "color " + std::to_string(it->second) + " outside {1.." +
                                                         std::to_string(max_color) + "}"};
      }
      const auto& theirs = get<EdgeColors>(out, u)->by_neighbor;
      auto back = theirs.find(v);
      if (back == theirs.end() || back->second != it->second) {
        return Violation{ViolationCode::Symmetry, v, u, "endpoints disagree on the edge color"};
      }
      if (!used.insert(it->second).second) {
        return Violation{ViolationCode::Conflict, v, u, "two incident edges share a color"};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> validate(ProblemKind kind, const Graph& g, const Assignment& outputs) {
  switch (kind) {
    case ProblemKind::Mis: return validate_mis(g, outputs);
    case ProblemKind::MaximalMatching: return validate_matching(g, outputs);
    case ProblemKind::VertexColoring: return validate_vertex_coloring(g, outputs);
    case ProblemKind::EdgeColoring: return validate_edge_coloring(g, outputs);
  }
  return std::nullopt;
}

}  // namespace predsync

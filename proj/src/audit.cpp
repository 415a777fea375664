#include "predsync/audit.hpp"

namespace predsync {

namespace {

template <typename T>
const T* as(const std::optional<OutputValue>& v) {
  return v ? std::get_if<T>(&*v) : nullptr;
}

std::string edge_text(NodeId u, NodeId v) { return std::to_string(u) + "-" + std::to_string(v); }

}  // namespace

std::optional<std::string> extendability_violation(ProblemKind kind, const Graph& g,
                                                   std::span<const std::optional<OutputValue>> outputs) {
  const auto delta = static_cast<Color>(g.max_degree());
  for (std::size_t i = 0; i < g.n(); ++i) {
    const NodeId id = g.id_at(i);
    const auto nbs = g.neighbor_indices(i);
    switch (kind) {
      case ProblemKind::Mis: {
        const auto* b = as<MisBit>(outputs[i]);
        if (!b) break;
        bool has_one = false;
        for (auto j : nbs) {
          const auto* nb = as<MisBit>(outputs[j]);
          if (b->in_set && (!nb || nb->in_set)) return "node " + std::to_string(id) + " output 1 but neighbor " + std::to_string(g.id_at(j)) + " did not output 0";
          has_one = has_one || (nb && nb->in_set);
        }
        if (!b->in_set && !has_one) return "node " + std::to_string(id) + " output 0 without a neighbor in the set";
        break;
      }
      case ProblemKind::MaximalMatching: {
        const auto* m = as<MatchPartner>(outputs[i]);
        if (!m) break;
        if (m->partner) {
          if (!g.contains(*m->partner) || !g.adjacent(id, *m->partner)) return "node " + std::to_string(id) + " matched to a non-neighbor";
          const auto* back = as<MatchPartner>(outputs[g.index_of(*m->partner)]);
          if (!back || back->partner != id) return "match " + edge_text(id, *m->partner) + " not confirmed by both ends";
        } else {
          for (auto j : nbs) {
            const auto* nb = as<MatchPartner>(outputs[j]);
            if (!nb || !nb->partner) return "unmatched node " + std::to_string(id) + " has unmatched neighbor " + std::to_string(g.id_at(j));
          }
        }
        break;
      }
      case ProblemKind::VertexColoring: {
        const auto* c = as<VertexColor>(outputs[i]);
        if (!c) break;
        if (c->color < 1 || c->color > delta + 1) return "node " + std::to_string(id) + " color out of range";
        for (auto j : nbs) {
          const auto* nb = as<VertexColor>(outputs[j]);
          if (nb && nb->color == c->color) return "edge " + edge_text(id, g.id_at(j)) + " has equal colors";
        }
        break;
      }
      case ProblemKind::EdgeColoring: {
        const auto* e = as<EdgeColors>(outputs[i]);
        if (!e) break;
        std::set<Color> seen;
        for (const auto& [v, c] : e->by_neighbor) {
          if (c < 1 || c > 2 * delta - 1) return "edge " + edge_text(id, v) + " color out of range";
          if (!seen.insert(c).second) return "node " + std::to_string(id) + " repeats color " + std::to_string(c);
          const auto* other = as<EdgeColors>(outputs[g.index_of(v)]);
          bool agree = false;
          if (other) {
            auto it = other->by_neighbor.find(id);
            agree = it != other->by_neighbor.end() && it->second == c;
          }
          if (!agree) return "edge " + edge_text(id, v) + " colored at one end only";
        }
        break;
      }
    }
  }
  return std::nullopt;
}

std::set<int> checkpoints(const Schedule& schedule, int upto) {
  std::set<int> out;
  for (const Segment& s : schedule.segments(upto)) {
    const int last = s.length < 0 ? upto : std::min(upto, s.start + s.length - 1);
    if (s.audit_period > 0) {
      for (int r = s.start; r <= last; ++r) {
        if ((s.local_offset + r - s.start + 1) % s.audit_period == 0) out.insert(r);
      }
    }
    if (s.extendable_end && s.length >= 0 && s.start + s.length - 1 <= upto) out.insert(s.start + s.length - 1);
  }
  out.erase(0);
  return out;
}

void ExtendabilityAuditor::operator()(const RoundSnapshot& snap) {
  if (!rounds_.contains(snap.round)) return;
  ++audited_;
  if (auto v = extendability_violation(kind_, *snap.graph, snap.outputs)) {
    violations_.push_back("round " + std::to_string(snap.round) + ": " + *v);
  }
}

}  // namespace predsync

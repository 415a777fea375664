#include "predsync/prediction_error.hpp"

#include <algorithm>
#include <limits>

#include "predsync/engine.hpp"
#include "predsync/error.hpp"
#include "predsync/oracles.hpp"
#include "predsync/registry.hpp"
#include "predsync/rng.hpp"

namespace predsync {

namespace {

const char* base_program(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Mis: return "mis.base";
    case ProblemKind::MaximalMatching: return "mm.base";
    case ProblemKind::VertexColoring: return "vc.base";
    case ProblemKind::EdgeColoring: return "ec.base";
  }
  return "";
}

const char* uniform_program(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Mis: return "mis.greedy";
    case ProblemKind::MaximalMatching: return "mm.uniform";
    case ProblemKind::VertexColoring: return "vc.uniform";
    case ProblemKind::EdgeColoring: return "ec.uniform";
  }
  return "";
}

Outcome run_base(ProblemKind kind, const Graph& g, const Assignment& predictions) {
  const BuiltProgram p = standalone(base_program(kind), g);
  SimulationOptions opts;
  opts.max_rounds = p.max_rounds;
  return simulate(g, p.factory, predictions, opts);
}

// Undecided edges (u < v) after the edge-coloring base program.
std::vector<Edge> uncolored_edges(const Graph& g, const Outcome& out) {
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) {
    const auto& r = out.nodes.at(u);
    const auto* e = r.output ? std::get_if<EdgeColors>(&*r.output) : nullptr;
    if (!e || !e->by_neighbor.contains(v)) edges.emplace_back(u, v);
  }
  return edges;
}

bool predicted_black(const Assignment& p, NodeId u) {
  auto it = p.find(u);
  if (it == p.end()) throw Error(ErrorCode::InvalidArgument, "no prediction for node " + std::to_string(u));
  const auto* b = std::get_if<MisBit>(&it->second);
  if (!b) throw Error(ErrorCode::InvalidArgument, "prediction is not an MIS bit");
  return b->in_set;
}

}  // namespace

std::vector<NodeId> undecided_after_base(ProblemKind kind, const Graph& g, const Assignment& predictions) {
  const Outcome out = run_base(kind, g, predictions);
  std::vector<NodeId> keep;
  if (kind == ProblemKind::EdgeColoring) {
    std::set<NodeId> ends;
    for (const auto& [u, v] : uncolored_edges(g, out)) {
      ends.insert(u);
      ends.insert(v);
    }
    keep.assign(ends.begin(), ends.end());
    return keep;
  }
  for (const auto& [id, r] : out.nodes) {
    if (!r.complete) keep.push_back(id);
  }
  return keep;
}

std::vector<ErrorComponent> error_components(ProblemKind kind, const Graph& g, const Assignment& predictions) {
  std::vector<ErrorComponent> out;
  if (kind == ProblemKind::EdgeColoring) {
    const Outcome run = run_base(kind, g, predictions);
    const auto edges = uncolored_edges(g, run);
    std::set<NodeId> ends;
    for (const auto& [u, v] : edges) {
      ends.insert(u);
      ends.insert(v);
    }
    const Graph sub(g.d(), std::vector<NodeId>(ends.begin(), ends.end()), edges);
    for (auto& c : components(sub)) out.push_back({std::move(c), ErrorComponent::Kind::EdgeInduced});
    return out;
  }
  const auto keep = undecided_after_base(kind, g, predictions);
  for (auto& c : components(induced_subgraph(g, keep))) out.push_back({std::move(c), ErrorComponent::Kind::General});
  return out;
}

std::size_t mu1(const Graph& s) { return s.n(); }

std::size_t mu2(const Graph& s) {
  const std::size_t a = alpha(s);
  return 2 * std::min(a, s.n() - a);
}

std::size_t eta(Measure measure, ProblemKind kind, const Graph& g, const Assignment& predictions) {
  std::size_t best = 0;
  for (const auto& c : error_components(kind, g, predictions)) {
    best = std::max(best, measure == Measure::Mu1 ? mu1(c.subgraph) : mu2(c.subgraph));
  }
  return best;
}

std::size_t eta_bw(const Graph& g, const Assignment& predictions) {
  const auto keep = undecided_after_base(ProblemKind::Mis, g, predictions);
  std::size_t best = 0;
  for (bool black : {true, false}) {
    std::vector<NodeId> side;
    for (NodeId u : keep) {
      if (predicted_black(predictions, u) == black) side.push_back(u);
    }
    for (const auto& c : components(induced_subgraph(g, side))) best = std::max(best, c.n());
  }
  return best;
}

std::size_t eta_t(const RootedTree& t, const Assignment& predictions) {
  const auto keep = undecided_after_base(ProblemKind::Mis, t.graph(), predictions);
  const std::set<NodeId> active(keep.begin(), keep.end());
  std::size_t best = 0;
  for (NodeId u : keep) {
    const bool color = predicted_black(predictions, u);
    std::size_t count = 1;
    for (NodeId v = t.parent(u); v != kRoot && active.contains(v) && predicted_black(predictions, v) == color;
         v = t.parent(v)) {
      ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::size_t eta_hamming(const Graph& g, const Assignment& predictions) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& mis : enumerate_mis(g)) {
    const std::set<NodeId> in(mis.begin(), mis.end());
    std::size_t changes = 0;
    for (NodeId u : g.ids()) changes += predicted_black(predictions, u) != in.contains(u) ? 1 : 0;
    best = std::min(best, changes);
  }
  return g.n() == 0 ? 0 : best;
}

ErrorReport error_report(ProblemKind kind, const Graph& g, const RootedTree* tree, const Assignment& predictions) {
  ErrorReport rep;
  rep.components = error_components(kind, g, predictions);
  bool within_cap = true;
  std::size_t eta2 = 0;
  for (const auto& c : rep.components) {
    rep.eta1 = std::max(rep.eta1, c.subgraph.n());
    if (c.subgraph.n() > kExactSolveCap) within_cap = false;
    else eta2 = std::max(eta2, mu2(c.subgraph));
  }
  if (within_cap) rep.eta2 = eta2;
  if (kind == ProblemKind::Mis) {
    rep.eta_bw = eta_bw(g, predictions);
    if (tree) rep.eta_t = eta_t(*tree, predictions);
    if (g.n() <= kEnumerationCap) rep.eta_hamming = eta_hamming(g, predictions);
  }
  return rep;
}

Assignment solve(ProblemKind kind, const Graph& g) {
  const BuiltProgram p = standalone(uniform_program(kind), g);
  SimulationOptions opts;
  opts.max_rounds = std::max(p.max_rounds, static_cast<int>(4 * g.n() + 20));
  return simulate(g, p.factory, NoPredictions{}, opts).outputs();
}

Assignment corrupt(ProblemKind kind, const Graph& g, const Assignment& correct, std::size_t k, std::uint64_t seed) {
  if (k > g.n()) throw Error(ErrorCode::InvalidArgument, "corruption count exceeds n");
  SplitMix64 rng(seed);
  std::vector<NodeId> order(g.ids().begin(), g.ids().end());
  rng.shuffle(order);
  Assignment out = correct;
  const auto delta = static_cast<Color>(g.max_degree());
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId u = order[i];
    OutputValue& value = out.at(u);
    switch (kind) {
      case ProblemKind::Mis:
        std::get<MisBit>(value).in_set = !std::get<MisBit>(value).in_set;
        break;
      case ProblemKind::MaximalMatching: {
        auto& m = std::get<MatchPartner>(value);
        std::vector<std::optional<NodeId>> options{std::nullopt};
        for (NodeId v : g.neighbors(u)) options.emplace_back(v);
        std::erase(options, m.partner);
        if (!options.empty()) m.partner = options[rng.below(options.size())];
        break;
      }
      case ProblemKind::VertexColoring: {
        auto& c = std::get<VertexColor>(value);
        if (delta < 1) break;
        Color next = static_cast<Color>(1 + rng.below(static_cast<std::uint64_t>(delta)));
        if (next >= c.color) ++next;
        c.color = next;
        break;
      }
      case ProblemKind::EdgeColoring: {
        const auto nbs = g.neighbors(u);
        if (nbs.empty() || delta < 2) break;
        const NodeId v = nbs[rng.below(nbs.size())];
        const Color old = std::get<EdgeColors>(value).by_neighbor.at(v);
        Color next = static_cast<Color>(1 + rng.below(static_cast<std::uint64_t>(2 * delta - 2)));
        if (next >= old) ++next;
        std::get<EdgeColors>(value).by_neighbor[v] = next;
        std::get<EdgeColors>(out.at(v)).by_neighbor[u] = next;
        break;
      }
    }
  }
  return out;
}

Assignment pattern(std::string_view name, const Instance& instance) {
  const Graph& g = instance.graph;
  Assignment out;
  auto incompatible = [&](const std::string& why) {
    return Error(ErrorCode::IncompatiblePattern, std::string(name) + ": " + why);
  };
  if (name == "ALL_ONES" || name == "ALL_ZEROS") {
    for (NodeId u : g.ids()) out[u] = MisBit{name == "ALL_ONES"};
    return out;
  }
  if (name == "GRID_4BLOCK") {
    if (instance.family != Family::Grid) throw incompatible("needs a GRID instance");
    for (const auto& [u, rc] : instance.coords) {
      const bool row_low = rc.row % 4 < 2;
      const bool col_low = rc.col % 4 < 2;
      out[u] = MisBit{row_low == col_low};
    }
    return out;
  }
  if (name == "MOD3_LINE") {
    if (!instance.tree) throw incompatible("needs a rooted tree");
    const RootedTree& t = *instance.tree;
    std::map<NodeId, int> children;
    for (NodeId u : g.ids()) {
      if (t.parent(u) != kRoot) ++children[t.parent(u)];
    }
    for (const auto& [u, c] : children) {
      if (c > 1) throw incompatible("tree is not a directed line");
    }
    for (NodeId u : g.ids()) out[u] = MisBit{t.depth(u) % 3 != 0};
    return out;
  }
  throw Error(ErrorCode::Config, "unknown pattern '" + std::string(name) + "'");
}

}  // namespace predsync

#pragma once

// Brute-force oracles and small graph builders shared by the test binaries.
// Nothing here calls into the library's own oracles.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "predsync/audit.hpp"
#include "predsync/engine.hpp"
#include "predsync/generators.hpp"
#include "predsync/graph.hpp"
#include "predsync/registry.hpp"
#include "predsync/templates.hpp"

namespace testing {

using namespace predsync;

inline Graph make_graph(std::size_t n, const std::vector<Edge>& edges, std::uint64_t d = 0) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{1});
  return Graph(d ? d : n, ids, edges);
}

inline Graph with_ids(const std::vector<NodeId>& ids, const std::vector<Edge>& edges, std::uint64_t d) {
  return Graph(d, ids, edges);
}

inline Graph line(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

inline Graph clique(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = i + 1; j <= n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 2; i <= leaves + 1; ++i) e.emplace_back(1, i);
  return make_graph(leaves + 1, e);
}

inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, bool connected = false) {
  GenParams gp;
  gp.n = n;
  gp.p = p;
  gp.connected = connected;
  return generate(Family::Random, gp, IdScheme::SeededPermutation, seed).graph;
}

inline Assignment bits(const Graph& g, const std::set<NodeId>& ones) {
  Assignment a;
  for (NodeId u : g.ids()) a[u] = MisBit{ones.contains(u)};
  return a;
}

// ---- oracles ---------------------------------------------------------------

inline bool independent(const Graph& g, std::uint64_t mask) {
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (!(mask >> i & 1)) continue;
    for (auto j : g.neighbor_indices(i)) {
      if (mask >> j & 1) return false;
    }
  }
  return true;
}

/// Largest independent set by trying every subset (n ≤ 24).
inline std::size_t brute_alpha(const Graph& g) {
  std::size_t best = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.n()); ++m) {
    if (independent(g, m)) best = std::max<std::size_t>(best, std::popcount(m));
  }
  return best;
}

inline std::size_t brute_mu2(const Graph& g) {
  const std::size_t a = brute_alpha(g);
  return 2 * std::min(a, g.n() - a);
}

inline bool is_mis(const Graph& g, const std::set<NodeId>& s) {
  for (NodeId u : g.ids()) {
    bool covered = s.contains(u);
    for (NodeId v : g.neighbors(u)) {
      if (s.contains(u) && s.contains(v)) return false;
      covered = covered || s.contains(v);
    }
    if (!covered) return false;
  }
  return true;
}

inline std::vector<std::set<NodeId>> brute_all_mis(const Graph& g) {
  std::vector<std::set<NodeId>> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.n()); ++m) {
    std::set<NodeId> s;
    for (std::size_t i = 0; i < g.n(); ++i)
      if (m >> i & 1) s.insert(g.id_at(i));
    if (is_mis(g, s)) out.push_back(s);
  }
  return out;
}

/// Component sizes by union-find, sorted descending.
inline std::vector<std::size_t> uf_component_sizes(const Graph& g) {
  std::vector<std::size_t> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : g.edges()) parent[find(g.index_of(u))] = find(g.index_of(v));
  std::vector<std::size_t> count(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) ++count[find(i)];
  std::vector<std::size_t> sizes;
  for (auto c : count)
    if (c) sizes.push_back(c);
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

inline std::optional<std::size_t> bfs_diameter(const Graph& g) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < g.n(); ++s) {
    std::vector<int> dist(g.n(), -1);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      for (auto y : g.neighbor_indices(x)) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push(y);
        }
      }
    }
    for (int d : dist) {
      if (d < 0) return std::nullopt;
      best = std::max<std::size_t>(best, d);
    }
  }
  return best;
}

inline std::set<NodeId> ones(const Assignment& a) {
  std::set<NodeId> s;
  for (const auto& [u, v] : a)
    if (std::get<MisBit>(v).in_set) s.insert(u);
  return s;
}

inline bool proper_coloring(const Graph& g, const Assignment& a, Color palette) {
  for (NodeId u : g.ids()) {
    auto it = a.find(u);
    if (it == a.end()) return false;
    const Color c = std::get<VertexColor>(it->second).color;
    if (c < 1 || c > palette) return false;
    for (NodeId v : g.neighbors(u)) {
      auto jt = a.find(v);
      if (jt != a.end() && std::get<VertexColor>(jt->second).color == c) return false;
    }
  }
  return true;
}

inline bool maximal_matching(const Graph& g, const Assignment& a) {
  for (NodeId u : g.ids()) {
    auto it = a.find(u);
    if (it == a.end()) return false;
    const auto p = std::get<MatchPartner>(it->second).partner;
    if (p) {
      if (!g.adjacent(u, *p)) return false;
      if (std::get<MatchPartner>(a.at(*p)).partner != u) return false;
    } else {
      for (NodeId v : g.neighbors(u))
        if (!std::get<MatchPartner>(a.at(v)).partner) return false;
    }
  }
  return true;
}

inline bool proper_edge_coloring(const Graph& g, const Assignment& a) {
  const Color palette = 2 * static_cast<Color>(g.max_degree()) - 1;
  for (NodeId u : g.ids()) {
    if (g.degree(u) == 0) continue;
    auto it = a.find(u);
    if (it == a.end()) return false;
    const auto& by = std::get<EdgeColors>(it->second).by_neighbor;
    std::set<Color> seen;
    for (NodeId v : g.neighbors(u)) {
      auto c = by.find(v);
      if (c == by.end() || c->second < 1 || c->second > palette) return false;
      if (!seen.insert(c->second).second) return false;
      if (std::get<EdgeColors>(a.at(v)).by_neighbor.at(u) != c->second) return false;
    }
  }
  return true;
}

// ---- running programs ------------------------------------------------------

inline Outcome run(const std::string& name, const Graph& g, const Assignment* predictions = nullptr,
                   SimulationOptions opts = {}, const ProgramContext& extra = {}) {
  ProgramContext ctx = extra;
  if (predictions) ctx.predictions = predictions;
  const BuiltProgram p = standalone(name, g, ctx);
  if (!opts.max_rounds) opts.max_rounds = p.max_rounds;
  if (p.factory.needs_predictions) return simulate(g, p.factory, predictions ? *predictions : Assignment{}, opts);
  return simulate(g, p.factory, NoPredictions{}, opts);
}

inline Outcome run_tree(const std::string& name, const RootedTree& t, const Assignment* predictions = nullptr,
                        SimulationOptions opts = {}) {
  ProgramContext ctx;
  ctx.predictions = predictions;
  const BuiltProgram p = standalone(name, t.graph(), ctx);
  if (!opts.max_rounds) opts.max_rounds = p.max_rounds;
  if (p.factory.needs_predictions) return simulate(t, p.factory, predictions ? *predictions : Assignment{}, opts);
  return simulate(t, p.factory, NoPredictions{}, opts);
}

/// Directed line 1 <- 2 <- ... <- n rooted at 1.
inline RootedTree directed_line(std::size_t n) {
  std::vector<NodeId> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i == 0 ? kRoot : NodeId(i);
  return RootedTree(line(n), parent);
}

struct TemplateRun {
  Outcome out;
  TemplateBudgets budgets;
  std::vector<std::string> audit;
  int audited = 0;
};

/// Builds and runs a template with the extendability auditor attached.
inline TemplateRun run_template(const TemplateSpec& spec, const Graph& g, const Assignment& p,
                                const RootedTree* tree = nullptr) {
  const BuiltTemplate t = build_template(spec, params_of(g));
  SimulationOptions opts;
  opts.max_rounds = 40 * static_cast<int>(g.n()) + 400;
  ExtendabilityAuditor auditor(t.program.factory.kind, checkpoints(*t.program.schedule, opts.max_rounds));
  opts.observer = std::ref(auditor);
  TemplateRun r;
  r.budgets = t.budgets;
  if (tree) {
    r.out = t.program.factory.needs_predictions ? simulate(*tree, t.program.factory, p, opts)
                                                : simulate(*tree, t.program.factory, NoPredictions{}, opts);
  } else {
    r.out = t.program.factory.needs_predictions ? simulate(g, t.program.factory, p, opts)
                                                : simulate(g, t.program.factory, NoPredictions{}, opts);
  }
  r.audit = auditor.violations();
  r.audited = auditor.audited();
  return r;
}

/// Observer: stored colors of running nodes never clash along an edge.
struct ProperWhileRunning {
  std::vector<std::string> problems;
  void operator()(const RoundSnapshot& s) {
    for (std::size_t i = 0; i < s.graph->n(); ++i) {
      if (!s.active[i] || !s.stored[i]) continue;
      for (auto j : s.graph->neighbor_indices(i)) {
        if (j > i && s.active[j] && s.stored[j] == s.stored[i]) {
          problems.push_back("round " + std::to_string(s.round) + ": " + std::to_string(s.graph->id_at(i)) + "-" +
                             std::to_string(s.graph->id_at(j)));
        }
      }
    }
  }
};

}  // namespace testing

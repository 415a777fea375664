#include "doctest.h"
#include "predsync/error.hpp"
#include "predsync/prediction_error.hpp"
#include "predsync/programs.hpp"
#include "predsync/rng.hpp"
#include "predsync/templates.hpp"
#include "predsync/validate.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::optional<int> last_round(const Outcome& out, const Graph& comp) {
  int last = 0;
  for (NodeId u : comp.ids()) {
    if (!out.nodes.at(u).term_round) return std::nullopt;
    last = std::max(last, *out.nodes.at(u).term_round);
  }
  return last;
}

Graph connected(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_graph(n, 0.1 + 0.4 * rng.unit(), seed, true);
}

}  // namespace

TEST_CASE("matching prologue") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_graph(16, 0.25, seed);
    const Assignment p = solve(ProblemKind::MaximalMatching, g);
    for (const char* name : {"mm.base", "mm.init"}) {
      const Outcome out = run(name, g, &p);
      CHECK(out.total_rounds <= 2);
      CHECK(out.outputs() == p);
    }
  }
  const Graph edge = make_graph(2, {{1, 2}});
  const Assignment half{{1, MatchPartner{2}}, {2, MatchPartner{std::nullopt}}};
  CHECK(run("mm.base", edge, &half).outputs().empty());
  const Graph single = make_graph(1, {});
  const Assignment none{{1, MatchPartner{std::nullopt}}};
  CHECK(run("mm.base", single, &none).outputs() == none);
}

TEST_CASE("uniform matching") {
  const Outcome edge = run("mm.uniform", make_graph(2, {{1, 2}}));
  CHECK(edge.total_rounds <= 3);
  CHECK(std::get<MatchPartner>(*edge.nodes.at(1).output).partner == NodeId{2});
  const Outcome single = run("mm.uniform", make_graph(1, {}));
  CHECK(single.total_rounds == 1);
  CHECK_FALSE(std::get<MatchPartner>(*single.nodes.at(1).output).partner);
  const Outcome l3 = run("mm.uniform", line(3));
  CHECK(l3.total_rounds <= 3);
  CHECK(maximal_matching(line(3), l3.outputs()));
  std::size_t unmatched = 0;
  for (const auto& [u, v] : l3.outputs()) unmatched += std::get<MatchPartner>(v).partner ? 0 : 1;
  CHECK(unmatched == 1);
}

TEST_CASE("uniform matching bound") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Graph g = connected(2 + seed % 13, seed);
    const Outcome out = run("mm.uniform", g);
    CHECK(maximal_matching(g, out.outputs()));
    const long s = static_cast<long>(g.n());
    CHECK(out.total_rounds <= (s >= 2 ? 3 * (s / 2) : 1));
  }
}

TEST_CASE("vertex-coloring prologue") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_graph(16, 0.25, seed);
    const Assignment p = solve(ProblemKind::VertexColoring, g);
    const Outcome out = run("vc.init", g, &p);
    CHECK(out.total_rounds <= 2);
    CHECK(out.outputs() == p);
  }
  const Graph single = make_graph(1, {});
  const Assignment one{{1, VertexColor{1}}};
  CHECK(run("vc.base", single, &one).outputs() == one);

  // 7 keeps the shared color, 3 has it removed and picks the other
  const Graph edge = with_ids({3, 7}, {{3, 7}}, 10);
  const Assignment same{{3, VertexColor{1}}, {7, VertexColor{1}}};
  const Outcome init = run("vc.init", edge, &same);
  CHECK(init.outputs() == Assignment{{7, VertexColor{1}}});
  TemplateSpec spec = default_spec(TemplateKind::Simple, ProblemKind::VertexColoring);
  const BuiltTemplate t = build_template(spec, params_of(edge));
  const Outcome full = simulate(edge, t.program.factory, same);
  CHECK(full.outputs() == Assignment{{3, VertexColor{2}}, {7, VertexColor{1}}});

  const Assignment wild{{3, VertexColor{9}}, {7, VertexColor{1}}};
  CHECK_THROWS_AS(run("vc.base", edge, &wild), Error);
}

TEST_CASE("uniform vertex coloring") {
  const Outcome single = run("vc.uniform", make_graph(1, {}));
  CHECK(single.total_rounds == 1);
  const Outcome k4 = run("vc.uniform", clique(4));
  CHECK(k4.total_rounds == 4);
  CHECK(proper_coloring(clique(4), k4.outputs(), 4));
  const Outcome l6 = run("vc.uniform", line(6));
  CHECK(l6.total_rounds <= 6);
  CHECK(proper_coloring(line(6), l6.outputs(), 3));
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Graph g = connected(1 + seed % 14, seed);
    const Outcome out = run("vc.uniform", g);
    CHECK(proper_coloring(g, out.outputs(), static_cast<Color>(g.max_degree()) + 1));
    CHECK(out.total_rounds <= static_cast<int>(g.n()));
  }
}

TEST_CASE("Linial color reduction") {
  const Graph empty = make_graph(5, {});
  const Outcome e = run("vc.linial", empty);
  for (const auto& [u, r] : e.nodes) CHECK(r.stored == 1);

  std::vector<NodeId> ids;
  std::vector<Edge> edges;
  SplitMix64 rng(5);
  std::set<NodeId> used;
  while (used.size() < 50) used.insert(1 + rng.below(1000000000));
  ids.assign(used.begin(), used.end());
  rng.shuffle(ids);
  for (std::size_t i = 1; i < ids.size(); ++i) edges.emplace_back(ids[i - 1], ids[i]);
  std::sort(ids.begin(), ids.end());
  const Graph path(1000000000, ids, edges);
  const Outcome out = run("vc.linial", path);
  CHECK(out.total_rounds <= linial_rounds(2, 1000000000));
  Assignment c;
  for (const auto& [u, r] : out.nodes) {
    REQUIRE(r.stored);
    c[u] = VertexColor{*r.stored};
  }
  CHECK(proper_coloring(path, c, 3));

  // palette sizes shrink until the last reduction step
  const auto pal = linial_palettes(4, 1000000000);
  for (std::size_t i = 1; i < pal.size(); ++i) CHECK(pal[i] < pal[i - 1]);
  CHECK(linial_rounds(2, 1000000000) < linial_rounds(2, 1000) + 10);
}

TEST_CASE("fault-tolerant colorings survive crashes") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SplitMix64 rng(seed);
    const Graph g = random_graph(30, 0.15, seed);
    const int budget = linial_rounds(g.max_degree(), g.d());
    SimulationOptions opts;
    for (NodeId u : g.ids())
      if (rng.bernoulli(0.5)) opts.crash_after[u] = 1 + static_cast<int>(rng.below(budget));
    ProperWhileRunning check;
    opts.observer = std::ref(check);
    const Outcome out = run("vc.linial", g, nullptr, opts);
    CHECK(check.problems.empty());
    for (const auto& [u, v] : g.edges()) {
      if (opts.crash_after.contains(u) || opts.crash_after.contains(v)) continue;
      CHECK(out.nodes.at(u).stored != out.nodes.at(v).stored);
    }
    for (const auto& [u, r] : out.nodes) {
      if (opts.crash_after.contains(u)) continue;
      CHECK(*r.stored <= static_cast<Color>(g.max_degree()) + 1);
    }
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SplitMix64 rng(seed);
    GenParams gp;
    gp.n = 40;
    gp.d = 100000;
    const Instance t = generate(Family::Tree, gp, IdScheme::SeededPermutation, seed);
    const int budget = gps_rounds(gp.d);
    SimulationOptions opts;
    for (NodeId u : t.graph.ids())
      if (rng.bernoulli(0.5)) opts.crash_after[u] = 1 + static_cast<int>(rng.below(budget));
    ProperWhileRunning check;
    opts.observer = std::ref(check);
    const Outcome out = run_tree("mis.tree_gps", *t.tree, nullptr, opts);
    CHECK(check.problems.empty());
    for (const auto& [u, v] : t.graph.edges()) {
      if (opts.crash_after.contains(u) || opts.crash_after.contains(v)) continue;
      CHECK(out.nodes.at(u).stored != out.nodes.at(v).stored);
    }
  }
}

TEST_CASE("edge-coloring prologue") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_graph(16, 0.25, seed);
    const Assignment p = solve(ProblemKind::EdgeColoring, g);
    const Outcome out = run("ec.base", g, &p);
    CHECK(out.total_rounds <= 1);
    CHECK(out.outputs() == p);
  }
  const Graph edge = make_graph(2, {{1, 2}});
  const Assignment ok{{1, EdgeColors{{{2, 1}}}}, {2, EdgeColors{{{1, 1}}}}};
  const Outcome one = run("ec.base", edge, &ok);
  CHECK(one.total_rounds == 1);
  CHECK(one.outputs() == ok);

  // node 2 predicts color 1 for both of its edges
  const Graph l3 = line(3);
  const Assignment clash{{1, EdgeColors{{{2, 1}}}}, {2, EdgeColors{{{1, 1}, {3, 1}}}}, {3, EdgeColors{{{2, 1}}}}};
  const Outcome c = run("ec.base", l3, &clash);
  for (const auto& e : c.events) CHECK(std::get<EdgeColors>(e.value).by_neighbor.empty());
}

TEST_CASE("uniform edge coloring") {
  const Outcome edge = run("ec.uniform", make_graph(2, {{1, 2}}));
  CHECK(edge.total_rounds == 1);
  CHECK(edge.nodes.at(1).term_round == 1);
  CHECK(edge.nodes.at(2).term_round == 1);
  const Outcome single = run("ec.uniform", make_graph(1, {}));
  CHECK(single.total_rounds == 0);
  CHECK(single.events.empty());

  const Graph s = with_ids({1, 2, 3, 4, 5}, {{5, 1}, {5, 2}, {5, 3}, {5, 4}}, 5);
  const Outcome star = run("ec.uniform", s);
  CHECK(star.total_rounds == 1);
  CHECK(std::get<EdgeColors>(*star.nodes.at(5).output).by_neighbor.size() == 4);

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Graph g = connected(2 + seed % 13, seed);
    const Outcome out = run("ec.uniform", g);
    CHECK(proper_edge_coloring(g, out.outputs()));
    CHECK(out.total_rounds <= 2 * static_cast<int>(g.n()) - 3);
  }
}

TEST_CASE("uniform programs stay within their bounds on every component") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = random_graph(24, 0.08, seed);
    const Outcome mm = run("mm.uniform", g);
    const Outcome vc = run("vc.uniform", g);
    const Outcome ec = run("ec.uniform", g);
    for (const auto& comp : components(g)) {
      const int s = static_cast<int>(comp.n());
      CHECK(last_round(mm, comp) <= (s >= 2 ? 3 * (s / 2) : 1));
      CHECK(last_round(vc, comp) <= s);
      if (s >= 2) CHECK(last_round(ec, comp) <= 2 * s - 3);
    }
  }
}

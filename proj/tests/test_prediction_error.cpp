#include "doctest.h"
#include "predsync/error.hpp"
#include "predsync/oracles.hpp"
#include "predsync/prediction_error.hpp"
#include "predsync/rng.hpp"
#include "support.hpp"

using namespace testing;

namespace {

Instance grid16() {
  GenParams p;
  p.rows = p.cols = 16;
  return generate(Family::Grid, p, IdScheme::Increasing, 1);
}

Instance directed_path(std::size_t n, IdScheme ids = IdScheme::Increasing, std::uint64_t seed = 1) {
  GenParams p;
  p.n = n;
  p.shape = TreeShape::Path;
  return generate(Family::Tree, p, ids, seed);
}

Assignment random_bits(const Graph& g, double p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::set<NodeId> s;
  for (NodeId u : g.ids())
    if (rng.bernoulli(p)) s.insert(u);
  return bits(g, s);
}

}  // namespace

TEST_CASE("error components") {
  const Graph g = random_graph(20, 0.2, 5);
  const Assignment correct = solve(ProblemKind::Mis, g);
  CHECK(error_components(ProblemKind::Mis, g, correct).empty());
  CHECK(eta(Measure::Mu1, ProblemKind::Mis, g, correct) == 0);

  const Graph edge = make_graph(2, {{1, 2}});
  const auto both = error_components(ProblemKind::Mis, edge, bits(edge, {1, 2}));
  REQUIRE(both.size() == 1);
  CHECK(both[0].subgraph.n() == 2);

  // node 1's closed neighborhood is all zero
  const Graph l = line(4);
  const auto comps = error_components(ProblemKind::Mis, l, bits(l, {4}));
  bool found = false;
  for (const auto& c : comps) found = found || c.subgraph.contains(1);
  CHECK(found);
}

TEST_CASE("mu1 and mu2") {
  CHECK(mu1(make_graph(1, {})) == 1);
  CHECK(mu2(make_graph(1, {})) == 0);
  CHECK(mu2(clique(6)) == 2);
  CHECK(mu1(line(5)) == 5);
  CHECK(mu2(line(5)) == 4);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = random_graph(13, 0.25, seed);
    CHECK(mu2(g) == brute_mu2(g));
    CHECK(mu2(g) <= mu1(g));
  }
}

TEST_CASE("grid with the block pattern") {
  const Instance inst = grid16();
  const Assignment p = pattern("GRID_4BLOCK", inst);
  for (const auto& [u, rc] : inst.coords) {
    const bool black = (rc.row / 2 + rc.col / 2) % 2 == 0;
    CHECK(std::get<MisBit>(p.at(u)).in_set == black);
  }
  CHECK(eta(Measure::Mu1, ProblemKind::Mis, inst.graph, p) == 256);
  CHECK(eta_bw(inst.graph, p) == 4);
}

TEST_CASE("all-ones predictions") {
  const Graph k6 = clique(6);
  const Assignment p = bits(k6, {1, 2, 3, 4, 5, 6});
  CHECK(eta(Measure::Mu1, ProblemKind::Mis, k6, p) == 6);
  CHECK(eta(Measure::Mu2, ProblemKind::Mis, k6, p) == 2);
  const Graph l7 = line(7);
  const Assignment q = bits(l7, {1, 2, 3, 4, 5, 6, 7});
  CHECK(eta_bw(l7, q) == 7);
  CHECK(eta_bw(l7, q) == eta(Measure::Mu1, ProblemKind::Mis, l7, q));
  CHECK(eta_bw(l7, solve(ProblemKind::Mis, l7)) == 0);
}

TEST_CASE("rooted-tree error") {
  const Instance line15 = directed_path(15);
  const Assignment p = pattern("MOD3_LINE", line15);
  for (NodeId u : line15.graph.ids()) {
    CHECK(std::get<MisBit>(p.at(u)).in_set == (line15.tree->depth(u) % 3 != 0));
  }
  std::size_t white = 0;
  for (NodeId u : line15.graph.ids()) white += std::get<MisBit>(p.at(u)).in_set ? 0 : 1;
  CHECK(white == 5);
  CHECK(eta_t(*line15.tree, p) == 2);

  const Instance six = directed_path(6);
  CHECK(eta_t(*six.tree, bits(six.graph, {1, 2, 3, 4, 5, 6})) == 6);
  CHECK(eta_t(*six.tree, solve(ProblemKind::Mis, six.graph)) == 0);

  GenParams star;
  star.n = 6;
  CHECK_THROWS_AS(pattern("MOD3_LINE", generate(Family::Tree, star, IdScheme::Increasing, 3)), Error);
  CHECK_THROWS_AS(pattern("GRID_4BLOCK", line15), Error);
}

TEST_CASE("hamming error") {
  const Graph g = random_graph(12, 0.3, 2);
  CHECK(eta_hamming(g, solve(ProblemKind::Mis, g)) == 0);
  CHECK(eta_hamming(clique(3), bits(clique(3), {1, 2, 3})) == 2);
  const Graph edge = make_graph(2, {{1, 2}});
  CHECK(eta_hamming(edge, bits(edge, {})) == 1);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph h = random_graph(11, 0.3, seed);
    const Assignment p = random_bits(h, 0.5, seed);
    std::size_t best = h.n();
    for (const auto& s : brute_all_mis(h)) {
      std::size_t diff = 0;
      for (NodeId u : h.ids()) diff += std::get<MisBit>(p.at(u)).in_set != s.contains(u) ? 1 : 0;
      best = std::min(best, diff);
    }
    CHECK(eta_hamming(h, p) == best);
  }
}

TEST_CASE("corruption") {
  for (auto kind : {ProblemKind::Mis, ProblemKind::MaximalMatching, ProblemKind::VertexColoring,
                    ProblemKind::EdgeColoring}) {
    const Graph g = random_graph(20, 0.2, 11);
    const Assignment correct = solve(kind, g);
    CHECK(corrupt(kind, g, correct, 0, 1) == correct);
    CHECK(eta(Measure::Mu1, kind, g, corrupt(kind, g, correct, 0, 1)) == 0);
    CHECK(corrupt(kind, g, correct, 5, 9) == corrupt(kind, g, correct, 5, 9));
    CHECK_THROWS_AS(corrupt(kind, g, correct, 21, 1), Error);
  }
  const Graph g = random_graph(20, 0.2, 4);
  const Assignment correct = solve(ProblemKind::Mis, g);
  for (std::size_t k = 0; k <= 20; ++k) {
    const Assignment c = corrupt(ProblemKind::Mis, g, correct, k, k + 100);
    std::size_t diff = 0;
    for (NodeId u : g.ids()) diff += c.at(u) != correct.at(u) ? 1 : 0;
    CHECK(diff == k);
  }
  const Assignment colors = solve(ProblemKind::VertexColoring, g);
  const Assignment bad = corrupt(ProblemKind::VertexColoring, g, colors, 20, 3);
  for (NodeId u : g.ids()) {
    const Color c = std::get<VertexColor>(bad.at(u)).color;
    CHECK(c >= 1);
    CHECK(c <= static_cast<Color>(g.max_degree()) + 1);
  }
  const Assignment edges = corrupt(ProblemKind::EdgeColoring, g, solve(ProblemKind::EdgeColoring, g), 20, 3);
  for (const auto& [u, v] : g.edges()) {
    CHECK(std::get<EdgeColors>(edges.at(u)).by_neighbor.at(v) == std::get<EdgeColors>(edges.at(v)).by_neighbor.at(u));
  }
}

TEST_CASE("measure relations on random instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Graph g = random_graph(16, 0.2, seed);
    const Assignment p = random_bits(g, 0.4, seed * 7);
    const ErrorReport r = error_report(ProblemKind::Mis, g, nullptr, p);
    REQUIRE(r.eta2);
    CHECK(*r.eta2 <= r.eta1);
    CHECK(*r.eta_bw <= r.eta1);
    std::size_t largest = 0, largest_mu2 = 0;
    for (const auto& c : r.components) {
      largest = std::max(largest, c.subgraph.n());
      largest_mu2 = std::max(largest_mu2, brute_mu2(c.subgraph));
    }
    CHECK(r.eta1 == largest);
    CHECK(*r.eta2 == largest_mu2);
  }
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams gp;
    gp.n = 30;
    const Instance t = generate(Family::Tree, gp, IdScheme::SeededPermutation, seed);
    const Assignment p = random_bits(t.graph, 0.5, seed);
    const ErrorReport r = error_report(ProblemKind::Mis, t.graph, &*t.tree, p);
    CHECK(*r.eta_t <= *r.eta_bw);
    CHECK(*r.eta_bw <= r.eta1);
  }
}

TEST_CASE("cells stay empty beyond the oracle caps") {
  const Graph g = line(30);
  std::set<NodeId> all(g.ids().begin(), g.ids().end());
  const ErrorReport r = error_report(ProblemKind::Mis, g, nullptr, bits(g, all));
  CHECK(r.eta1 == 30);
  CHECK_FALSE(r.eta2);
  CHECK_FALSE(r.eta_hamming);
  CHECK(r.eta_bw == 30u);
}

TEST_CASE("edge-coloring components are edge-induced") {
  // path 1-2-3-4; only the middle edge is mispredicted
  const Graph g = line(4);
  Assignment p{{1, EdgeColors{{{2, 1}}}},
               {2, EdgeColors{{{1, 1}, {3, 2}}}},
               {3, EdgeColors{{{2, 3}, {4, 1}}}},
               {4, EdgeColors{{{3, 1}}}}};
  const auto comps = error_components(ProblemKind::EdgeColoring, g, p);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].subgraph.n() == 2);
  CHECK(comps[0].subgraph.edge_count() == 1);
  CHECK(comps[0].kind == ErrorComponent::Kind::EdgeInduced);
}

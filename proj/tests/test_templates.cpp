#include "doctest.h"
#include "predsync/audit.hpp"
#include "predsync/error.hpp"
#include "predsync/oracles.hpp"
#include "predsync/prediction_error.hpp"
#include "predsync/programs.hpp"
#include "predsync/templates.hpp"
#include "predsync/validate.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::optional<ErrorCode> code_of(const TemplateSpec& spec, const GraphParams& params) {
  try {
    build_template(spec, params);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

std::string message_of(const TemplateSpec& spec, const GraphParams& params) {
  try {
    build_template(spec, params);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TemplateSpec mis_spec(TemplateKind kind) { return default_spec(kind, ProblemKind::Mis); }

}  // namespace

TEST_CASE("budget selectors") {
  const GraphParams params{30, 1000, 4};
  const Knowledge all{true, true, true};
  CHECK(evaluate_budget("n", params, all) == 30);
  CHECK(evaluate_budget("fixed:7", params, all) == 7);
  CHECK(evaluate_budget("fixed:0", params, all) == 0);
  CHECK(evaluate_budget("gps", params, all) == gps_rounds(1000));
  CHECK(evaluate_budget("linial", params, all) == linial_rounds(4, 1000));
  for (const char* bad : {"", "N", "fixed:", "fixed:-1", "fixed:3x", "log"}) {
    CHECK_THROWS_AS(evaluate_budget(bad, params, all), Error);
  }
  CHECK_THROWS_AS(evaluate_budget("n", params, Knowledge{false, true, true}), Error);
  CHECK_THROWS_AS(evaluate_budget("linial", params, Knowledge{true, true, false}), Error);
  CHECK_THROWS_AS(evaluate_budget("gps", params, Knowledge{true, false, true}), Error);
}

TEST_CASE("template configuration errors") {
  const GraphParams params{12, 12, 3};

  TemplateSpec mixed = mis_spec(TemplateKind::Simple);
  mixed.reference = "mm.uniform";
  CHECK(code_of(mixed, params) == ErrorCode::Config);
  CHECK(message_of(mixed, params).find("reference") != std::string::npos);

  TemplateSpec unknown = mis_spec(TemplateKind::Consecutive);
  unknown.uniform = "mis.nope";
  CHECK(message_of(unknown, params).find("uniform") != std::string::npos);

  TemplateSpec unphased = mis_spec(TemplateKind::Interleaved);
  unphased.reference = "mis.color_part2";
  CHECK(code_of(unphased, params) == ErrorCode::Config);

  TemplateSpec zero_phase = mis_spec(TemplateKind::Interleaved);
  zero_phase.phase = 0;
  CHECK(code_of(zero_phase, params) == ErrorCode::Config);

  TemplateSpec fragile = mis_spec(TemplateKind::Parallel);
  fragile.part1 = "mis.greedy";
  CHECK(message_of(fragile, params).find("fault-tolerant") != std::string::npos);

  TemplateSpec blind = mis_spec(TemplateKind::Parallel);
  blind.r1 = "fixed:10";
  blind.knowledge = {true, false, false};
  CHECK(message_of(blind, params).find("knowledge") != std::string::npos);

  TemplateSpec no_n = mis_spec(TemplateKind::Consecutive);
  no_n.knowledge = {false, true, true};
  CHECK(code_of(no_n, params) == ErrorCode::Config);

  TemplateSpec unbounded_init = mis_spec(TemplateKind::Simple);
  unbounded_init.init = "mis.greedy";
  CHECK(code_of(unbounded_init, params) == ErrorCode::Config);
}

TEST_CASE("all-ones clique under the simple template") {
  const Graph k6 = clique(6);
  const Assignment p = bits(k6, {1, 2, 3, 4, 5, 6});

  // base decides nothing on K6, so greedy needs its two rounds
  TemplateSpec base = mis_spec(TemplateKind::Simple);
  base.init = "mis.base";
  const TemplateRun a = run_template(base, k6, p);
  CHECK(a.out.total_rounds == 5);
  CHECK(ones(a.out.outputs()) == std::set<NodeId>{6});
  CHECK(a.audit.empty());

  // init keeps the largest identifier among the clashing ones
  const TemplateRun b = run_template(mis_spec(TemplateKind::Simple), k6, p);
  CHECK(b.out.total_rounds == 3);
  CHECK(ones(b.out.outputs()) == std::set<NodeId>{6});
  CHECK(b.audit.empty());
}

TEST_CASE("every MIS template has consistency 3") {
  for (auto kind : {TemplateKind::Simple, TemplateKind::Consecutive, TemplateKind::Interleaved,
                    TemplateKind::Parallel}) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const Graph g = random_graph(10 + seed % 25, 0.15, seed);
      if (g.edge_count() == 0) continue;
      // correct predictions from the brute-force MIS list
      const auto all = brute_all_mis(g.n() <= 20 ? g : line(3));
      if (g.n() > 20) continue;
      const Assignment p = bits(g, all[seed % all.size()]);
      const TemplateRun r = run_template(mis_spec(kind), g, p);
      CHECK_MESSAGE(r.out.total_rounds == 3, to_string(kind));
      CHECK(r.out.outputs() == p);
      CHECK(r.audit.empty());
    }
  }
}

TEST_CASE("consecutive template falls through to the reference") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Graph g = random_graph(16, 0.3, seed);
    TemplateSpec spec = mis_spec(TemplateKind::Consecutive);
    spec.r = seed % 2 ? "fixed:0" : "fixed:1";
    std::set<NodeId> everything(g.ids().begin(), g.ids().end());
    const Assignment p = bits(g, everything);
    const TemplateRun r = run_template(spec, g, p);
    CHECK(r.budgets.r == static_cast<int>(seed % 2 ? 0 : 1));
    CHECK(is_mis(g, ones(r.out.outputs())));
    CHECK(r.audit.empty());
    CHECK(r.out.total_rounds <= r.budgets.c + *r.budgets.u_budget + 2 * r.budgets.c_prime +
                                    static_cast<int>(g.n()));
  }
}

TEST_CASE("all templates stay valid and extendable under corruption") {
  for (auto kind : {TemplateKind::Simple, TemplateKind::Consecutive, TemplateKind::Interleaved,
                    TemplateKind::Parallel}) {
    for (auto problem : {ProblemKind::Mis, ProblemKind::MaximalMatching, ProblemKind::VertexColoring,
                         ProblemKind::EdgeColoring}) {
      if (kind == TemplateKind::Parallel && problem != ProblemKind::Mis) continue;
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const Graph g = random_graph(24, 0.15, seed);
        const Assignment p = corrupt(problem, g, solve(problem, g), seed * 3, seed);
        const TemplateRun r = run_template(default_spec(kind, problem), g, p);
        const auto v = validate(problem, g, r.out.outputs());
        CHECK_MESSAGE(!v, to_string(kind), " ", to_string(problem));
        CHECK(r.audit.empty());
      }
    }
  }
}

TEST_CASE("parallel part 1 does not disturb the uniform part") {
  // finishing inside part 1 must give the same outputs as init + uniform alone
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Graph g = random_graph(20, 0.2, seed);
    const Assignment p = corrupt(ProblemKind::Mis, g, solve(ProblemKind::Mis, g), seed % 8, seed);
    TemplateSpec par = mis_spec(TemplateKind::Parallel);
    par.r1 = "fixed:60";
    TemplateSpec seq = mis_spec(TemplateKind::Consecutive);
    seq.r = "fixed:60";
    const TemplateRun a = run_template(par, g, p);
    const TemplateRun b = run_template(seq, g, p);
    if (a.out.total_rounds > a.budgets.c + *a.budgets.r1_run) continue;
    ++compared;
    CHECK(a.out.outputs() == b.out.outputs());
    CHECK(a.out.total_rounds == b.out.total_rounds);
  }
  CHECK(compared > 30);
}

TEST_CASE("parallel part 1 matches part 1 alone with uniform terminations as crashes") {
  using Stored = std::map<NodeId, std::optional<Color>>;
  auto recorder = [](const Graph& g, std::vector<Stored>& rounds) {
    return [&g, &rounds](const RoundSnapshot& s) {
      Stored now;
      for (std::size_t i = 0; i < g.n(); ++i)
        if (s.active[i]) now[g.id_at(i)] = s.stored[i];
      rounds.push_back(std::move(now));
    };
  };
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Graph g = random_graph(24, 0.2, seed);
    const Assignment p = corrupt(ProblemKind::Mis, g, solve(ProblemKind::Mis, g), seed % 10, seed);
    const BuiltTemplate t = build_template(mis_spec(TemplateKind::Parallel), params_of(g));
    const int c = t.budgets.c;
    const int r1 = *t.budgets.r1;

    std::vector<Stored> par;
    SimulationOptions opts;
    opts.max_rounds = 40 * static_cast<int>(g.n()) + 400;
    opts.observer = recorder(g, par);
    const Outcome whole = simulate(g, t.program.factory, p, opts);

    // nodes still running when part 1 starts, and when uniform stopped them
    std::vector<NodeId> alive;
    SimulationOptions alone;
    for (NodeId u : g.ids()) {
      const auto term = whole.nodes.at(u).term_round;
      if (term && *term <= c) continue;
      alive.push_back(u);
      if (term && *term - c < r1) alone.crash_after[u] = *term - c;
    }
    if (alive.empty()) continue;
    const std::set<NodeId> keep(alive.begin(), alive.end());
    std::vector<Edge> e;
    for (const auto& [u, v] : g.edges())
      if (keep.contains(u) && keep.contains(v)) e.emplace_back(u, v);
    const Graph sub = with_ids(alive, e, g.d());

    std::vector<Stored> solo;
    alone.knowledge_override = params_of(g);
    alone.observer = recorder(sub, solo);
    const BuiltProgram linial = standalone("vc.linial", sub);
    alone.max_rounds = linial.max_rounds;
    simulate(sub, linial.factory, NoPredictions{}, alone);

    for (int j = 1; j <= r1 && c + j <= static_cast<int>(par.size()); ++j) {
      REQUIRE(j <= static_cast<int>(solo.size()));
      CHECK(par[c + j - 1] == solo[j - 1]);
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("tree parallel template") {
  std::size_t inside = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GenParams gp;
    gp.n = 40;
    gp.d = 5000;
    const Instance t = generate(Family::Tree, gp, IdScheme::SeededPermutation, seed);
    const Assignment p = corrupt(ProblemKind::Mis, t.graph, solve(ProblemKind::Mis, t.graph), seed % 12, seed);
    const TemplateRun r =
        run_template(default_spec(TemplateKind::Parallel, ProblemKind::Mis, true), t.graph, p, &*t.tree);
    CHECK_FALSE(validate(ProblemKind::Mis, t.graph, r.out.outputs()));
    CHECK(r.audit.empty());
    const int part1_end = r.budgets.c + *r.budgets.r1_run;
    if (r.out.total_rounds <= part1_end) {
      ++inside;
      const std::size_t et = eta_t(*t.tree, p);
      CHECK(r.out.total_rounds <= static_cast<int>((et + 1) / 2) + 5);
    }
    CHECK(r.out.total_rounds <= part1_end + r.budgets.c_prime + *r.budgets.part2);
  }
  CHECK(inside > 0);
}

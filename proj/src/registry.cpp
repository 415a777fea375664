#include "predsync/registry.hpp"

#include <map>

#include "predsync/error.hpp"
#include "predsync/programs.hpp"

namespace predsync {

namespace {

using Length = std::function<std::optional<int>(const GraphParams&)>;

Length fixed(int rounds) {
  return [rounds](const GraphParams&) { return std::optional<int>(rounds); };
}
std::optional<int> unbounded(const GraphParams&) { return std::nullopt; }

constexpr Knowledge kNone{};
constexpr Knowledge kDelta{false, false, true};
constexpr Knowledge kD{false, true, false};
constexpr Knowledge kDeltaD{false, true, true};

std::map<std::string, StageInfo> build_catalog() {
  std::vector<StageInfo> all;
  auto add = [&](StageInfo s) { all.push_back(std::move(s)); };
  const auto mis = ProblemKind::Mis;
  const auto mm = ProblemKind::MaximalMatching;
  const auto vc = ProblemKind::VertexColoring;
  const auto ec = ProblemKind::EdgeColoring;

  add({"mis.base", mis, kNone, true, false, [](auto ch) { return make_mis_prologue(false, ch); },
       fixed(kMisPrologueRounds), 0, true, true});
  add({"mis.init", mis, kNone, true, false, [](auto ch) { return make_mis_prologue(true, ch); },
       fixed(kMisPrologueRounds), 0, true, true});
  add({"mis.cleanup", mis, kNone, false, false, [](auto ch) { return make_mis_cleanup(ch); }, fixed(1), 0, true,
       true});
  add({"mis.greedy", mis, kNone, false, false, [](auto ch) { return make_greedy(GreedyOrder::LargestId, ch); },
       unbounded, 2});
  add({"mis.greedy_min", mis, kNone, false, false,
       [](auto ch) { return make_greedy(GreedyOrder::SmallestId, ch); }, unbounded, 2});
  add({"mis.u_bw", mis, kNone, true, false, [](auto ch) { return make_u_bw(ch); }, unbounded, 2, false, false,
       false, true});
  for (bool combined : {false, true}) {
    add({combined ? "mis.color_part2_combined" : "mis.color_part2", mis, kDelta, false, false,
         [combined](auto ch) { return make_color_part2(combined, ch); },
         [](const GraphParams& p) { return std::optional<int>(color_part2_rounds(p.delta)); }, 0, true});
  }
  add({"mis.tree_init", mis, kNone, true, true, [](auto ch) { return make_tree_init(ch); }, fixed(kTreeInitRounds),
       0, true, true});
  add({"mis.tree_uniform", mis, kNone, false, true, [](auto ch) { return make_tree_uniform(ch); }, unbounded, 2});
  add({"mis.tree_gps", mis, kD, false, true, [](auto ch) { return make_gps_coloring(ch); },
       [](const GraphParams& p) { return std::optional<int>(gps_rounds(p.d)); }, 0, false, true, true});
  add({"mis.tree_part2", mis, kNone, false, true, [](auto ch) { return make_tree_part2(ch); },
       fixed(kTreePart2Rounds), 0, true});

  add({"mm.base", mm, kNone, true, false, [](auto ch) { return make_mm_prologue(false, ch); },
       fixed(kMmPrologueRounds), 0, true, true});
  add({"mm.init", mm, kNone, true, false, [](auto ch) { return make_mm_prologue(true, ch); },
       fixed(kMmPrologueRounds), 0, true, true});
  add({"mm.uniform", mm, kNone, false, false, [](auto ch) { return make_mm_uniform(ch); }, unbounded, 3});
  add({"mm.cleanup", mm, kNone, false, false, [](auto ch) { return make_mm_cleanup(ch); }, fixed(1), 0, true,
       true});

  add({"vc.base", vc, kDelta, true, false, [](auto ch) { return make_vc_prologue(false, ch); },
       fixed(kVcPrologueRounds), 0, true, true});
  add({"vc.init", vc, kDelta, true, false, [](auto ch) { return make_vc_prologue(true, ch); },
       fixed(kVcPrologueRounds), 0, true, true});
  add({"vc.uniform", vc, kDelta, false, false, [](auto ch) { return make_vc_uniform(ch); }, unbounded, 1});
  add({"vc.linial", vc, kDeltaD, false, false, [](auto ch) { return make_linial(ch); },
       [](const GraphParams& p) { return std::optional<int>(linial_rounds(p.delta, p.d)); }, 0, false, true, true});

  add({"ec.base", ec, kDelta, true, false, [](auto ch) { return make_ec_prologue(ch); }, fixed(kEcPrologueRounds),
       0, true, true});
  add({"ec.uniform", ec, kDelta, false, false, [](auto ch) { return make_ec_uniform(ch); }, unbounded, 2});
  add({"ec.cleanup", ec, kDelta, false, false, [](auto ch) { return make_ec_cleanup(ch); }, fixed(1), 0, true,
       true});

  std::map<std::string, StageInfo> out;
  for (auto& s : all) {
    auto name = s.name;
    out.emplace(std::move(name), std::move(s));
  }
  return out;
}

const std::map<std::string, StageInfo>& catalog() {
  static const std::map<std::string, StageInfo> c = build_catalog();
  return c;
}

// Prior outputs count as already announced to the neighbors.
void apply_prior(NodeCore& core, const Assignment& prior) {
  for (NodeId u : core.view.neighbors) {
    auto it = prior.find(u);
    if (it == prior.end()) continue;
    core.active.erase(u);
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, MisBit>) {
            if (v.in_set) core.saw_one = true;
          } else if constexpr (std::is_same_v<T, VertexColor>) {
            core.palette.erase(v.color);
          } else if constexpr (std::is_same_v<T, EdgeColors>) {
            auto pal = core.edge_palette.find(u);
            if (pal == core.edge_palette.end()) return;
            for (const auto& [w, c] : v.by_neighbor) pal->second.erase(c);
          }
        },
        it->second);
  }
}

std::optional<Color> predicted_color(const Assignment* predictions, NodeId u) {
  if (!predictions) return std::nullopt;
  auto it = predictions->find(u);
  if (it == predictions->end()) return std::nullopt;
  if (const auto* c = std::get_if<VertexColor>(&it->second)) return c->color;
  return std::nullopt;
}

}  // namespace

const StageInfo& stage_info(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw Error(ErrorCode::Config, "unknown program '" + name + "'");
  return it->second;
}

std::vector<std::string> program_names() {
  std::vector<std::string> out;
  for (const auto& [name, info] : catalog()) out.push_back(name);
  return out;
}

GraphParams params_of(const Graph& g) { return GraphParams{g.n(), g.d(), g.max_degree()}; }

BuiltProgram assemble(std::string name, ProblemKind kind, Knowledge knowledge, bool needs_predictions,
                      bool needs_tree, std::vector<std::function<std::unique_ptr<Stage>()>> stages,
                      std::shared_ptr<const Schedule> schedule, std::optional<int> halt_after,
                      std::function<void(NodeCore&)> seed) {
  BuiltProgram out;
  out.schedule = schedule;
  out.factory.name = std::move(name);
  out.factory.kind = kind;
  out.factory.knowledge = knowledge;
  out.factory.needs_predictions = needs_predictions;
  out.factory.needs_tree = needs_tree;
  out.factory.make = [stages = std::move(stages), schedule, halt_after,
                      seed = std::move(seed)](const NodeView& view) -> std::unique_ptr<NodeProgram> {
    NodeCore core(view);
    if (seed) seed(core);
    std::vector<std::unique_ptr<Stage>> slots;
    slots.reserve(stages.size());
    for (const auto& make : stages) slots.push_back(make());
    return std::make_unique<ComposedProgram>(std::move(core), std::move(slots), schedule, halt_after);
  };
  return out;
}

BuiltProgram standalone(const std::string& name, const Graph& g, const ProgramContext& ctx) {
  const StageInfo& info = stage_info(name);
  const GraphParams params = params_of(g);
  const std::optional<int> length = info.length(params);

  auto schedule = std::make_shared<Schedule>();
  std::vector<std::function<std::unique_ptr<Stage>()>> stages;
  int offset = 0;
  if (info.exchange_first) {
    schedule->append({0, 1, 0, false});
    stages.push_back([] { return make_mis_exchange(0); });
    offset = 1;
  }
  schedule->append({static_cast<int>(stages.size()), length.value_or(-1), info.audit_period, info.extendable_end});
  stages.push_back([make = info.make] { return make(0); });

  std::optional<int> halt;
  if (info.halts && length) halt = std::max(offset + *length, 1);

  const bool from_colors = name == "mis.color_part2" || name == "mis.color_part2_combined" || name == "mis.tree_part2";
  const bool seeds_matches = name == "mm.cleanup";
  const bool seeds_two_hop = name == "ec.uniform";
  const bool needs_predictions = info.needs_predictions || from_colors;

  auto seed = [ctx, from_colors, seeds_matches, seeds_two_hop, g](NodeCore& core) {
    apply_prior(core, ctx.prior);
    if (from_colors) {
      core.color = predicted_color(ctx.predictions, core.id());
      for (NodeId u : core.view.neighbors) {
        if (auto c = predicted_color(ctx.predictions, u)) core.nb_color[u] = *c;
      }
    }
    if (seeds_matches && ctx.predictions) {
      auto partner_of = [&](NodeId u) -> std::optional<NodeId> {
        auto it = ctx.predictions->find(u);
        if (it == ctx.predictions->end()) return std::nullopt;
        const auto* m = std::get_if<MatchPartner>(&it->second);
        return m ? m->partner : std::nullopt;
      };
      const auto p = partner_of(core.id());
      if (p && core.active.contains(*p) && partner_of(*p) == core.id()) core.matched = p;
    }
    if (seeds_two_hop) {
      for (auto& [u, pal] : core.edge_palette) {
        auto& hop = core.two_hop[u];
        for (NodeId w : g.neighbors(u)) {
          if (w != core.id() && !ctx.prior.contains(w)) hop.insert(w);
        }
      }
    }
  };

  BuiltProgram out = assemble(name, info.kind, info.knowledge, needs_predictions, info.needs_tree,
                              std::move(stages), schedule, halt, seed);
  if (length) out.max_rounds = std::max<int>(offset + *length + 1, static_cast<int>(4 * g.n() + 20));
  return out;
}

}  // namespace predsync

#include "predsync/templates.hpp"

#include <charconv>
#include <numeric>

#include "predsync/error.hpp"
#include "predsync/programs.hpp"

namespace predsync {

const char* to_string(TemplateKind kind) noexcept {
  switch (kind) {
    case TemplateKind::Simple: return "simple";
    case TemplateKind::Consecutive: return "consecutive";
    case TemplateKind::Interleaved: return "interleaved";
    case TemplateKind::Parallel: return "parallel";
  }
  return "?";
}

std::optional<TemplateKind> parse_template(std::string_view text) noexcept {
  for (auto k : {TemplateKind::Simple, TemplateKind::Consecutive, TemplateKind::Interleaved, TemplateKind::Parallel}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

TemplateSpec default_spec(TemplateKind kind, ProblemKind problem, bool tree) {
  TemplateSpec s;
  s.kind = kind;
  switch (problem) {
    case ProblemKind::Mis:
      if (tree) {
        s.init = "mis.tree_init";
        s.uniform = s.reference = "mis.tree_uniform";
        s.part1 = "mis.tree_gps";
        s.part2 = "mis.tree_part2";
      } else if (kind == TemplateKind::Interleaved) {
        s.reference = "mis.greedy_min";
      }
      if (kind == TemplateKind::Consecutive) s.cleanup = "mis.cleanup";
      break;
    case ProblemKind::MaximalMatching:
      s.init = "mm.init";
      s.uniform = s.reference = "mm.uniform";
      if (kind == TemplateKind::Consecutive) s.cleanup = "mm.cleanup";
      s.part1.clear();
      s.part2.clear();
      break;
    case ProblemKind::VertexColoring:
      s.init = "vc.init";
      s.uniform = s.reference = "vc.uniform";
      s.part1.clear();
      s.part2.clear();
      break;
    case ProblemKind::EdgeColoring:
      s.init = "ec.base";
      s.uniform = s.reference = "ec.uniform";
      if (kind == TemplateKind::Consecutive) s.cleanup = "ec.cleanup";
      s.part1.clear();
      s.part2.clear();
      break;
  }
  return s;
}

int evaluate_budget(std::string_view selector, const GraphParams& params, Knowledge available) {
  auto require = [&](Knowledge need) {
    if (!available.covers(need)) {
      throw Error(ErrorCode::Config,
                  "budget '" + std::string(selector) + "' needs parameters the nodes do not know");
    }
  };
  if (selector == "n") {
    require({true, false, false});
    return static_cast<int>(params.n);
  }
  if (selector == "linial") {
    require({false, true, true});
    return linial_rounds(params.delta, params.d);
  }
  if (selector == "gps") {
    require({false, true, false});
    return gps_rounds(params.d);
  }
  if (selector.starts_with("fixed:")) {
    const auto digits = selector.substr(6);
    int v = 0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size() && v >= 0) return v;
  }
  throw Error(ErrorCode::Config, "unknown budget '" + std::string(selector) + "'");
}

namespace {

int round_up(int value, int period) { return period <= 1 ? value : (value + period - 1) / period * period; }

struct Builder {
  const TemplateSpec& spec;
  const GraphParams& params;
  ProblemKind kind{};
  Knowledge need{};
  bool tree = false;
  bool predictions = false;
  std::vector<std::function<std::unique_ptr<Stage>()>> stages;
  std::shared_ptr<Schedule> schedule = std::make_shared<Schedule>();

  const StageInfo& use(const std::string& name, const char* field, bool same_kind = true) {
    if (name.empty()) throw Error(ErrorCode::Config, std::string(field) + ": program missing");
    const StageInfo& info = [&]() -> const StageInfo& {
      try {
        return stage_info(name);
      } catch (const Error&) {
        throw Error(ErrorCode::Config, std::string(field) + ": unknown program '" + name + "'");
      }
    }();
    if (stages.empty()) kind = info.kind;
    if (same_kind && info.kind != kind) {
      throw Error(ErrorCode::Config, std::string(field) + ": '" + name + "' solves " + to_string(info.kind) +
                                         ", the template solves " + to_string(kind));
    }
    need = need | info.knowledge;
    tree = tree || info.needs_tree;
    predictions = predictions || info.needs_predictions;
    return info;
  }

  int add(const StageInfo& info, std::uint32_t channel = 0) {
    stages.push_back([make = info.make, channel] { return make(channel); });
    return static_cast<int>(stages.size()) - 1;
  }

  int fixed_length(const StageInfo& info, const char* field) {
    const auto len = info.length(params);
    if (!len) throw Error(ErrorCode::Config, std::string(field) + ": '" + info.name + "' has no fixed length");
    return *len;
  }
};

}  // namespace

BuiltTemplate build_template(const TemplateSpec& spec, const GraphParams& params) {
  Builder b{spec, params, {}, {}, false, false, {}, std::make_shared<Schedule>()};
  TemplateBudgets budgets;
  std::string label = std::string(to_string(spec.kind)) + "(";

  const StageInfo& init = b.use(spec.init, "init");
  budgets.c = b.fixed_length(init, "init");
  b.schedule->append({b.add(init), budgets.c, 0, true});
  label += spec.init;

  auto add_cleanup = [&] {
    if (spec.cleanup.empty()) return;
    const StageInfo& cl = b.use(spec.cleanup, "cleanup");
    budgets.c_prime = b.fixed_length(cl, "cleanup");
    b.schedule->append({b.add(cl), budgets.c_prime, 0, true});
  };
  auto phased = [&](const StageInfo& info, const char* field) {
    if (info.audit_period <= 0) {
      throw Error(ErrorCode::Config, std::string(field) + ": '" + info.name + "' is not extendable at phase ends");
    }
  };

  switch (spec.kind) {
    case TemplateKind::Simple: {
      const StageInfo& ref = b.use(spec.reference, "reference");
      b.schedule->append({b.add(ref), -1, ref.audit_period, ref.extendable_end});
      label += "," + spec.reference;
      break;
    }
    case TemplateKind::Consecutive: {
      const StageInfo& u = b.use(spec.uniform, "uniform");
      const StageInfo& ref = b.use(spec.reference, "reference");
      budgets.r = evaluate_budget(spec.r, params, spec.knowledge);
      budgets.u_budget = spec.u_budget.empty() ? *budgets.r : evaluate_budget(spec.u_budget, params, spec.knowledge);
      const int u_slot = b.add(u);
      // cleanup length is needed before the uniform piece is sized
      int c_prime = 0;
      if (!spec.cleanup.empty()) c_prime = b.fixed_length(b.use(spec.cleanup, "cleanup"), "cleanup");
      b.schedule->append({u_slot, *budgets.u_budget + c_prime, u.audit_period, false});
      add_cleanup();
      b.schedule->append({b.add(ref), -1, ref.audit_period, ref.extendable_end});
      label += "," + spec.uniform + "," + (spec.cleanup.empty() ? "-" : spec.cleanup) + "," + spec.reference;
      break;
    }
    case TemplateKind::Interleaved: {
      const StageInfo& u = b.use(spec.uniform, "uniform");
      const StageInfo& ref = b.use(spec.reference, "reference");
      phased(u, "uniform");
      phased(ref, "reference");
      if (spec.phase < 1) throw Error(ErrorCode::Config, "phase: must be positive");
      const int period = std::lcm(u.audit_period, ref.audit_period);
      const int u_slot = b.add(u);
      const int r_slot = b.add(ref);
      const int base = spec.phase;
      const bool doubling = spec.doubling;
      b.schedule->cycle({{u_slot, 0, u.audit_period, true}, {r_slot, 0, ref.audit_period, true}},
                        [base, doubling, period](int i) {
                          const int len = doubling ? base << std::min(i - 1, 20) : base;
                          return round_up(len, period);
                        });
      label += "," + spec.uniform + "," + spec.reference;
      break;
    }
    case TemplateKind::Parallel: {
      const StageInfo& u = b.use(spec.uniform, "uniform");
      phased(u, "uniform");
      const StageInfo& p1 = b.use(spec.part1, "part1", false);
      if (!p1.fault_tolerant) throw Error(ErrorCode::Config, "part1: '" + spec.part1 + "' is not fault-tolerant");
      const StageInfo& p2 = b.use(spec.part2, "part2");
      const std::string r1_sel = !spec.r1.empty() ? spec.r1 : spec.part1 == "mis.tree_gps" ? "gps" : "linial";
      budgets.r1 = evaluate_budget(r1_sel, params, spec.knowledge);
      budgets.r1_run = round_up(*budgets.r1, u.audit_period);
      if (*budgets.r1_run > 0) {
        auto make_u = u.make;
        auto make_p1 = p1.make;
        b.stages.push_back([make_u, make_p1] { return make_parallel(make_u(0), make_p1(1)); });
        b.schedule->append({static_cast<int>(b.stages.size()) - 1, *budgets.r1_run, u.audit_period, true});
      }
      add_cleanup();
      budgets.part2 = b.fixed_length(p2, "part2");
      b.schedule->append({b.add(p2), *budgets.part2, 0, true});
      label += "," + spec.uniform + "," + spec.part1 + "," + spec.part2;
      break;
    }
  }
  label += ")";

  if (!spec.knowledge.covers(b.need)) {
    throw Error(ErrorCode::Config, "knowledge: the chosen programs need parameters the nodes do not know");
  }

  BuiltTemplate out;
  out.budgets = budgets;
  out.program = assemble(label, b.kind, spec.knowledge, b.predictions, b.tree, std::move(b.stages), b.schedule,
                         std::nullopt);
  return out;
}

}  // namespace predsync

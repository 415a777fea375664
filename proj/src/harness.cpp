#include "predsync/harness.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>

#include "predsync/audit.hpp"
#include "predsync/error.hpp"
#include "predsync/graph_io.hpp"
#include "predsync/oracles.hpp"
#include "predsync/prediction_error.hpp"
#include "predsync/registry.hpp"
#include "predsync/rng.hpp"
#include "predsync/validate.hpp"

namespace predsync {

namespace {

long ceil_half(long x) { return (x + 1) / 2; }

int round_up(int value, int period) { return period <= 1 ? value : (value + period - 1) / period * period; }

std::uint64_t corruption_seed(std::uint64_t seed, std::size_t k) {
  return SplitMix64(seed ^ (0x9e3779b97f4a7c15ULL * (k + 1))).next();
}

struct Loaded {
  Instance instance;
  std::string family;
};

Loaded load_instance(const ExperimentConfig& c, std::uint64_t seed) {
  Loaded out;
  if (!c.graph_file.empty()) {
    GraphFile f = read_graph(read_file(c.graph_file));
    out.instance.graph = std::move(f.graph);
    out.instance.tree = std::move(f.tree);
    out.instance.family = out.instance.tree ? Family::Tree : Family::Random;
    out.family = "FILE";
    return out;
  }
  try {
    out.instance = generate(c.family, c.gen, c.ids, c.graph_seed.value_or(seed));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Config, std::string("graph: ") + e.what());
    throw;
  }
  out.family = to_string(c.family);
  return out;
}

Assignment make_predictions(const ExperimentConfig& c, const Instance& inst, std::size_t k, std::uint64_t seed) {
  const Graph& g = inst.graph;
  if (k > g.n()) throw Error(ErrorCode::Config, "corrupt.k: " + std::to_string(k) + " exceeds n = " + std::to_string(g.n()));
  Assignment base;
  if (c.predictions == "solve") {
    base = solve(c.problem, g);
  } else if (c.predictions.starts_with("file:")) {
    base = read_assignment(read_file(c.predictions.substr(5)), c.problem, g, true);
    for (NodeId u : g.ids()) {
      if (!base.contains(u)) throw Error(ErrorCode::Config, "predictions: no entry for node " + std::to_string(u));
    }
  } else {
    if (c.problem != ProblemKind::Mis) throw Error(ErrorCode::Config, "predictions: patterns are MIS predictions");
    base = pattern(c.predictions, inst);
  }
  if (k == 0) return base;
  return corrupt(c.problem, g, base, k, corruption_seed(seed, k));
}

// Error measure that drives a uniform program's round bound.
std::optional<std::size_t> measure_for(const std::string& name, const ResultRow& row) {
  if (name == "mis.u_bw") return row.eta_bw;
  if (name == "mis.tree_uniform") return row.eta_t;
  return row.eta1;
}

// Largest bound over the connected components of g, for uniform programs
// run without predictions.
std::optional<long> component_bound(const std::string& name, const Graph& g) {
  long best = 0;
  for (const auto& comp : components(g)) {
    auto f = uniform_bound(name, comp.n());
    if (!f) return std::nullopt;
    long b = *f;
    if ((name == "mis.greedy" || name == "mis.greedy_min") && comp.n() <= kExactSolveCap) {
      b = std::min<long>(b, static_cast<long>(mu2(comp)) + 1);
    }
    best = std::max(best, b);
  }
  return best;
}

// Interleaved: the U phase of cycle i runs len(i) rounds, then R runs
// len(i). Rounds until one side has had `need` rounds of its own.
long interleaved_rounds(const TemplateSpec& spec, long need, bool reference_side) {
  const StageInfo& u = stage_info(spec.uniform);
  const StageInfo& ref = stage_info(spec.reference);
  const int period = std::lcm(u.audit_period, ref.audit_period);
  long elapsed = 0, got = 0;
  for (int i = 1; got < need; ++i) {
    const long len = round_up(spec.doubling ? spec.phase << std::min(i - 1, 20) : spec.phase, period);
    const long take = std::min(len, need - got);
    if (reference_side) {
      elapsed += len + take;
    } else {
      elapsed += take;
      if (got + take < need) elapsed += len;
    }
    got += take;
  }
  return elapsed;
}

struct Bounds {
  std::optional<bool> consistency, degrading, robust;
};

Bounds template_bounds(const TemplateSpec& spec, const TemplateBudgets& b, const Graph& g, const ResultRow& row,
                       int rounds, bool finished_in_part1) {
  Bounds out;
  const long c = b.c;
  const long cp = b.c_prime;
  const long n = static_cast<long>(g.n());

  if (row.eta1 == 0) {
    const bool exact = (spec.init == "mis.init" || spec.init == "mis.base") && g.edge_count() > 0;
    out.consistency = exact ? rounds == c : rounds <= c;
  }

  const std::string& worker = spec.kind == TemplateKind::Simple ? spec.reference : spec.uniform;
  const bool greedy = worker == "mis.greedy" || worker == "mis.greedy_min";
  const auto s = measure_for(worker, row);
  std::optional<long> f = s ? uniform_bound(worker, *s) : std::nullopt;
  if (f && greedy && row.eta2) f = std::min<long>(*f, static_cast<long>(*row.eta2) + 1);

  const auto f_ref = uniform_bound(spec.reference, static_cast<std::size_t>(n));

  switch (spec.kind) {
    case TemplateKind::Simple:
      if (f) out.degrading = rounds <= c + *f;
      if (f_ref) out.robust = rounds <= c + *f_ref;
      break;
    case TemplateKind::Consecutive:
      if (f) out.degrading = rounds <= c + 2 * *f + cp;
      if (f_ref) out.robust = rounds <= c + *b.u_budget + 2 * cp + *f_ref;
      break;
    case TemplateKind::Interleaved:
      if (f) out.degrading = rounds <= c + interleaved_rounds(spec, *f, false);
      if (f_ref) out.robust = rounds <= c + interleaved_rounds(spec, *f_ref, true);
      break;
    case TemplateKind::Parallel: {
      const long run = b.r1_run.value_or(0);
      if (worker == "mis.tree_uniform") {
        const bool predicted = f && c + *f <= run;
        if (f && (finished_in_part1 || predicted)) out.degrading = rounds <= c + *f;
      } else if (f && c + *f <= *b.r1) {
        out.degrading = rounds <= c + *f + 2;
      }
      out.robust = rounds <= c + run + cp + b.part2.value_or(0);
      break;
    }
  }
  return out;
}

std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }
std::string cell(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : std::string(); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::optional<long> uniform_bound(const std::string& name, std::size_t s) {
  const long x = static_cast<long>(s);
  if (name == "mis.greedy" || name == "mis.greedy_min") return x;
  if (name == "mis.u_bw") return 4 * ceil_half(x);
  if (name == "mis.tree_uniform") return x == 0 ? 0 : ceil_half(x) + 1;
  if (name == "mm.uniform") return x >= 2 ? 3 * (x / 2) : x;
  if (name == "vc.uniform") return x;
  if (name == "ec.uniform") return x >= 2 ? 2 * x - 3 : 0;
  return std::nullopt;
}

std::string csv_header() {
  return "family,n,d,delta,problem,template,k,seed,eta1,eta2,eta_bw,eta_t,eta_H,rounds,"
         "bound_consistency,bound_degrading,bound_robust,valid";
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << quoted(r.family) << ',' << r.n << ',' << r.d << ',' << r.delta << ',' << r.problem << ',' << quoted(r.program)
     << ',' << r.k << ',' << r.seed << ',' << r.eta1 << ',' << cell(r.eta2) << ',' << cell(r.eta_bw) << ','
     << cell(r.eta_t) << ',' << cell(r.eta_h) << ',' << r.rounds << ',' << cell(r.bound_consistency) << ','
     << cell(r.bound_degrading) << ',' << cell(r.bound_robust) << ',' << quoted(r.valid);
  return os.str();
}

RowOutcome run_row(const ExperimentConfig& config, std::size_t k, std::uint64_t seed, bool trace) {
  if (!config.spec && config.program.empty()) throw Error(ErrorCode::Config, "template: give a template or a program");
  const Loaded loaded = load_instance(config, seed);
  const Instance& inst = loaded.instance;
  const Graph& g = inst.graph;
  const Assignment predictions = make_predictions(config, inst, k, seed);

  RowOutcome out;
  BuiltProgram built;
  if (config.spec) {
    BuiltTemplate t = build_template(*config.spec, params_of(g));
    built = std::move(t.program);
    out.budgets = t.budgets;
  } else {
    ProgramContext ctx;
    ctx.predictions = &predictions;
    built = standalone(config.program, g, ctx);
  }
  if (built.factory.kind != config.problem) {
    throw Error(ErrorCode::Config, std::string("problem: the program solves ") + to_string(built.factory.kind));
  }
  if (built.factory.needs_tree && !inst.tree) {
    throw Error(ErrorCode::Config, "graph.family: '" + built.factory.name + "' needs a rooted tree");
  }

  SimulationOptions opts;
  opts.trace = trace;
  opts.max_rounds = std::max(built.max_rounds, static_cast<int>(4 * g.n() + 20));
  if (out.budgets.r1_run) opts.max_rounds += out.budgets.c + *out.budgets.r1_run + out.budgets.c_prime +
                                              out.budgets.part2.value_or(0);
  if (out.budgets.u_budget) opts.max_rounds += *out.budgets.u_budget + 2 * out.budgets.c_prime;
  if (config.spec && config.spec->kind == TemplateKind::Interleaved) opts.max_rounds *= 4;
  ExtendabilityAuditor auditor(config.problem, checkpoints(*built.schedule, opts.max_rounds));
  opts.observer = std::ref(auditor);

  Outcome run;
  if (built.factory.needs_tree) {
    run = built.factory.needs_predictions ? simulate(*inst.tree, built.factory, predictions, opts)
                                          : simulate(*inst.tree, built.factory, NoPredictions{}, opts);
  } else {
    run = built.factory.needs_predictions ? simulate(g, built.factory, predictions, opts)
                                          : simulate(g, built.factory, NoPredictions{}, opts);
  }

  ResultRow& row = out.row;
  row.family = loaded.family;
  row.n = g.n();
  row.d = g.d();
  row.delta = g.max_degree();
  row.problem = to_string(config.problem);
  row.program = built.factory.name;
  row.k = k;
  row.seed = seed;
  row.rounds = run.total_rounds;

  const ErrorReport rep = error_report(config.problem, g, inst.tree ? &*inst.tree : nullptr, predictions);
  row.eta1 = rep.eta1;
  row.eta2 = rep.eta2;
  row.eta_bw = rep.eta_bw;
  row.eta_t = rep.eta_t;
  row.eta_h = rep.eta_hamming;

  const auto violation = validate(config.problem, g, run.outputs());
  row.valid = violation ? to_string(violation->code) : "VALID";

  if (config.spec) {
    const int part1_end = out.budgets.c + out.budgets.r1_run.value_or(0);
    const Bounds b = template_bounds(*config.spec, out.budgets, g, row, row.rounds, row.rounds <= part1_end);
    row.bound_consistency = b.consistency;
    row.bound_degrading = b.degrading;
    row.bound_robust = b.robust;
  } else if (!built.factory.needs_predictions) {
    if (auto f = component_bound(config.program, g)) row.bound_degrading = row.rounds <= *f;
  }

  out.audit = auditor.violations();
  out.audited_rounds = auditor.audited();
  if (trace) out.trace = std::move(run.trace);

  auto check = [&](const char* name, bool ok, const std::string& detail) {
    if (config.asserts.contains(name) && !ok) out.failures.push_back(std::string(name) + ": " + detail);
  };
  check("valid", !violation, violation ? violation->describe() : "");
  check("consistency", row.bound_consistency.value_or(true), "rounds " + std::to_string(row.rounds));
  check("degrading", row.bound_degrading.value_or(true), "rounds " + std::to_string(row.rounds));
  check("robust", row.bound_robust.value_or(true), "rounds " + std::to_string(row.rounds));
  check("extendable", out.audit.empty(), out.audit.empty() ? "" : out.audit.front());
  return out;
}

std::vector<RowOutcome> run_sweep(const ExperimentConfig& config, Policy policy) {
  if (config.ks.empty() || config.seeds.empty()) throw Error(ErrorCode::Config, "seeds: sweep range is empty");
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t k : config.ks) {
    for (std::uint64_t s : config.seeds) jobs.emplace_back(k, s);
  }
  std::vector<RowOutcome> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (policy == Policy::Parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      rows[i] = run_row(config, jobs[i].first, jobs[i].second, config.trace);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

SanityReport lowerbound_sanity(std::string_view family, std::size_t n) {
  SanityReport rep;
  rep.family = std::string(family);
  rep.n = n;
  std::string program;
  long slack = 3;
  if (family == "MIS_LINE") {
    program = "mis.greedy";
    slack = 5;
  } else if (family == "MM_LINE") {
    program = "mm.uniform";
  } else if (family == "VC_LINE") {
    program = "vc.uniform";
  } else if (family == "EC_LINE") {
    program = "ec.uniform";
  } else {
    throw Error(ErrorCode::Config, "sanity.family: expected MIS_LINE, MM_LINE, VC_LINE or EC_LINE");
  }
  GenParams params;
  params.n = n;
  const Instance inst = generate(Family::Line, params, IdScheme::Increasing, 1);
  const BuiltProgram p = standalone(program, inst.graph);
  SimulationOptions opts;
  opts.max_rounds = p.max_rounds;
  rep.measured = simulate(inst.graph, p.factory, NoPredictions{}, opts).total_rounds;
  rep.threshold = std::max(0L, ceil_half(static_cast<long>(n) - slack));
  rep.pass = rep.measured >= rep.threshold;
  return rep;
}

}  // namespace predsync

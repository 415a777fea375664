#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "predsync/registry.hpp"

namespace predsync {

enum class TemplateKind { Simple, Consecutive, Interleaved, Parallel };

const char* to_string(TemplateKind kind) noexcept;
std::optional<TemplateKind> parse_template(std::string_view text) noexcept;

/// Slots are registry names; an empty cleanup means none.
struct TemplateSpec {
  TemplateKind kind = TemplateKind::Simple;
  std::string init = "mis.init";
  std::string uniform = "mis.greedy";
  std::string cleanup;
  std::string reference = "mis.greedy";
  std::string part1 = "vc.linial";
  std::string part2 = "mis.color_part2_combined";
  std::string r = "n";         // consecutive: reference budget
  std::string u_budget;        // consecutive: rounds given to the uniform part; empty means r
  int phase = 2;               // interleaved: first phase length
  bool doubling = false;       // interleaved: phase i lasts phase * 2^(i-1)
  std::string r1;              // parallel: part 1 budget; empty picks the part's own
  Knowledge knowledge{true, true, true};
};

/// Default slot choice per problem (and for rooted trees).
TemplateSpec default_spec(TemplateKind kind, ProblemKind problem, bool tree = false);

/// Budget selectors: `n`, `fixed:N`, `linial`, `gps`. Throws CONFIG when
/// the selector is unknown or needs a parameter outside `available`.
int evaluate_budget(std::string_view selector, const GraphParams& params, Knowledge available);

struct TemplateBudgets {
  int c = 0;                    // init rounds
  int c_prime = 0;              // cleanup rounds
  std::optional<int> r;         // consecutive
  std::optional<int> u_budget;  // consecutive
  std::optional<int> r1;        // parallel, as supplied
  std::optional<int> r1_run;    // parallel, rounded up to whole uniform phases
  std::optional<int> part2;     // parallel
};

struct BuiltTemplate {
  BuiltProgram program;
  TemplateBudgets budgets;
};

BuiltTemplate build_template(const TemplateSpec& spec, const GraphParams& params);

}  // namespace predsync

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "predsync/engine.hpp"
#include "predsync/stage.hpp"

namespace predsync {

/// What a node program needs from the instance beyond its own view. Only
/// standalone runs read it: prior outputs and (for programs that start
/// from a stored coloring) the predicted colors.
struct ProgramContext {
  const Assignment* predictions = nullptr;
  Assignment prior;
};

/// A stage together with everything a template needs to schedule it.
struct StageInfo {
  std::string name;
  ProblemKind kind = ProblemKind::Mis;
  Knowledge knowledge;
  bool needs_predictions = false;
  bool needs_tree = false;
  std::function<std::unique_ptr<Stage>(std::uint32_t channel)> make;
  /// Rounds the stage runs; nullopt when it runs until every node is done.
  std::function<std::optional<int>(const GraphParams&)> length;
  int audit_period = 0;          // outputs are extendable every this many rounds
  bool extendable_end = false;   // outputs are extendable when the stage ends
  bool halts = false;            // standalone: undecided nodes stop at the end
  bool fault_tolerant = false;   // stores colors only; usable as part 1
  bool exchange_first = false;   // standalone: prepend a prediction exchange
};

const StageInfo& stage_info(const std::string& name);
std::vector<std::string> program_names();

/// A program ready to simulate, with the schedule the auditor reads.
struct BuiltProgram {
  ProgramFactory factory;
  std::shared_ptr<const Schedule> schedule;
  int max_rounds = 0;  // 0: engine default
};

/// `stages[i]` runs in schedule slot i. `seed` adjusts each node's initial
/// knowledge before round 1.
BuiltProgram assemble(std::string name, ProblemKind kind, Knowledge knowledge, bool needs_predictions,
                      bool needs_tree, std::vector<std::function<std::unique_ptr<Stage>()>> stages,
                      std::shared_ptr<const Schedule> schedule, std::optional<int> halt_after,
                      std::function<void(NodeCore&)> seed = {});

/// A registered program run on its own.
BuiltProgram standalone(const std::string& name, const Graph& g, const ProgramContext& ctx = {});

GraphParams params_of(const Graph& g);

}  // namespace predsync

#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "predsync/engine.hpp"
#include "predsync/stage.hpp"

namespace predsync {

/// Whether the decided outputs extend to a solution for any solution of the
/// still-undecided part. Returns a description of the first problem found.
///   MIS: every 1 has only 0 neighbors, every 0 has a 1 neighbor.
///   Matching: decided partners agree, every ⊥ node has only matched neighbors.
///   Colorings: decided colors are in range and proper.
std::optional<std::string> extendability_violation(ProblemKind kind, const Graph& g,
                                                   std::span<const std::optional<OutputValue>> outputs);

/// Rounds after which the schedule promises extendable outputs: the end of
/// every extendable segment and every audit_period-th round of phased ones.
std::set<int> checkpoints(const Schedule& schedule, int upto);

/// Observer that audits the snapshot at each checkpoint.
class ExtendabilityAuditor {
 public:
  ExtendabilityAuditor(ProblemKind kind, std::set<int> rounds) : kind_(kind), rounds_(std::move(rounds)) {}

  void operator()(const RoundSnapshot& snap);

  const std::vector<std::string>& violations() const noexcept { return violations_; }
  int audited() const noexcept { return audited_; }

 private:
  ProblemKind kind_;
  std::set<int> rounds_;
  std::vector<std::string> violations_;
  int audited_ = 0;
};

}  // namespace predsync

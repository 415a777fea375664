#pragma once

#include <optional>
#include <string>

#include "predsync/graph.hpp"

namespace predsync {

enum class ViolationCode { Independence, Maximality, Symmetry, Range, Conflict, Incomplete };

const char* to_string(ViolationCode code) noexcept;

struct Violation {
  ViolationCode code;
  NodeId node = 0;
  std::optional<NodeId> other;  // second endpoint for edge violations
  std::string detail;

  std::string describe() const;
};

/// First violation found scanning nodes in ascending identifier order, or
/// nullopt when `outputs` is a correct solution of `kind` on `g`.
std::optional<Violation> validate(ProblemKind kind, const Graph& g, const Assignment& outputs);

}  // namespace predsync

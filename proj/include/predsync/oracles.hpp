#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "predsync/graph.hpp"

namespace predsync {

/// Largest component handed to the exact α/τ solver.
inline constexpr std::size_t kExactSolveCap = 25;
/// Largest graph whose maximal independent sets are enumerated.
inline constexpr std::size_t kEnumerationCap = 20;

/// Longest shortest path; nullopt when the graph is disconnected. A single
/// node (or the empty graph) has diameter 0.
std::optional<std::size_t> diameter(const Graph& g);

/// Maximum independent set size, exact. Solved per component by
/// branch-and-bound on a maximum-degree vertex; throws CAP_EXCEEDED if any
/// component has more than `cap` nodes.
std::size_t alpha(const Graph& g, std::size_t cap = kExactSolveCap);

/// Minimum vertex cover size, n - alpha.
std::size_t tau(const Graph& g, std::size_t cap = kExactSolveCap);

/// Every maximal independent set, each sorted ascending, in lexicographic
/// order. Throws CAP_EXCEEDED when n > cap.
std::vector<std::vector<NodeId>> enumerate_mis(const Graph& g, std::size_t cap = kEnumerationCap);

}  // namespace predsync

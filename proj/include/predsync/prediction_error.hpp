#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "predsync/generators.hpp"
#include "predsync/graph.hpp"

namespace predsync {

struct ErrorComponent {
  enum class Kind { General, Black, White, EdgeInduced };
  Graph subgraph;
  Kind kind = Kind::General;
};

/// Components of what the problem's base program leaves undecided. Edge
/// coloring: the graph formed by the uncolored edges and their endpoints.
std::vector<ErrorComponent> error_components(ProblemKind kind, const Graph& g, const Assignment& predictions);

/// Nodes the base program leaves undecided (edge coloring: nodes with an
/// uncolored edge).
std::vector<NodeId> undecided_after_base(ProblemKind kind, const Graph& g, const Assignment& predictions);

std::size_t mu1(const Graph& s);
/// 2 min(α, τ); throws CAP_EXCEEDED above the exact-solve cap.
std::size_t mu2(const Graph& s);

enum class Measure { Mu1, Mu2 };
std::size_t eta(Measure measure, ProblemKind kind, const Graph& g, const Assignment& predictions);

/// Largest black or white component after the MIS base program.
std::size_t eta_bw(const Graph& g, const Assignment& predictions);
/// Nodes on the longest monochromatic parent path among nodes the MIS base
/// program leaves undecided (1 + the largest height); 0 when none remain.
std::size_t eta_t(const RootedTree& t, const Assignment& predictions);
/// Fewest prediction changes that give a maximal independent set.
std::size_t eta_hamming(const Graph& g, const Assignment& predictions);

struct ErrorReport {
  std::vector<ErrorComponent> components;
  std::size_t eta1 = 0;
  std::optional<std::size_t> eta2;      // empty when a component exceeds the solver cap
  std::optional<std::size_t> eta_bw;    // MIS
  std::optional<std::size_t> eta_t;     // MIS on rooted trees
  std::optional<std::size_t> eta_hamming;  // MIS within the enumeration cap
};

ErrorReport error_report(ProblemKind kind, const Graph& g, const RootedTree* tree, const Assignment& predictions);

/// A correct solution computed by the problem's uniform program.
Assignment solve(ProblemKind kind, const Graph& g);

/// `correct` with k seeded nodes re-randomized: MIS flips the bit, matching
/// picks another neighbor or ⊥, vertex coloring another color in 1..Δ+1,
/// edge coloring recolors one incident edge at both of its ends.
Assignment corrupt(ProblemKind kind, const Graph& g, const Assignment& correct, std::size_t k, std::uint64_t seed);

/// ALL_ONES, ALL_ZEROS, GRID_4BLOCK, MOD3_LINE (MIS predictions).
Assignment pattern(std::string_view name, const Instance& instance);

}  // namespace predsync

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "predsync/graph.hpp"

namespace predsync {

enum class Family { Line, WheelFk, Grid, Random, Tree };
enum class IdScheme { Increasing, SeededPermutation };
enum class TreeShape { RandomRecursive, Path };

const char* to_string(Family f) noexcept;
std::optional<Family> parse_family(std::string_view text) noexcept;

struct GenParams {
  std::size_t n = 1;        // LINE, RANDOM, TREE
  std::size_t k = 3;        // WHEEL_FK rim size
  std::size_t rows = 1;     // GRID
  std::size_t cols = 1;
  double p = 0.5;           // RANDOM edge probability
  bool connected = false;   // RANDOM: join components into one
  TreeShape shape = TreeShape::RandomRecursive;
  std::uint64_t d = 0;      // identifier domain; 0 means d = n
};

struct GridCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const GridCoord&) const = default;
};

/// A generated graph plus whatever structure its family carries.
struct Instance {
  Family family = Family::Line;
  Graph graph;
  std::optional<RootedTree> tree;            // TREE only
  std::map<NodeId, GridCoord> coords;        // GRID only
};

/// Deterministic for a fixed seed. With INCREASING ids the nodes are
/// numbered 1..n in construction order (line order, row-major grid,
/// hub-spokes-rim for the wheel, attachment order for trees). With
/// SEEDED_PERMUTATION, n distinct ids are drawn from {1..d} and assigned
/// in a seeded random order.
///
/// WHEEL_FK: hub, k spoke nodes adjacent to the hub, k rim nodes forming a
/// cycle, rim node i adjacent to spoke node i. 2k+1 nodes in total.
Instance generate(Family family, const GenParams& params, IdScheme ids, std::uint64_t seed);

}  // namespace predsync

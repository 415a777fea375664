#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "predsync/stage.hpp"

namespace predsync {

// ---- MIS -------------------------------------------------------------------

/// Prediction exchange, I announces 1, neighbors of I announce 0. With
/// `by_identifier`, I admits prediction-1 nodes whose prediction-1
/// neighbors all have smaller identifiers.
inline constexpr int kMisPrologueRounds = 3;
std::unique_ptr<Stage> make_mis_prologue(bool by_identifier, std::uint32_t channel = 0);

/// Prediction exchange only (1 round).
std::unique_ptr<Stage> make_mis_exchange(std::uint32_t channel = 0);

/// Nodes that heard a 1 announce 0 and output it (1 round).
std::unique_ptr<Stage> make_mis_cleanup(std::uint32_t channel = 0);

enum class GreedyOrder { LargestId, SmallestId };
/// Phases of two rounds: local extremes join, their neighbors leave.
std::unique_ptr<Stage> make_greedy(GreedyOrder order = GreedyOrder::LargestId, std::uint32_t channel = 0);

/// Greedy phases alternating between prediction-1 and prediction-0 nodes.
std::unique_ptr<Stage> make_u_bw(std::uint32_t channel = 0);

/// MIS from a stored proper coloring with colors 1..Δ+1, one color class
/// per round for max(Δ,1) rounds. `combined` adds the largest-identifier rule.
std::unique_ptr<Stage> make_color_part2(bool combined, std::uint32_t channel = 0);
int color_part2_rounds(std::size_t delta);

inline constexpr int kTreeInitRounds = 4;
std::unique_ptr<Stage> make_tree_init(std::uint32_t channel = 0);
/// Roots and leaves join every odd round (phases of two rounds).
std::unique_ptr<Stage> make_tree_uniform(std::uint32_t channel = 0);
/// Rooted-tree 3-coloring by iterated bit comparison with the parent, then
/// shift-down reduction. Stores colors 1..3.
std::unique_ptr<Stage> make_gps_coloring(std::uint32_t channel = 0);
int gps_rounds(std::uint64_t d);
inline constexpr int kTreePart2Rounds = 2;
std::unique_ptr<Stage> make_tree_part2(std::uint32_t channel = 0);

// ---- maximal matching ------------------------------------------------------

inline constexpr int kMmPrologueRounds = 2;
/// `unmatched_rule`: any node whose neighbors are all matched outputs ⊥,
/// whatever its prediction.
std::unique_ptr<Stage> make_mm_prologue(bool unmatched_rule, std::uint32_t channel = 0);
/// Groups of three rounds: propose, accept, announce.
std::unique_ptr<Stage> make_mm_uniform(std::uint32_t channel = 0);
std::unique_ptr<Stage> make_mm_cleanup(std::uint32_t channel = 0);

// ---- vertex coloring -------------------------------------------------------

inline constexpr int kVcPrologueRounds = 2;
std::unique_ptr<Stage> make_vc_prologue(bool by_identifier, std::uint32_t channel = 0);
/// Local maxima take the smallest palette color (1 round per phase).
std::unique_ptr<Stage> make_vc_uniform(std::uint32_t channel = 0);

/// Fault-tolerant color reduction from identifiers to Δ+1 colors. Stores
/// the color; the final round announces it to the surviving neighbors.
std::unique_ptr<Stage> make_linial(std::uint32_t channel = 0);
int linial_rounds(std::size_t delta, std::uint64_t d);

/// Palette sizes of the polynomial reduction steps, starting from d.
std::vector<std::uint64_t> linial_palettes(std::size_t delta, std::uint64_t d);

// ---- edge coloring ---------------------------------------------------------

inline constexpr int kEcPrologueRounds = 2;
std::unique_ptr<Stage> make_ec_prologue(std::uint32_t channel = 0);
/// Odd rounds: nodes larger than everything within two uncolored edges color
/// all their edges. Even rounds: receivers forward palette removals.
std::unique_ptr<Stage> make_ec_uniform(std::uint32_t channel = 0);
/// Send output colors and uncolored-edge neighbors along uncolored edges.
std::unique_ptr<Stage> make_ec_cleanup(std::uint32_t channel = 0);

}  // namespace predsync

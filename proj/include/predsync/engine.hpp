#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "predsync/graph.hpp"

namespace predsync {

/// One tagged payload inside a message. Composite programs give each
/// sub-program its own channel so two algorithms can share one message.
struct Part {
  std::uint32_t channel = 0;
  std::uint32_t tag = 0;
  std::vector<std::int64_t> data;
  bool operator==(const Part&) const = default;
};

struct Message {
  std::vector<Part> parts;
  bool operator==(const Message&) const = default;
  std::string to_string() const;
};

/// (recipient, message). At most one message per recipient per round.
using Outbox = std::vector<std::pair<NodeId, Message>>;
/// (sender, message), sorted by sender.
using Inbox = std::vector<std::pair<NodeId, Message>>;

/// Which global parameters a program is allowed to read.
struct Knowledge {
  bool n = false;
  bool d = false;
  bool delta = false;

  Knowledge operator|(const Knowledge& o) const { return {n || o.n, d || o.d, delta || o.delta}; }
  bool covers(const Knowledge& need) const {
    return (n || !need.n) && (d || !need.d) && (delta || !need.delta);
  }
};

struct GraphParams {
  std::size_t n = 0;
  std::uint64_t d = 0;
  std::size_t delta = 0;
};

/// Everything a node knows before round 1.
struct NodeView {
  NodeId id = 0;
  std::vector<NodeId> neighbors;  // sorted
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> d;
  std::optional<std::size_t> delta;
  std::optional<NodeId> parent;  // rooted trees only; kRoot at the root
  std::optional<OutputValue> prediction;

  std::size_t need_n() const;
  std::uint64_t need_d() const;
  std::size_t need_delta() const;
};

struct RoundResult {
  std::optional<OutputValue> output;                      // MIS, matching, vertex coloring
  std::vector<std::pair<NodeId, Color>> edge_outputs;     // edge coloring, by neighbor
  bool terminate = false;
};

/// Per-node state machine. compose() sees only the state left by the
/// previous round; process() then consumes that round's inbox.
class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual Outbox compose(int round) const = 0;
  virtual void process(int round, const Inbox& inbox, RoundResult& result) = 0;
  /// Locally stored (not yet output) color, for fault-tolerant parts.
  virtual std::optional<Color> stored_color() const { return std::nullopt; }
};

struct ProgramFactory {
  std::string name;
  ProblemKind kind = ProblemKind::Mis;
  Knowledge knowledge;
  bool needs_predictions = false;
  bool needs_tree = false;
  std::function<std::unique_ptr<NodeProgram>(const NodeView&)> make;
};

enum class Policy { Serial, Parallel };

/// State visible to an observer after each round.
struct RoundSnapshot {
  int round = 0;
  const Graph* graph = nullptr;
  std::span<const char> active;                          // by node index
  std::span<const std::optional<OutputValue>> outputs;   // assigned so far (edge coloring: partial)
  std::span<const std::optional<Color>> stored;          // stored colors of active nodes
};

using Observer = std::function<void(const RoundSnapshot&)>;

struct SimulationOptions {
  int max_rounds = 0;  // 0 selects 4n + 20
  bool trace = false;
  Policy policy = Policy::Serial;
  /// Parameters exposed to nodes instead of the simulated graph's own.
  std::optional<GraphParams> knowledge_override;
  Observer observer;
  /// Node stops (without further output) at the end of the given round.
  std::map<NodeId, int> crash_after;
  /// Outputs fixed before round 1; these nodes start terminated.
  Assignment prior;
};

struct NodeResult {
  std::optional<int> term_round;
  bool complete = false;
  std::optional<OutputValue> output;
  std::optional<Color> stored;
};

struct OutputEvent {
  int round = 0;
  NodeId node = 0;
  OutputValue value;
};

struct Outcome {
  std::map<NodeId, NodeResult> nodes;
  int total_rounds = 0;
  std::vector<OutputEvent> events;
  std::vector<std::string> trace;

  /// Complete outputs only.
  Assignment outputs() const;
};

struct NoPredictions {};

Outcome simulate(const Graph& g, const ProgramFactory& factory, const Assignment& predictions,
                 const SimulationOptions& options = {});
Outcome simulate(const Graph& g, const ProgramFactory& factory, NoPredictions,
                 const SimulationOptions& options = {});
Outcome simulate(const RootedTree& t, const ProgramFactory& factory, const Assignment& predictions,
                 const SimulationOptions& options = {});
Outcome simulate(const RootedTree& t, const ProgramFactory& factory, NoPredictions,
                 const SimulationOptions& options = {});

/// Nodes not terminated at the end of round r (r = 0: all nodes).
std::vector<NodeId> snapshot_active(const Outcome& outcome, int round);

}  // namespace predsync

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "predsync/engine.hpp"

namespace predsync {

// Message tags. One namespace for every program so traces read uniformly.
enum Tag : std::uint32_t {
  kPred = 1,     // predicted value
  kOne,          // "I output 1"
  kZero,         // "I output 0"
  kColor,        // current or final color
  kRootMsg,      // tree: "I am a root"
  kLeafMsg,      // tree: "I am a leaf"
  kPropose,
  kAccept,
  kMatched,      // "I am matched (to data[0])"
  kEdgePred,     // predicted color of our shared edge
  kEdgeColor,    // color chosen for our shared edge
  kUsedColors,   // colors output at my end
  kTwoHop,       // my other uncolored-edge neighbors
  kEdgeDone,     // "remove data[0] from our palette; my edge to data[1] is colored"
};

/// Knowledge one node accumulates; shared by every stage of a composite
/// program so a later stage starts from what earlier stages learned.
struct NodeCore {
  explicit NodeCore(NodeView v);

  NodeView view;
  std::set<NodeId> active;  // neighbors not known to have terminated

  // MIS
  bool saw_one = false;  // a neighbor output 1; this node must output 0
  std::map<NodeId, bool> nb_bit;
  std::optional<Color> color;  // stored by a fault-tolerant coloring part
  std::map<NodeId, Color> nb_color;

  // maximal matching
  std::optional<NodeId> matched;  // agreed partner, not yet announced
  std::map<NodeId, std::optional<NodeId>> nb_partner;

  // vertex coloring
  std::set<Color> palette;
  std::map<NodeId, Color> nb_pred_color;

  // edge coloring
  std::map<NodeId, Color> edge_color;             // colored incident edges
  std::map<NodeId, std::set<Color>> edge_palette;  // uncolored incident edges
  std::map<NodeId, std::set<NodeId>> two_hop;      // neighbor -> its other uncolored-edge neighbors
  std::vector<std::pair<Color, NodeId>> forward;   // colors to pass on: (color, colored-edge partner)

  NodeId id() const noexcept { return view.id; }
  bool bit() const;  // MIS prediction
  bool is_tree_root() const { return view.parent && *view.parent == kRoot; }
  /// Parent if it is still active.
  std::optional<NodeId> live_parent() const;
  bool largest_among(const std::set<NodeId>& ids) const;
};

/// Outgoing messages of one node in one round, built part by part.
class Mail {
 public:
  void add(NodeId to, Part part) { box_[to].parts.push_back(std::move(part)); }
  Outbox flatten() const { return Outbox(box_.begin(), box_.end()); }

 private:
  std::map<NodeId, Message> box_;
};

struct Received {
  NodeId from;
  const Part* part;
};
using Mailbag = std::vector<Received>;

Mailbag unpack(const Inbox& inbox);

/// One algorithm inside a composite program. Rounds are local to the stage
/// and start at 1; the stage keeps its own position across interruptions.
class Stage {
 public:
  explicit Stage(std::uint32_t channel) : channel_(channel) {}
  virtual ~Stage() = default;

  virtual void compose(const NodeCore& core, int r, Mail& out) const = 0;
  virtual void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) = 0;

  std::uint32_t channel() const noexcept { return channel_; }

 protected:
  void send(Mail& out, NodeId to, std::uint32_t tag, std::vector<std::int64_t> data = {}) const {
    out.add(to, Part{channel_, tag, std::move(data)});
  }
  template <typename Range>
  void send_all(Mail& out, const Range& to, std::uint32_t tag,
                const std::vector<std::int64_t>& data = {}) const {
    for (NodeId v : to) send(out, v, tag, data);
  }

  template <typename Fn>
  void each(const Mailbag& in, Fn&& fn) const {
    for (const auto& m : in) {
      if (m.part->channel == channel_) fn(m.from, *m.part);
    }
  }

 private:
  std::uint32_t channel_;
};

/// A run of `length` rounds (negative: unbounded) of stage `slot`.
struct Segment {
  int slot = 0;
  int start = 1;          // first global round
  int length = 0;
  int local_offset = 0;   // stage-local rounds already spent before this segment
  int audit_period = 0;   // stage outputs are extendable every this many local rounds
  bool extendable_end = false;
};

/// Which stage runs in which global round. A fixed head followed by an
/// optional endless alternation of phases.
class Schedule {
 public:
  struct Piece {
    int slot = 0;
    int length = 0;  // negative: unbounded
    int audit_period = 0;
    bool extendable_end = false;
  };

  void append(Piece p) { head_.push_back(p); }
  /// After the head, run phase i of every cycle slot in turn, each for
  /// phase_length(i) rounds (i from 1).
  void cycle(std::vector<Piece> slots, std::function<int(int)> phase_length) {
    cycle_ = std::move(slots);
    phase_length_ = std::move(phase_length);
  }

  struct Position {
    int slot;
    int local;
  };
  std::optional<Position> locate(int round) const;
  /// Every segment that starts at or before `round`.
  std::vector<Segment> segments(int round) const;
  /// Total length of the head when finite.
  std::optional<int> head_length() const;

 private:
  template <typename Fn>
  void walk(int upto, Fn&& fn) const;

  std::vector<Piece> head_;
  std::vector<Piece> cycle_;
  std::function<int(int)> phase_length_;
};

/// NodeProgram that runs stages according to a schedule. With `halt_after`,
/// nodes still without output terminate at the end of that round.
class ComposedProgram : public NodeProgram {
 public:
  ComposedProgram(NodeCore core, std::vector<std::unique_ptr<Stage>> slots,
                  std::shared_ptr<const Schedule> schedule, std::optional<int> halt_after = std::nullopt);

  Outbox compose(int round) const override;
  void process(int round, const Inbox& inbox, RoundResult& result) override;
  std::optional<Color> stored_color() const override { return core_.color; }

  const NodeCore& core() const noexcept { return core_; }

 private:
  NodeCore core_;
  std::vector<std::unique_ptr<Stage>> slots_;
  std::shared_ptr<const Schedule> schedule_;
  std::optional<int> halt_after_;
};

/// Runs two stages in the same rounds on their own channels.
std::unique_ptr<Stage> make_parallel(std::unique_ptr<Stage> first, std::unique_ptr<Stage> second);

}  // namespace predsync

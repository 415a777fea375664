#include "predsync/stage.hpp"

#include <algorithm>

#include "predsync/error.hpp"

namespace predsync {

NodeCore::NodeCore(NodeView v) : view(std::move(v)) {
  active.insert(view.neighbors.begin(), view.neighbors.end());
  if (view.delta) {
    const auto delta = static_cast<Color>(*view.delta);
    for (Color c = 1; c <= delta + 1; ++c) palette.insert(c);
    for (NodeId u : view.neighbors) {
      auto& p = edge_palette[u];
      for (Color c = 1; c <= 2 * delta - 1; ++c) p.insert(c);
    }
  }
}

bool NodeCore::bit() const {
  if (!view.prediction) throw Error(ErrorCode::InvalidArgument, "node has no prediction");
  const auto* b = std::get_if<MisBit>(&*view.prediction);
  if (!b) throw Error(ErrorCode::InvalidArgument, "prediction is not an MIS bit");
  return b->in_set;
}

std::optional<NodeId> NodeCore::live_parent() const {
  if (!view.parent || *view.parent == kRoot) return std::nullopt;
  if (!active.contains(*view.parent)) return std::nullopt;
  return *view.parent;
}

bool NodeCore::largest_among(const std::set<NodeId>& ids) const {
  return ids.empty() || *ids.rbegin() < view.id;
}

Mailbag unpack(const Inbox& inbox) {
  Mailbag bag;
  for (const auto& [from, msg] : inbox) {
    for (const auto& p : msg.parts) bag.push_back({from, &p});
  }
  return bag;
}

template <typename Fn>
void Schedule::walk(int upto, Fn&& fn) const {
  std::map<int, int> spent;  // slot -> local rounds so far
  int start = 1;
  auto emit = [&](const Piece& p, int length) {
    Segment s{p.slot, start, length, spent[p.slot], p.audit_period, p.extendable_end};
    if (!fn(s) || length < 0) return false;
    spent[p.slot] += length;
    start += length;
    return start <= upto;
  };
  for (const auto& p : head_) {
    if (!emit(p, p.length)) return;
  }
  if (cycle_.empty()) return;
  for (int phase = 1;; ++phase) {
    const int len = phase_length_(phase);
    if (len <= 0) throw Error(ErrorCode::Config, "phase length must be positive");
    for (const auto& p : cycle_) {
      if (!emit(p, len)) return;
    }
  }
}

std::optional<Schedule::Position> Schedule::locate(int round) const {
  std::optional<Position> found;
  walk(round, [&](const Segment& s) {
    if (round >= s.start && (s.length < 0 || round < s.start + s.length)) {
      found = Position{s.slot, s.local_offset + round - s.start + 1};
      return false;
    }
    return true;
  });
  return found;
}

std::vector<Segment> Schedule::segments(int round) const {
  std::vector<Segment> out;
  walk(round, [&](const Segment& s) {
    if (s.start > round) return false;
    out.push_back(s);
    return true;
  });
  return out;
}

std::optional<int> Schedule::head_length() const {
  int total = 0;
  for (const auto& p : head_) {
    if (p.length < 0) return std::nullopt;
    total += p.length;
  }
  return total;
}

ComposedProgram::ComposedProgram(NodeCore core, std::vector<std::unique_ptr<Stage>> slots,
                                 std::shared_ptr<const Schedule> schedule, std::optional<int> halt_after)
    : core_(std::move(core)), slots_(std::move(slots)), schedule_(std::move(schedule)), halt_after_(halt_after) {}

Outbox ComposedProgram::compose(int round) const {
  Mail out;
  if (auto pos = schedule_->locate(round)) slots_.at(pos->slot)->compose(core_, pos->local, out);
  return out.flatten();
}

void ComposedProgram::process(int round, const Inbox& inbox, RoundResult& result) {
  if (auto pos = schedule_->locate(round)) {
    slots_.at(pos->slot)->process(core_, pos->local, unpack(inbox), result);
  }
  if (halt_after_ && round >= *halt_after_) result.terminate = true;
}

namespace {

class ParallelStage : public Stage {
 public:
  ParallelStage(std::unique_ptr<Stage> a, std::unique_ptr<Stage> b)
      : Stage(a->channel()), a_(std::move(a)), b_(std::move(b)) {
    if (a_->channel() == b_->channel()) {
      throw Error(ErrorCode::Config, "parallel stages need distinct channels");
    }
  }

  void compose(const NodeCore& core, int r, Mail& out) const override {
    a_->compose(core, r, out);
    b_->compose(core, r, out);
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    a_->process(core, r, in, res);
    RoundResult side;
    b_->process(core, r, in, side);
    if (side.output || !side.edge_outputs.empty() || side.terminate) {
      throw Error(ErrorCode::ProtocolViolation, "second parallel stage must only store its results");
    }
  }

 private:
  std::unique_ptr<Stage> a_;
  std::unique_ptr<Stage> b_;
};

}  // namespace

std::unique_ptr<Stage> make_parallel(std::unique_ptr<Stage> first, std::unique_ptr<Stage> second) {
  return std::make_unique<ParallelStage>(std::move(first), std::move(second));
}

}  // namespace predsync

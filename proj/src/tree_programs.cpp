#include <algorithm>
#include <bit>

#include "predsync/error.hpp"
#include "predsync/programs.hpp"

namespace predsync {

namespace {

void absorb(NodeCore& core, NodeId from, const Part& p) {
  switch (p.tag) {
    case kOne:
    case kRootMsg:
    case kLeafMsg:
      core.active.erase(from);
      core.saw_one = true;
      break;
    case kZero:
      core.active.erase(from);
      break;
    default:
      break;
  }
}

void output_bit(RoundResult& res, bool in_set) { res.output = MisBit{in_set}; }

bool parent_black(const NodeCore& core) {
  if (core.is_tree_root()) return false;
  auto it = core.nb_bit.find(*core.view.parent);
  if (it == core.nb_bit.end()) throw Error(ErrorCode::ProtocolViolation, "parent prediction unknown");
  return it->second;
}

bool has_black_child(const NodeCore& core) {
  for (const auto& [u, b] : core.nb_bit) {
    if (b && u != core.view.parent.value_or(kRoot)) return true;
  }
  return false;
}

class TreeInit : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    switch (r) {
      case 1:
        send_all(out, core.active, kPred, {core.bit() ? 1 : 0});
        break;
      case 2:
        if (in_i(core)) send_all(out, core.active, kOne);
        if (early_zero(core)) send_all(out, core.active, kZero);
        break;
      case 3:
        if (core.saw_one) send_all(out, core.active, kZero);
        else if (late_white(core)) send_all(out, core.active, kOne);
        break;
      case 4:
        if (core.saw_one) send_all(out, core.active, kZero);
        break;
      default:
        break;
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r == 1) {
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag == kPred) core.nb_bit[from] = p.data.at(0) != 0;
      });
      return;
    }
    const bool join = (r == 2 && in_i(core)) || (r == 3 && late_white(core));
    const bool zero = (r == 2 && early_zero(core)) || (r >= 3 && core.saw_one);
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (join) {
      output_bit(res, true);
    } else if (zero || (r == 2 && core.saw_one && core.active.empty())) {
      output_bit(res, false);
    }
  }

 private:
  static bool in_i(const NodeCore& core) { return core.bit() && !parent_black(core); }
  static bool early_zero(const NodeCore& core) { return !core.bit() && has_black_child(core); }
  // White nodes without a white parent that heard no 1 in round 2.
  static bool late_white(const NodeCore& core) {
    return !core.bit() && !core.saw_one && (core.is_tree_root() || parent_black(core));
  }
};

class TreeUniform : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r % 2 == 0) {
      if (core.saw_one) send_all(out, core.active, kZero);
      return;
    }
    if (core.saw_one) return;
    const auto parent = core.live_parent();
    if (!parent) {
      send_all(out, core.active, kRootMsg);
    } else if (core.active.size() == 1) {
      send(out, *parent, kLeafMsg);
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r % 2 == 0) {
      const bool pending = core.saw_one;
      each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
      if (pending) output_bit(res, false);
      return;
    }
    const auto parent = core.live_parent();
    const bool root = !core.saw_one && !parent;
    const bool leaf = !core.saw_one && parent && core.active.size() == 1;
    bool root_above = false;
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag == kRootMsg && parent && from == *parent) root_above = true;
      absorb(core, from, p);
    });
    if (root) output_bit(res, true);
    if (leaf) output_bit(res, !root_above);
  }
};

struct GpsPlan {
  int steps = 0;
  std::uint64_t palette = 0;  // colors 0..palette-1 after the steps
};

int bits_for(std::uint64_t m) { return m <= 1 ? 1 : static_cast<int>(std::bit_width(m - 1)); }

GpsPlan gps_plan(std::uint64_t d) {
  GpsPlan plan{0, d};
  while (plan.palette > 6) {
    plan.palette = 2 * static_cast<std::uint64_t>(bits_for(plan.palette));
    ++plan.steps;
  }
  return plan;
}

int working_rounds(const GpsPlan& plan) {
  const int reductions = plan.palette > 3 ? static_cast<int>(plan.palette) - 3 : 0;
  return plan.steps + 2 * reductions;
}

std::int64_t smallest_free(const std::set<std::int64_t>& used) {
  std::int64_t c = 0;
  while (used.contains(c)) ++c;
  return c;
}

class GpsColoring : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r <= working_rounds(gps_plan(core.view.need_d()))) send_all(out, core.active, kColor, {current(core)});
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult&) override {
    const GpsPlan plan = gps_plan(core.view.need_d());
    if (r > working_rounds(plan)) {
      core.color = static_cast<Color>(current(core) + 1);
      return;
    }
    const std::int64_t own = current(core);
    std::optional<std::int64_t> from_parent;
    std::set<std::int64_t> seen;
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag != kColor) return;
      seen.insert(p.data.at(0));
      if (core.view.parent && from == *core.view.parent) from_parent = p.data.at(0);
    });

    std::int64_t next = own;
    if (r <= plan.steps) {
      // A node without a parent behaves as if the parent differs in bit 0.
      int i = 0;
      if (from_parent) i = std::countr_zero(static_cast<std::uint64_t>(own ^ *from_parent));
      next = 2 * i + ((own >> i) & 1);
    } else {
      const int k = r - plan.steps - 1;
      const std::int64_t target = static_cast<std::int64_t>(plan.palette) - 1 - k / 2;
      if (k % 2 == 0) {
        next = from_parent ? *from_parent : smallest_free({own});
      } else if (own == target) {
        next = smallest_free(seen);
      }
    }
    core.color = static_cast<Color>(next + 1);
  }

 private:
  static std::int64_t current(const NodeCore& core) {
    return core.color ? *core.color - 1 : static_cast<std::int64_t>(core.id()) - 1;
  }
};

class TreePart2 : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    const Color c = color_of(core);
    if (r == 1) {
      send_all(out, core.active, kColor, {c});
    } else if (r == 2 && c == 2) {
      for (NodeId u : core.active) {
        if (core.nb_color.at(u) == 3) send(out, u, kOne);
      }
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    const Color c = color_of(core);
    if (r == 1) {
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag == kColor) core.nb_color[from] = static_cast<Color>(p.data.at(0));
      });
      bool next_to_one = false;
      for (NodeId u : core.active) {
        auto it = core.nb_color.find(u);
        if (it == core.nb_color.end() || it->second == c) {
          throw Error(ErrorCode::ProtocolViolation,
                      "stored 3-coloring not proper at edge " + std::to_string(core.id()) + "-" + std::to_string(u));
        }
        if (it->second == 1) next_to_one = true;
      }
      if (c == 1) output_bit(res, true);
      else if (next_to_one) output_bit(res, false);
      return;
    }
    bool heard = false;
    each(in, [&](NodeId, const Part& p) { heard = heard || p.tag == kOne; });
    if (c == 2) output_bit(res, true);
    else output_bit(res, !heard);
  }

 private:
  static Color color_of(const NodeCore& core) {
    Color c = 0;
    if (core.color) c = *core.color;
    else if (core.id() <= 3) c = static_cast<Color>(core.id());
    if (c < 1 || c > 3) throw Error(ErrorCode::ProtocolViolation, "node has no stored color in 1..3");
    return c;
  }
};

}  // namespace

std::unique_ptr<Stage> make_tree_init(std::uint32_t channel) { return std::make_unique<TreeInit>(channel); }
std::unique_ptr<Stage> make_tree_uniform(std::uint32_t channel) { return std::make_unique<TreeUniform>(channel); }
std::unique_ptr<Stage> make_gps_coloring(std::uint32_t channel) { return std::make_unique<GpsColoring>(channel); }
std::unique_ptr<Stage> make_tree_part2(std::uint32_t channel) { return std::make_unique<TreePart2>(channel); }

// Identifiers up to 3 are already a coloring; one round stores them.
int gps_rounds(std::uint64_t d) { return std::max(1, working_rounds(gps_plan(d))); }

}  // namespace predsync

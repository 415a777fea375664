#include "predsync/error.hpp"
#include "predsync/programs.hpp"

namespace predsync {

namespace {

void absorb(NodeCore& core, NodeId from, const Part& p) {
  if (p.tag == kOne) {
    core.active.erase(from);
    core.saw_one = true;
  } else if (p.tag == kZero) {
    core.active.erase(from);
  }
}

void output_bit(RoundResult& res, bool in_set) { res.output = MisBit{in_set}; }

class MisPrologue : public Stage {
 public:
  MisPrologue(bool by_identifier, std::uint32_t ch) : Stage(ch), by_identifier_(by_identifier) {}

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r == 1) send_all(out, core.active, kPred, {core.bit() ? 1 : 0});
    if (r == 2 && in_i_) send_all(out, core.active, kOne);
    if (r == 3 && core.saw_one) send_all(out, core.active, kZero);
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r == 1) {
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag == kPred) core.nb_bit[from] = p.data.at(0) != 0;
      });
      in_i_ = core.bit();
      for (const auto& [u, b] : core.nb_bit) {
        if (b && (!by_identifier_ || u > core.id())) in_i_ = false;
      }
      return;
    }
    const bool pending = core.saw_one;
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (r == 2 && in_i_) output_bit(res, true);
    if (r == 3 && pending) output_bit(res, false);
  }

 private:
  bool by_identifier_;
  bool in_i_ = false;
};

class MisExchange : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r == 1) send_all(out, core.active, kPred, {core.bit() ? 1 : 0});
  }

  void process(NodeCore& core, int, const Mailbag& in, RoundResult&) override {
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag == kPred) core.nb_bit[from] = p.data.at(0) != 0;
    });
  }
};

class MisCleanup : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int, Mail& out) const override {
    if (core.saw_one) send_all(out, core.active, kZero);
  }

  void process(NodeCore& core, int, const Mailbag& in, RoundResult& res) override {
    const bool pending = core.saw_one;
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (pending) output_bit(res, false);
  }
};

class Greedy : public Stage {
 public:
  Greedy(GreedyOrder order, std::uint32_t ch) : Stage(ch), order_(order) {}

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r % 2 == 1) {
      if (joins(core)) send_all(out, core.active, kOne);
    } else if (core.saw_one) {
      send_all(out, core.active, kZero);
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    const bool join = r % 2 == 1 && joins(core);
    const bool pending = r % 2 == 0 && core.saw_one;
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (join) output_bit(res, true);
    if (pending) output_bit(res, false);
  }

 private:
  bool joins(const NodeCore& core) const {
    if (core.saw_one) return false;
    if (order_ == GreedyOrder::LargestId) return core.largest_among(core.active);
    return core.active.empty() || *core.active.begin() > core.id();
  }

  GreedyOrder order_;
};

class BlackWhite : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r % 2 == 1) {
      if (joins(core, r)) send_all(out, core.active, kOne);
    } else if (core.saw_one) {
      send_all(out, core.active, kZero);
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    const bool join = r % 2 == 1 && joins(core, r);
    const bool pending = r % 2 == 0 && core.saw_one;
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (join) output_bit(res, true);
    if (pending) output_bit(res, false);
  }

 private:
  // Phase k = (r+1)/2 runs on black nodes when k is odd.
  static bool joins(const NodeCore& core, int r) {
    const bool black_phase = ((r + 1) / 2) % 2 == 1;
    if (core.saw_one || core.bit() != black_phase) return false;
    for (NodeId u : core.active) {
      auto it = core.nb_bit.find(u);
      if (it == core.nb_bit.end()) throw Error(ErrorCode::ProtocolViolation, "neighbor prediction unknown");
      if (it->second == black_phase && u > core.id()) return false;
    }
    return true;
  }
};

class ColorPart2 : public Stage {
 public:
  ColorPart2(bool combined, std::uint32_t ch) : Stage(ch), combined_(combined) {}

  void compose(const NodeCore& core, int i, Mail& out) const override {
    const int last = color_part2_rounds(core.view.need_delta());
    if (joins(core, i, last)) {
      send_all(out, core.active, kOne);
    } else if (core.saw_one && i < last) {
      send_all(out, core.active, kZero);
    }
  }

  void process(NodeCore& core, int i, const Mailbag& in, RoundResult& res) override {
    const std::size_t delta = core.view.need_delta();
    const int last = color_part2_rounds(delta);
    if (i == 1) check_coloring(core, delta);
    const bool join = joins(core, i, last);
    const bool pending = core.saw_one;
    each(in, [&](NodeId from, const Part& p) { absorb(core, from, p); });
    if (join) {
      output_bit(res, true);
    } else if (pending) {
      output_bit(res, false);
    } else if (i >= last) {
      if (core.saw_one) {
        output_bit(res, false);
      } else if (*core.color == static_cast<Color>(delta) + 1) {
        output_bit(res, true);
      } else {
        throw Error(ErrorCode::ProtocolViolation,
                    "node " + std::to_string(core.id()) + " undecided after the last color round");
      }
    }
  }

 private:
  bool joins(const NodeCore& core, int i, int last) const {
    if (core.saw_one || !core.color) return false;
    const Color c = *core.color;
    if (c == i) return true;
    if (!combined_ || i >= last || c <= i) return false;
    for (NodeId u : core.active) {
      auto it = core.nb_color.find(u);
      if (it != core.nb_color.end() && it->second == i) return false;
    }
    return core.largest_among(core.active);
  }

  static void check_coloring(const NodeCore& core, std::size_t delta) {
    if (!core.color) throw Error(ErrorCode::ProtocolViolation, "node has no stored color");
    const Color c = *core.color;
    if (c < 1 || c > static_cast<Color>(delta) + 1) {
      throw Error(ErrorCode::ProtocolViolation, "stored color " + std::to_string(c) + " out of range");
    }
    for (NodeId u : core.active) {
      auto it = core.nb_color.find(u);
      if (it == core.nb_color.end()) {
        throw Error(ErrorCode::ProtocolViolation, "color of neighbor " + std::to_string(u) + " unknown");
      }
      if (it->second == c) {
        throw Error(ErrorCode::ProtocolViolation, "stored coloring not proper at edge " +
                                                      std::to_string(core.id()) + "-" + std::to_string(u));
      }
    }
  }

  bool combined_;
};

}  // namespace

std::unique_ptr<Stage> make_mis_prologue(bool by_identifier, std::uint32_t channel) {
  return std::make_unique<MisPrologue>(by_identifier, channel);
}
std::unique_ptr<Stage> make_mis_exchange(std::uint32_t channel) { return std::make_unique<MisExchange>(channel); }
std::unique_ptr<Stage> make_mis_cleanup(std::uint32_t channel) { return std::make_unique<MisCleanup>(channel); }
std::unique_ptr<Stage> make_greedy(GreedyOrder order, std::uint32_t channel) {
  return std::make_unique<Greedy>(order, channel);
}
std::unique_ptr<Stage> make_u_bw(std::uint32_t channel) { return std::make_unique<BlackWhite>(channel); }
std::unique_ptr<Stage> make_color_part2(bool combined, std::uint32_t channel) {
  return std::make_unique<ColorPart2>(combined, channel);
}

int color_part2_rounds(std::size_t delta) { return delta < 1 ? 1 : static_cast<int>(delta); }

}  // namespace predsync

#include <algorithm>

#include "predsync/error.hpp"
#include "predsync/programs.hpp"

namespace predsync {

namespace {

// ---- maximal matching ------------------------------------------------------

std::optional<NodeId> predicted_partner(const NodeCore& core) {
  if (!core.view.prediction) throw Error(ErrorCode::InvalidArgument, "node has no prediction");
  const auto* m = std::get_if<MatchPartner>(&*core.view.prediction);
  if (!m) throw Error(ErrorCode::InvalidArgument, "prediction is not a matching partner");
  return m->partner;
}

void output_partner(RoundResult& res, std::optional<NodeId> partner) { res.output = MatchPartner{partner}; }

class MmPrologue : public Stage {
 public:
  MmPrologue(bool unmatched_rule, std::uint32_t ch) : Stage(ch), unmatched_rule_(unmatched_rule) {}

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r == 1) {
      const auto p = predicted_partner(core);
      send_all(out, core.active, kPred, {static_cast<std::int64_t>(p.value_or(0))});
    } else if (r == 2 && mutual(core)) {
      send_all(out, core.active, kMatched, {static_cast<std::int64_t>(*predicted_partner(core))});
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r == 1) {
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag != kPred) return;
        const auto v = static_cast<NodeId>(p.data.at(0));
        core.nb_partner[from] = v == 0 ? std::nullopt : std::optional<NodeId>(v);
      });
      return;
    }
    const bool match = mutual(core);
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag == kMatched) core.active.erase(from);
    });
    if (match) {
      output_partner(res, predicted_partner(core));
    } else if (core.active.empty() && (unmatched_rule_ || !predicted_partner(core))) {
      output_partner(res, std::nullopt);
    }
  }

 private:
  static bool mutual(const NodeCore& core) {
    const auto p = predicted_partner(core);
    if (!p) return false;
    auto it = core.nb_partner.find(*p);
    return it != core.nb_partner.end() && it->second == core.id();
  }

  bool unmatched_rule_;
};

class MmUniform : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    switch ((r - 1) % 3) {
      case 0:
        if (proposer(core)) send(out, *core.active.begin(), kPropose);
        break;
      case 1:
        if (accept_) send(out, *accept_, kAccept);
        break;
      default:
        if (core.matched) {
          for (NodeId u : core.active) {
            if (u != *core.matched) send(out, u, kMatched, {static_cast<std::int64_t>(*core.matched)});
          }
        }
        break;
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    switch ((r - 1) % 3) {
      case 0: {
        accept_.reset();
        proposed_to_.reset();
        if (core.active.empty()) {
          output_partner(res, std::nullopt);
          return;
        }
        if (proposer(core)) proposed_to_ = *core.active.begin();
        each(in, [&](NodeId from, const Part& p) {
          if (p.tag == kPropose && (!accept_ || from > *accept_)) accept_ = from;
        });
        break;
      }
      case 1:
        each(in, [&](NodeId from, const Part& p) {
          if (p.tag == kAccept && proposed_to_ && from == *proposed_to_) core.matched = from;
        });
        if (accept_) core.matched = accept_;
        break;
      default:
        each(in, [&](NodeId from, const Part& p) {
          if (p.tag == kMatched) core.active.erase(from);
        });
        if (core.matched) {
          output_partner(res, core.matched);
        } else if (core.active.empty()) {
          output_partner(res, std::nullopt);
        }
        accept_.reset();
        proposed_to_.reset();
        break;
    }
  }

 private:
  static bool proposer(const NodeCore& core) {
    return !core.matched && !core.active.empty() && core.largest_among(core.active);
  }

  std::optional<NodeId> accept_;
  std::optional<NodeId> proposed_to_;
};

class MmCleanup : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int, Mail& out) const override {
    if (!core.matched) return;
    for (NodeId u : core.active) {
      if (u != *core.matched) send(out, u, kMatched, {static_cast<std::int64_t>(*core.matched)});
    }
  }

  void process(NodeCore& core, int, const Mailbag& in, RoundResult& res) override {
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag == kMatched) core.active.erase(from);
    });
    if (core.matched) output_partner(res, core.matched);
  }
};

// ---- vertex coloring -------------------------------------------------------

Color predicted_color(const NodeCore& core) {
  if (!core.view.prediction) throw Error(ErrorCode::InvalidArgument, "node has no prediction");
  const auto* c = std::get_if<VertexColor>(&*core.view.prediction);
  if (!c) throw Error(ErrorCode::InvalidArgument, "prediction is not a vertex color");
  return c->color;
}

void take_color(NodeCore& core, NodeId from, const Part& p) {
  if (p.tag != kColor) return;
  core.active.erase(from);
  core.palette.erase(static_cast<Color>(p.data.at(0)));
}

class VcPrologue : public Stage {
 public:
  VcPrologue(bool by_identifier, std::uint32_t ch) : Stage(ch), by_identifier_(by_identifier) {}

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r == 1) send_all(out, core.active, kPred, {predicted_color(core)});
    if (r == 2 && commit_) send_all(out, core.active, kColor, {predicted_color(core)});
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    const Color c = predicted_color(core);
    if (r == 1) {
      const auto delta = static_cast<Color>(core.view.need_delta());
      if (c < 1 || c > delta + 1) {
        throw Error(ErrorCode::InvalidArgument, "predicted color " + std::to_string(c) + " of node " +
                                                    std::to_string(core.id()) + " outside 1.." +
                                                    std::to_string(delta + 1));
      }
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag == kPred) core.nb_pred_color[from] = static_cast<Color>(p.data.at(0));
      });
      commit_ = true;
      for (const auto& [u, uc] : core.nb_pred_color) {
        if (uc == c && (!by_identifier_ || u > core.id())) commit_ = false;
      }
      return;
    }
    each(in, [&](NodeId from, const Part& p) { take_color(core, from, p); });
    if (commit_) res.output = VertexColor{c};
  }

 private:
  bool by_identifier_;
  bool commit_ = false;
};

class VcUniform : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int, Mail& out) const override {
    if (core.largest_among(core.active) && !core.palette.empty()) {
      send_all(out, core.active, kColor, {*core.palette.begin()});
    }
  }

  void process(NodeCore& core, int, const Mailbag& in, RoundResult& res) override {
    const bool join = core.largest_among(core.active);
    if (join && core.palette.empty()) {
      throw Error(ErrorCode::EmptyPalette, "node " + std::to_string(core.id()) + " has an empty palette");
    }
    const std::optional<Color> pick = join ? std::optional<Color>(*core.palette.begin()) : std::nullopt;
    each(in, [&](NodeId from, const Part& p) { take_color(core, from, p); });
    if (pick) res.output = VertexColor{*pick};
  }
};

// ---- Linial-style reduction ------------------------------------------------

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  for (std::uint64_t f = 2; f * f <= q; ++f) {
    if (q % f == 0) return false;
  }
  return true;
}

// q^e >= m without overflow.
bool power_reaches(std::uint64_t q, int e, std::uint64_t m) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < e; ++i) {
    acc *= q;
    if (acc >= m) return true;
  }
  return acc >= m;
}

struct PolyStep {
  std::uint64_t q = 0;
  int k = 0;
};

// Smallest q*q over primes q > delta*k with q^(k+1) >= m.
std::optional<PolyStep> best_step(std::size_t delta, std::uint64_t m) {
  std::optional<PolyStep> best;
  for (int k = 1; k < 64; ++k) {
    const std::uint64_t floor_q = static_cast<std::uint64_t>(delta) * static_cast<std::uint64_t>(k) + 1;
    if (best && floor_q >= best->q) break;
    std::uint64_t q = std::max<std::uint64_t>(floor_q, 2);
    while (!is_prime(q) || !power_reaches(q, k + 1, m)) {
      if (!power_reaches(q, k + 1, m)) {
        // jump close to the (k+1)-th root before scanning primes
        std::uint64_t lo = q, hi = std::max<std::uint64_t>(q, 2);
        while (!power_reaches(hi, k + 1, m)) hi *= 2;
        while (lo < hi) {
          const std::uint64_t mid = lo + (hi - lo) / 2;
          if (power_reaches(mid, k + 1, m)) hi = mid;
          else lo = mid + 1;
        }
        q = lo;
        continue;
      }
      ++q;
    }
    if (!best || q < best->q) best = PolyStep{q, k};
  }
  return best;
}

struct LinialPlan {
  std::vector<PolyStep> steps;
  std::vector<std::uint64_t> palettes;  // palettes[0] = d
};

LinialPlan linial_plan(std::size_t delta, std::uint64_t d) {
  LinialPlan plan;
  std::uint64_t m = std::max<std::uint64_t>(d, 1);
  plan.palettes.push_back(m);
  for (;;) {
    const auto s = best_step(delta, m);
    if (!s || s->q >= (std::uint64_t{1} << 32) || s->q * s->q >= m) break;
    plan.steps.push_back(*s);
    m = s->q * s->q;
    plan.palettes.push_back(m);
  }
  return plan;
}

std::uint64_t poly_eval(std::uint64_t color, const PolyStep& s, std::uint64_t x) {
  // digits of color in base q are the coefficients, lowest first
  std::vector<std::uint64_t> coef;
  for (int j = 0; j <= s.k; ++j) {
    coef.push_back(color % s.q);
    color /= s.q;
  }
  std::uint64_t acc = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = (acc * x + *it) % s.q;
  return acc;
}

class Linial : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r > rounds(core)) return;
    send_all(out, core.active, kColor, {current(core)});
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult&) override {
    const int total = rounds(core);
    if (r > total) {
      core.color = static_cast<Color>(current(core) + 1);
      return;
    }
    const std::size_t delta = core.view.need_delta();
    const LinialPlan& plan = plan_for(core);
    const auto own = static_cast<std::uint64_t>(current(core));
    std::vector<std::uint64_t> seen;
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag != kColor) return;
      seen.push_back(static_cast<std::uint64_t>(p.data.at(0)));
      if (r == total) core.nb_color[from] = static_cast<Color>(p.data.at(0) + 1);
    });

    std::uint64_t next = own;
    const int steps = static_cast<int>(plan.steps.size());
    if (r <= steps) {
      const PolyStep& s = plan.steps[static_cast<std::size_t>(r - 1)];
      for (std::uint64_t x = 0; x < s.q; ++x) {
        const std::uint64_t v = poly_eval(own, s, x);
        const bool free = std::none_of(seen.begin(), seen.end(),
                                       [&](std::uint64_t c) { return poly_eval(c, s, x) == v; });
        if (free) {
          next = x * s.q + v;
          break;
        }
      }
    } else if (r < total) {
      const std::uint64_t target = plan.palettes.back() - 1 - static_cast<std::uint64_t>(r - steps - 1);
      if (own == target) {
        std::uint64_t c = 0;
        while (std::find(seen.begin(), seen.end(), c) != seen.end()) ++c;
        if (c > delta) throw Error(ErrorCode::EmptyPalette, "no free color below Δ+1");
        next = c;
      }
    }
    core.color = static_cast<Color>(next + 1);
  }

 private:
  const LinialPlan& plan_for(const NodeCore& core) {
    if (!plan_) plan_ = linial_plan(core.view.need_delta(), core.view.need_d());
    return *plan_;
  }
  static int rounds(const NodeCore& core) { return linial_rounds(core.view.need_delta(), core.view.need_d()); }
  static std::int64_t current(const NodeCore& core) {
    return core.color ? *core.color - 1 : static_cast<std::int64_t>(core.id()) - 1;
  }

  std::optional<LinialPlan> plan_;
};

// ---- edge coloring ---------------------------------------------------------

const EdgeColors& predicted_edges(const NodeCore& core) {
  if (!core.view.prediction) throw Error(ErrorCode::InvalidArgument, "node has no prediction");
  const auto* e = std::get_if<EdgeColors>(&*core.view.prediction);
  if (!e) throw Error(ErrorCode::InvalidArgument, "prediction is not an edge coloring");
  return *e;
}

void color_edge(NodeCore& core, NodeId u, Color c, RoundResult& res) {
  core.edge_color[u] = c;
  core.edge_palette.erase(u);
  for (auto& [v, pal] : core.edge_palette) pal.erase(c);
  res.edge_outputs.emplace_back(u, c);
}

std::vector<std::int64_t> used_colors(const NodeCore& core) {
  std::vector<std::int64_t> out;
  for (const auto& [u, c] : core.edge_color) out.push_back(c);
  return out;
}

// Used colors and the other uncolored-edge neighbors, along every uncolored edge.
class EcExchange : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int, Mail& out) const override {
    const auto used = used_colors(core);
    for (const auto& [u, pal] : core.edge_palette) {
      send(out, u, kUsedColors, used);
      std::vector<std::int64_t> others;
      for (const auto& [v, pv] : core.edge_palette) {
        if (v != u) others.push_back(static_cast<std::int64_t>(v));
      }
      send(out, u, kTwoHop, others);
    }
  }

  void process(NodeCore& core, int, const Mailbag& in, RoundResult&) override {
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag == kUsedColors) {
        auto it = core.edge_palette.find(from);
        if (it == core.edge_palette.end()) return;
        for (auto c : p.data) it->second.erase(static_cast<Color>(c));
      } else if (p.tag == kTwoHop) {
        auto& hop = core.two_hop[from];
        hop.clear();
        for (auto v : p.data) hop.insert(static_cast<NodeId>(v));
      }
    });
    core.forward.clear();
  }
};

class EcPrologue : public Stage {
 public:
  explicit EcPrologue(std::uint32_t ch) : Stage(ch), exchange_(ch) {}

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r == 1) {
      for (const auto& [u, c] : unique_predictions(core)) send(out, u, kEdgePred, {c});
    } else {
      exchange_.compose(core, r, out);
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r != 1) {
      exchange_.process(core, r, in, res);
      return;
    }
    const auto mine = unique_predictions(core);
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag != kEdgePred) return;
      auto it = mine.find(from);
      if (it != mine.end() && it->second == p.data.at(0)) color_edge(core, from, it->second, res);
    });
  }

 private:
  static std::map<NodeId, Color> unique_predictions(const NodeCore& core) {
    const auto delta = static_cast<Color>(core.view.need_delta());
    std::map<Color, int> count;
    const auto& pred = predicted_edges(core).by_neighbor;
    for (const auto& [u, c] : pred) ++count[c];
    std::map<NodeId, Color> out;
    for (const auto& [u, c] : pred) {
      if (count[c] == 1 && c >= 1 && c <= 2 * delta - 1 && core.edge_palette.contains(u)) out[u] = c;
    }
    return out;
  }

  EcExchange exchange_;
};

class EcUniform : public Stage {
 public:
  using Stage::Stage;

  void compose(const NodeCore& core, int r, Mail& out) const override {
    if (r % 2 == 1) {
      for (const auto& [u, c] : picks(core)) send(out, u, kEdgeColor, {c});
      return;
    }
    for (const auto& [c, w] : core.forward) {
      for (const auto& [u, pal] : core.edge_palette) {
        send(out, u, kEdgeDone, {c, static_cast<std::int64_t>(w)});
      }
    }
  }

  void process(NodeCore& core, int r, const Mailbag& in, RoundResult& res) override {
    if (r % 2 == 1) {
      const auto mine = picks(core);
      for (const auto& [u, c] : mine) color_edge(core, u, c, res);
      each(in, [&](NodeId from, const Part& p) {
        if (p.tag != kEdgeColor || !core.edge_palette.contains(from)) return;
        const auto c = static_cast<Color>(p.data.at(0));
        color_edge(core, from, c, res);
        core.forward.emplace_back(c, from);
      });
      return;
    }
    core.forward.clear();
    each(in, [&](NodeId from, const Part& p) {
      if (p.tag != kEdgeDone) return;
      auto it = core.edge_palette.find(from);
      if (it != core.edge_palette.end()) it->second.erase(static_cast<Color>(p.data.at(0)));
      auto hop = core.two_hop.find(from);
      if (hop != core.two_hop.end()) hop->second.erase(static_cast<NodeId>(p.data.at(1)));
    });
  }

 private:
  static bool two_hop_max(const NodeCore& core) {
    if (core.edge_palette.empty()) return false;
    for (const auto& [u, pal] : core.edge_palette) {
      if (u > core.id()) return false;
      auto hop = core.two_hop.find(u);
      if (hop == core.two_hop.end()) continue;
      for (NodeId w : hop->second) {
        if (w > core.id()) return false;
      }
    }
    return true;
  }

  // Smallest free palette colors, one edge at a time in neighbor order.
  static std::vector<std::pair<NodeId, Color>> picks(const NodeCore& core) {
    std::vector<std::pair<NodeId, Color>> out;
    if (!two_hop_max(core)) return out;
    std::set<Color> taken;
    for (const auto& [u, pal] : core.edge_palette) {
      auto it = std::find_if(pal.begin(), pal.end(), [&](Color c) { return !taken.contains(c); });
      if (it == pal.end()) {
        throw Error(ErrorCode::EmptyPalette, "edge " + std::to_string(core.id()) + "-" + std::to_string(u) +
                                                 " has an empty palette");
      }
      taken.insert(*it);
      out.emplace_back(u, *it);
    }
    return out;
  }
};

}  // namespace

std::unique_ptr<Stage> make_mm_prologue(bool unmatched_rule, std::uint32_t channel) {
  return std::make_unique<MmPrologue>(unmatched_rule, channel);
}
std::unique_ptr<Stage> make_mm_uniform(std::uint32_t channel) { return std::make_unique<MmUniform>(channel); }
std::unique_ptr<Stage> make_mm_cleanup(std::uint32_t channel) { return std::make_unique<MmCleanup>(channel); }

std::unique_ptr<Stage> make_vc_prologue(bool by_identifier, std::uint32_t channel) {
  return std::make_unique<VcPrologue>(by_identifier, channel);
}
std::unique_ptr<Stage> make_vc_uniform(std::uint32_t channel) { return std::make_unique<VcUniform>(channel); }
std::unique_ptr<Stage> make_linial(std::uint32_t channel) { return std::make_unique<Linial>(channel); }

int linial_rounds(std::size_t delta, std::uint64_t d) {
  const LinialPlan plan = linial_plan(delta, d);
  const std::uint64_t m = plan.palettes.back();
  const std::uint64_t descent = m > delta + 1 ? m - (delta + 1) : 0;
  return static_cast<int>(plan.steps.size() + descent) + 1;
}

std::vector<std::uint64_t> linial_palettes(std::size_t delta, std::uint64_t d) {
  return linial_plan(delta, d).palettes;
}

std::unique_ptr<Stage> make_ec_prologue(std::uint32_t channel) { return std::make_unique<EcPrologue>(channel); }
std::unique_ptr<Stage> make_ec_uniform(std::uint32_t channel) { return std::make_unique<EcUniform>(channel); }
std::unique_ptr<Stage> make_ec_cleanup(std::uint32_t channel) { return std::make_unique<EcExchange>(channel); }

}  // namespace predsync

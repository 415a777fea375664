#include "predsync/engine.hpp"

#include <algorithm>
#include <exception>

#include "predsync/error.hpp"

namespace predsync {

std::string Message::to_string() const {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ';';
    out += std::to_string(p.channel) + '.' + std::to_string(p.tag);
    if (!p.data.empty()) {
      out += '(';
      for (std::size_t i = 0; i < p.data.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(p.data[i]);
      }
      out += ')';
    }
  }
  return out;
}

std::size_t NodeView::need_n() const {
  if (!n) throw Error(ErrorCode::Config, "program needs n but nodes do not know it");
  return *n;
}

std::uint64_t NodeView::need_d() const {
  if (!d) throw Error(ErrorCode::Config, "program needs d but nodes do not know it");
  return *d;
}

std::size_t NodeView::need_delta() const {
  if (!delta) throw Error(ErrorCode::Config, "program needs the maximum degree but nodes do not know it");
  return *delta;
}

Assignment Outcome::outputs() const {
  Assignment out;
  for (const auto& [id, r] : nodes) {
    if (r.complete && r.output) out.emplace(id, *r.output);
  }
  return out;
}

namespace {

// Runs body(k) for k in [0, count), serially or across OpenMP threads. The
// exception thrown for the smallest k is rethrown, so both policies report
// the same error.
template <typename Body>
void for_each_index(Policy policy, std::size_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  if (policy == Policy::Parallel) {
    const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t k = 0; k < total; ++k) {
      try {
        body(static_cast<std::size_t>(k));
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class Simulation {
 public:
  Simulation(const Graph& g, const RootedTree* tree, const ProgramFactory& factory,
             const Assignment* predictions, const SimulationOptions& opts)
      : g_(g), factory_(factory), opts_(opts) {
    const std::size_t n = g.n();
    programs_.resize(n);
    active_.assign(n, 0);
    outputs_.resize(n);
    stored_.resize(n);
    term_round_.resize(n);
    trace_.resize(n);

    if (factory.needs_tree && tree == nullptr) {
      throw Error(ErrorCode::InvalidArgument, factory.name + " needs a rooted tree");
    }
    if (factory.needs_predictions && predictions == nullptr) {
      throw Error(ErrorCode::InvalidArgument, factory.name + " needs predictions");
    }

    const GraphParams params =
        opts.knowledge_override.value_or(GraphParams{g.n(), g.d(), g.max_degree()});

    for (std::size_t i = 0; i < n; ++i) {
      const NodeId id = g.id_at(i);
      if (auto it = opts.prior.find(id); it != opts.prior.end()) {
        outputs_[i] = it->second;
        term_round_[i] = 0;
        continue;
      }
      if (factory.kind == ProblemKind::EdgeColoring && g.neighbors_at(i).empty()) {
        outputs_[i] = EdgeColors{};
        term_round_[i] = 0;
        continue;
      }
      NodeView view;
      view.id = id;
      auto nb = g.neighbors_at(i);
      view.neighbors.assign(nb.begin(), nb.end());
      if (factory.knowledge.n) view.n = params.n;
      if (factory.knowledge.d) view.d = params.d;
      if (factory.knowledge.delta) view.delta = params.delta;
      if (tree) view.parent = tree->parent_at(i);
      if (predictions) {
        auto it = predictions->find(id);
        if (it != predictions->end()) {
          view.prediction = it->second;
        } else if (factory.needs_predictions) {
          throw Error(ErrorCode::InvalidArgument, "no prediction for node " + std::to_string(id));
        }
      }
      programs_[i] = factory.make(view);
      active_[i] = 1;
    }
    max_rounds_ = opts.max_rounds > 0 ? opts.max_rounds : static_cast<int>(4 * n + 20);
  }

  Outcome run() {
    int round = 0;
    std::vector<std::size_t> live;
    for (;;) {
      live.clear();
      for (std::size_t i = 0; i < active_.size(); ++i) {
        if (active_[i]) live.push_back(i);
      }
      if (live.empty()) break;
      ++round;
      if (round > max_rounds_) {
        throw Error(ErrorCode::NonTermination, factory_.name + ": " + std::to_string(live.size()) +
                                                   " nodes still active after " +
                                                   std::to_string(max_rounds_) + " rounds");
      }
      step(round, live);
      notify(round);
    }
    return finish(round);
  }

 private:
  void step(int round, const std::vector<std::size_t>& live) {
    const std::size_t n = g_.n();
    std::vector<Outbox> outboxes(live.size());
    for_each_index(opts_.policy, live.size(), [&](std::size_t k) {
      outboxes[k] = programs_[live[k]]->compose(round);
      std::sort(outboxes[k].begin(), outboxes[k].end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    });

    std::vector<Inbox> inboxes(n);
    for (std::size_t k = 0; k < live.size(); ++k) {
      const std::size_t i = live[k];
      const NodeId from = g_.id_at(i);
      NodeId last = 0;
      for (auto& [to, msg] : outboxes[k]) {
        if (!g_.contains(to) || !g_.adjacent(from, to)) {
          throw Error(ErrorCode::ProtocolViolation,
                      "node " + std::to_string(from) + " sent to non-neighbor " + std::to_string(to));
        }
        if (to == last) {
          throw Error(ErrorCode::ProtocolViolation,
                      "node " + std::to_string(from) + " sent two messages to " + std::to_string(to));
        }
        last = to;
        if (opts_.trace) {
          trace_[i].push_back(std::to_string(round) + ',' + std::to_string(from) + ",SEND," +
                              std::to_string(to) + ':' + msg.to_string());
        }
        const std::size_t j = g_.index_of(to);
        if (active_[j]) inboxes[j].emplace_back(from, std::move(msg));
      }
    }

    std::vector<RoundResult> results(live.size());
    for_each_index(opts_.policy, live.size(), [&](std::size_t k) {
      programs_[live[k]]->process(round, inboxes[live[k]], results[k]);
    });

    for (std::size_t k = 0; k < live.size(); ++k) apply(round, live[k], results[k]);
  }

  void apply(int round, std::size_t i, RoundResult& res) {
    const NodeId id = g_.id_at(i);
    auto violation = [&](const std::string& what) {
      return Error(ErrorCode::ProtocolViolation, "node " + std::to_string(id) + ' ' + what);
    };
    bool complete = false;
    if (factory_.kind == ProblemKind::EdgeColoring) {
      if (res.output) throw violation("assigned a whole-node output in an edge problem");
      if (!res.edge_outputs.empty()) {
        if (!outputs_[i]) outputs_[i] = EdgeColors{};
        auto& mine = std::get<EdgeColors>(*outputs_[i]).by_neighbor;
        EdgeColors fresh;
        for (auto [nb, c] : res.edge_outputs) {
          if (!g_.contains(nb) || !g_.adjacent(id, nb)) throw violation("colored a non-incident edge");
          if (!mine.emplace(nb, c).second) {
            throw violation("re-assigned the color of edge to " + std::to_string(nb));
          }
          fresh.by_neighbor.emplace(nb, c);
        }
        record_output(round, i, fresh);
      }
      complete = outputs_[i] &&
                 std::get<EdgeColors>(*outputs_[i]).by_neighbor.size() == g_.neighbors_at(i).size();
    } else {
      if (!res.edge_outputs.empty()) throw violation("assigned an edge output in a node problem");
      if (res.output) {
        if (outputs_[i]) throw violation("re-assigned its output");
        if (kind_of(*res.output) != factory_.kind) throw violation("assigned an output of the wrong kind");
        outputs_[i] = *res.output;
        record_output(round, i, *res.output);
      }
      complete = outputs_[i].has_value();
    }

    auto crash = opts_.crash_after.find(id);
    const bool crashed = crash != opts_.crash_after.end() && crash->second <= round;
    if (complete || res.terminate || crashed) {
      active_[i] = 0;
      term_round_[i] = round;
      if (opts_.trace) {
        trace_[i].push_back(std::to_string(round) + ',' + std::to_string(id) + ",TERMINATE," +
                            (complete ? "complete" : "incomplete"));
      }
    }
  }

  void record_output(int round, std::size_t i, const OutputValue& v) {
    const NodeId id = g_.id_at(i);
    events_.push_back({round, id, v});
    if (opts_.trace) {
      trace_[i].push_back(std::to_string(round) + ',' + std::to_string(id) + ",OUTPUT," +
                          to_string(v));
    }
  }

  void notify(int round) {
    for (std::size_t i = 0; i < programs_.size(); ++i) {
      if (programs_[i]) stored_[i] = programs_[i]->stored_color();
    }
    if (opts_.trace) {
      for (auto& lines : trace_) {
        for (auto& l : lines) trace_out_.push_back(std::move(l));
        lines.clear();
      }
    }
    if (opts_.observer) {
      RoundSnapshot snap;
      snap.round = round;
      snap.graph = &g_;
      snap.active = active_;
      snap.outputs = outputs_;
      snap.stored = stored_;
      opts_.observer(snap);
    }
  }

  Outcome finish(int rounds) {
    Outcome out;
    out.total_rounds = 0;
    for (std::size_t i = 0; i < g_.n(); ++i) {
      NodeResult r;
      r.term_round = term_round_[i];
      r.output = outputs_[i];
      r.stored = programs_[i] ? programs_[i]->stored_color() : std::nullopt;
      if (factory_.kind == ProblemKind::EdgeColoring) {
        r.complete = outputs_[i] &&
                     std::get<EdgeColors>(*outputs_[i]).by_neighbor.size() == g_.neighbors_at(i).size();
      } else {
        r.complete = outputs_[i].has_value();
      }
      if (r.term_round) out.total_rounds = std::max(out.total_rounds, *r.term_round);
      out.nodes.emplace(g_.id_at(i), std::move(r));
    }
    (void)rounds;
    out.events = std::move(events_);
    out.trace = std::move(trace_out_);
    return out;
  }

  const Graph& g_;
  const ProgramFactory& factory_;
  const SimulationOptions& opts_;
  int max_rounds_ = 0;
  std::vector<std::unique_ptr<NodeProgram>> programs_;
  std::vector<char> active_;
  std::vector<std::optional<OutputValue>> outputs_;
  std::vector<std::optional<Color>> stored_;
  std::vector<std::optional<int>> term_round_;
  std::vector<std::vector<std::string>> trace_;
  std::vector<std::string> trace_out_;
  std::vector<OutputEvent> events_;
};

}  // namespace

Outcome simulate(const Graph& g, const ProgramFactory& factory, const Assignment& predictions,
                 const SimulationOptions& options) {
  return Simulation(g, nullptr, factory, &predictions, options).run();
}

Outcome simulate(const Graph& g, const ProgramFactory& factory, NoPredictions,
                 const SimulationOptions& options) {
  return Simulation(g, nullptr, factory, nullptr, options).run();
}

Outcome simulate(const RootedTree& t, const ProgramFactory& factory, const Assignment& predictions,
                 const SimulationOptions& options) {
  return Simulation(t.graph(), &t, factory, &predictions, options).run();
}

Outcome simulate(const RootedTree& t, const ProgramFactory& factory, NoPredictions,
                 const SimulationOptions& options) {
  return Simulation(t.graph(), &t, factory, nullptr, options).run();
}

std::vector<NodeId> snapshot_active(const Outcome& outcome, int round) {
  if (round < 0 || round > outcome.total_rounds) {
    throw Error(ErrorCode::RoundOutOfRange, "round " + std::to_string(round) + " outside 0.." +
                                                std::to_string(outcome.total_rounds));
  }
  std::vector<NodeId> out;
  for (const auto& [id, r] : outcome.nodes) {
    if (!r.term_round || *r.term_round > round) out.push_back(id);
  }
  return out;
}

}  // namespace predsync

#include "predsync/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>

#include "predsync/error.hpp"

namespace predsync {

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaskBits = 64;

std::vector<Mask> adjacency_masks(const Graph& g) {
  std::vector<Mask> adj(g.n(), 0);
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (auto j : g.neighbor_indices(i)) adj[i] |= Mask{1} << j;
  }
  return adj;
}

class MaxIndependentSet {
 public:
  explicit MaxIndependentSet(std::vector<Mask> adj) : adj_(std::move(adj)) {}

  std::size_t solve() {
    const Mask all = adj_.size() == kMaskBits ? ~Mask{0} : (Mask{1} << adj_.size()) - 1;
    best_ = 0;
    branch(all, 0);
    return best_;
  }

 private:
  void branch(Mask live, std::size_t taken) {
    const auto remaining = static_cast<std::size_t>(std::popcount(live));
    if (taken + remaining <= best_) return;
    if (live == 0) {
      best_ = taken;
      return;
    }
    int pivot = -1;
    int pivot_degree = -1;
    for (Mask m = live; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      const int deg = std::popcount(adj_[v] & live);
      if (deg > pivot_degree) {
        pivot = v;
        pivot_degree = deg;
      }
    }
    if (pivot_degree == 0) {
      best_ = std::max(best_, taken + remaining);
      return;
    }
    const Mask bit = Mask{1} << pivot;
    branch(live & ~(adj_[pivot] | bit), taken + 1);
    branch(live & ~bit, taken);
  }

  std::vector<Mask> adj_;
  std::size_t best_ = 0;
};

}  // namespace

std::optional<std::size_t> diameter(const Graph& g) {
  const std::size_t n = g.n();
  std::size_t best = 0;
  std::vector<std::size_t> dist(n);
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnseen);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    std::size_t seen = 1;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto v : g.neighbor_indices(u)) {
        if (dist[v] == kUnseen) {
          dist[v] = dist[u] + 1;
          best = std::max(best, dist[v]);
          ++seen;
          queue.push_back(v);
        }
      }
    }
    if (seen != n) return std::nullopt;
  }
  return best;
}

std::size_t alpha(const Graph& g, std::size_t cap) {
  cap = std::min(cap, kMaskBits);
  std::size_t total = 0;
  for (const auto& comp : components(g)) {
    if (comp.n() > cap) {
      throw Error(ErrorCode::CapExceeded,
                  "component of " + std::to_string(comp.n()) + " nodes exceeds exact-solve cap " +
                      std::to_string(cap));
    }
    total += MaxIndependentSet(adjacency_masks(comp)).solve();
  }
  return total;
}

std::size_t tau(const Graph& g, std::size_t cap) { return g.n() - alpha(g, cap); }

std::vector<std::vector<NodeId>> enumerate_mis(const Graph& g, std::size_t cap) {
  cap = std::min(cap, kMaskBits);
  if (g.n() > cap) {
    throw Error(ErrorCode::CapExceeded,
                std::to_string(g.n()) + " nodes exceeds enumeration cap " + std::to_string(cap));
  }
  const std::size_t n = g.n();
  if (n == 0) return {{}};
  const Mask all = n == kMaskBits ? ~Mask{0} : (Mask{1} << n) - 1;
  const auto adj = adjacency_masks(g);
  // Maximal independent sets are the maximal cliques of the complement;
  // Bron-Kerbosch with pivoting over complement adjacency.
  std::vector<Mask> non_adj(n);
  for (std::size_t v = 0; v < n; ++v) non_adj[v] = all & ~adj[v] & ~(Mask{1} << v);

  std::vector<Mask> found;
  auto recurse = [&](auto&& self, Mask r, Mask p, Mask x) -> void {
    if (p == 0 && x == 0) {
      found.push_back(r);
      return;
    }
    int pivot = std::countr_zero(p | x);
    int pivot_score = -1;
    for (Mask m = p | x; m; m &= m - 1) {
      const int u = std::countr_zero(m);
      const int score = std::popcount(p & non_adj[u]);
      if (score > pivot_score) {
        pivot = u;
        pivot_score = score;
      }
    }
    for (Mask m = p & ~non_adj[pivot]; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      const Mask bit = Mask{1} << v;
      self(self, r | bit, p & non_adj[v], x & non_adj[v]);
      p &= ~bit;
      x |= bit;
    }
  };
  recurse(recurse, 0, all, 0);

  std::vector<std::vector<NodeId>> out;
  out.reserve(found.size());
  for (Mask m : found) {
    std::vector<NodeId> set;
    for (; m; m &= m - 1) set.push_back(g.id_at(static_cast<std::size_t>(std::countr_zero(m))));
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace predsync

#include "predsync/generators.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "predsync/error.hpp"
#include "predsync/rng.hpp"

namespace predsync {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::Line: return "LINE";
    case Family::WheelFk: return "WHEEL_FK";
    case Family::Grid: return "GRID";
    case Family::Random: return "RANDOM";
    case Family::Tree: return "TREE";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) noexcept {
  if (text == "LINE") return Family::Line;
  if (text == "WHEEL_FK") return Family::WheelFk;
  if (text == "GRID") return Family::Grid;
  if (text == "RANDOM") return Family::Random;
  if (text == "TREE") return Family::Tree;
  return std::nullopt;
}

namespace {

// Shape of a family on positions 0..n-1, before identifiers are assigned.
struct Skeleton {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::optional<std::size_t>> parent;  // trees only
  std::vector<GridCoord> coords;                   // grids only
};

Skeleton line(std::size_t n) {
  Skeleton s{n, {}, {}, {}};
  for (std::size_t i = 0; i + 1 < n; ++i) s.edges.emplace_back(i, i + 1);
  return s;
}

Skeleton wheel(std::size_t k) {
  // 0 = hub, 1..k spokes, k+1..2k rim.
  Skeleton s{2 * k + 1, {}, {}, {}};
  for (std::size_t i = 0; i < k; ++i) {
    s.edges.emplace_back(0, 1 + i);
    s.edges.emplace_back(1 + i, k + 1 + i);
    s.edges.emplace_back(k + 1 + i, k + 1 + (i + 1) % k);
  }
  return s;
}

Skeleton grid(std::size_t rows, std::size_t cols) {
  Skeleton s{rows * cols, {}, {}, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t at = r * cols + c;
      s.coords.push_back({r, c});
      if (c + 1 < cols) s.edges.emplace_back(at, at + 1);
      if (r + 1 < rows) s.edges.emplace_back(at, at + cols);
    }
  }
  return s;
}

Skeleton random_graph(std::size_t n, double p, bool connected, SplitMix64& rng) {
  Skeleton s{n, {}, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) s.edges.emplace_back(i, j);
    }
  }
  if (connected && n > 1) {
    // Chain the components: link a seeded member of each component to a
    // seeded member of the component containing position 0.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [a, b] : s.edges) parent[find(a)] = find(b);
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> comps;
    for (auto& g : groups) {
      if (!g.empty()) comps.push_back(std::move(g));
    }
    std::sort(comps.begin(), comps.end());
    for (std::size_t c = 1; c < comps.size(); ++c) {
      const auto& prev = comps[rng.below(c)];
      const auto& cur = comps[c];
      s.edges.emplace_back(prev[rng.below(prev.size())], cur[rng.below(cur.size())]);
    }
  }
  return s;
}

Skeleton tree(std::size_t n, TreeShape shape, SplitMix64& rng) {
  Skeleton s{n, {}, {}, {}};
  s.parent.assign(n, std::nullopt);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = shape == TreeShape::Path ? i - 1 : rng.below(i);
    s.parent[i] = p;
    s.edges.emplace_back(p, i);
  }
  return s;
}

std::vector<NodeId> assign_ids(std::size_t n, std::uint64_t d, IdScheme scheme, SplitMix64& rng) {
  std::vector<NodeId> ids(n);
  if (scheme == IdScheme::Increasing) {
    std::iota(ids.begin(), ids.end(), NodeId{1});
    return ids;
  }
  if (d == n) {
    std::iota(ids.begin(), ids.end(), NodeId{1});
    rng.shuffle(ids);
    return ids;
  }
  std::unordered_set<NodeId> used;
  for (auto& id : ids) {
    do {
      id = 1 + rng.below(d);
    } while (!used.insert(id).second);
  }
  return ids;
}

}  // namespace

Instance generate(Family family, const GenParams& params, IdScheme scheme, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SplitMix64 shape_rng = rng.split();
  SplitMix64 id_rng = rng.split();

  Skeleton s;
  switch (family) {
    case Family::Line:
      if (params.n < 1) throw Error(ErrorCode::InvalidArgument, "LINE needs n >= 1");
      s = line(params.n);
      break;
    case Family::WheelFk:
      if (params.k < 3) throw Error(ErrorCode::InvalidArgument, "WHEEL_FK needs k >= 3");
      s = wheel(params.k);
      break;
    case Family::Grid:
      if (params.rows < 1 || params.cols < 1) throw Error(ErrorCode::InvalidArgument, "GRID needs positive sides");
      s = grid(params.rows, params.cols);
      break;
    case Family::Random:
      if (params.n < 1) throw Error(ErrorCode::InvalidArgument, "RANDOM needs n >= 1");
      if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "edge probability outside [0,1]");
      }
      s = random_graph(params.n, params.p, params.connected, shape_rng);
      break;
    case Family::Tree:
      if (params.n < 1) throw Error(ErrorCode::InvalidArgument, "TREE needs n >= 1");
      s = tree(params.n, params.shape, shape_rng);
      break;
  }

  const std::uint64_t d = params.d == 0 ? s.n : params.d;
  if (d < s.n) throw Error(ErrorCode::InvalidArgument, "identifier domain smaller than n");
  const auto ids = assign_ids(s.n, d, scheme, id_rng);

  std::vector<Edge> edges;
  edges.reserve(s.edges.size());
  for (auto [a, b] : s.edges) edges.emplace_back(ids[a], ids[b]);

  Instance inst;
  inst.family = family;
  inst.graph = Graph(d, ids, edges);
  if (family == Family::Tree) {
    std::vector<NodeId> parent(s.n, kRoot);
    for (std::size_t pos = 0; pos < s.n; ++pos) {
      if (s.parent[pos]) parent[inst.graph.index_of(ids[pos])] = ids[*s.parent[pos]];
    }
    inst.tree.emplace(inst.graph, std::move(parent));
  }
  for (std::size_t pos = 0; pos < s.coords.size(); ++pos) inst.coords[ids[pos]] = s.coords[pos];
  return inst;
}

}  // namespace predsync

#include "predsync/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "predsync/error.hpp"

namespace predsync {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> fields;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) line.fields.push_back(raw.substr(start, i - start));
    }
    if (!line.fields.empty()) out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void fail(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

std::uint64_t number(const Line& line, std::string_view field) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(ErrorCode::MalformedLine, line.number, "expected a non-negative integer, got '" + std::string(field) + "'");
  }
  return v;
}

std::int64_t signed_number(const Line& line, std::string_view field) {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    fail(ErrorCode::MalformedLine, line.number, "expected an integer, got '" + std::string(field) + "'");
  }
  return v;
}

void expect_fields(const Line& line, std::size_t count, const char* shape) {
  if (line.fields.size() != count) fail(ErrorCode::MalformedLine, line.number, std::string("expected '") + shape + "'");
}

}  // namespace

GraphFile read_graph(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::MalformedLine, "line 1: missing header 'n d'");
  const Line& header = lines.front();
  expect_fields(header, 2, "n d");
  const std::uint64_t n = number(header, header.fields[0]);
  const std::uint64_t d = number(header, header.fields[1]);
  if (n > d) fail(ErrorCode::IdOutOfRange, header.number, "n exceeds the identifier domain d");

  std::vector<NodeId> ids;
  std::set<NodeId> known;
  std::vector<Edge> edges;
  std::map<NodeId, NodeId> parent;
  bool explicit_ids = false;

  auto check_id = [&](const Line& line, NodeId id) {
    if (id < 1 || id > d) {
      fail(ErrorCode::IdOutOfRange, line.number, "identifier " + std::to_string(id) + " not in {1.." + std::to_string(d) + "}");
    }
  };
  auto require_known = [&](const Line& line, NodeId id) {
    check_id(line, id);
    if (!known.contains(id)) fail(ErrorCode::MalformedLine, line.number, "unknown node " + std::to_string(id));
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.fields[0] == "V") {
      if (explicit_ids || !edges.empty() || !parent.empty()) {
        fail(ErrorCode::MalformedLine, line.number, "node line must come once, right after the header");
      }
      explicit_ids = true;
      for (std::size_t f = 1; f < line.fields.size(); ++f) {
        const NodeId id = number(line, line.fields[f]);
        check_id(line, id);
        if (!known.insert(id).second) fail(ErrorCode::DuplicateId, line.number, "identifier " + std::to_string(id) + " repeated");
        ids.push_back(id);
      }
      if (ids.size() != n) fail(ErrorCode::MalformedLine, line.number, "node line lists " + std::to_string(ids.size()) + " identifiers, header says " + std::to_string(n));
      continue;
    }
    if (!explicit_ids && ids.empty()) {
      for (NodeId id = 1; id <= n; ++id) ids.push_back(id);
      known.insert(ids.begin(), ids.end());
    }
    if (line.fields[0] == "P") {
      expect_fields(line, 3, "P u p");
      const NodeId u = number(line, line.fields[1]);
      const NodeId p = number(line, line.fields[2]);
      require_known(line, u);
      if (p != kRoot) require_known(line, p);
      if (!parent.emplace(u, p).second) fail(ErrorCode::MalformedLine, line.number, "parent of " + std::to_string(u) + " given twice");
      continue;
    }
    expect_fields(line, 2, "u v");
    const NodeId u = number(line, line.fields[0]);
    const NodeId v = number(line, line.fields[1]);
    if (u == v) fail(ErrorCode::SelfLoop, line.number, "edge " + std::to_string(u) + " " + std::to_string(v));
    require_known(line, u);
    require_known(line, v);
    edges.emplace_back(u, v);
  }
  if (ids.empty()) {
    for (NodeId id = 1; id <= n; ++id) ids.push_back(id);
  }

  GraphFile out{Graph(d, ids, edges), std::nullopt};
  if (!parent.empty()) {
    const Graph& g = out.graph;
    std::vector<NodeId> parents(g.n(), kRoot);
    for (std::size_t i = 0; i < g.n(); ++i) {
      auto it = parent.find(g.id_at(i));
      if (it == parent.end()) {
        throw Error(ErrorCode::MalformedLine, "parent of node " + std::to_string(g.id_at(i)) + " missing");
      }
      parents[i] = it->second;
    }
    out.tree.emplace(g, std::move(parents));
  }
  return out;
}

std::string write_graph(const Graph& g) {
  std::ostringstream os;
  os << g.n() << ' ' << g.d() << '\n';
  bool default_ids = true;
  for (std::size_t i = 0; i < g.n(); ++i) default_ids = default_ids && g.id_at(i) == i + 1;
  if (!default_ids) {
    os << 'V';
    for (NodeId id : g.ids()) os << ' ' << id;
    os << '\n';
  }
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
  return os.str();
}

std::string write_graph(const RootedTree& t) {
  std::string out = write_graph(t.graph());
  std::ostringstream os;
  for (NodeId id : t.graph().ids()) os << "P " << id << ' ' << t.parent(id) << '\n';
  return out + os.str();
}

Assignment read_assignment(std::string_view text, ProblemKind kind, const Graph& g, bool require_symmetric) {
  Assignment out;
  auto node = [&](const Line& line, std::string_view field) {
    const NodeId id = number(line, field);
    if (!g.contains(id)) fail(ErrorCode::MalformedLine, line.number, "unknown node " + std::to_string(id));
    return id;
  };
  for (const Line& line : tokenize(text)) {
    if (kind == ProblemKind::EdgeColoring) {
      expect_fields(line, 3, "node neighbor color");
      const NodeId u = node(line, line.fields[0]);
      const NodeId v = node(line, line.fields[1]);
      const auto c = static_cast<Color>(signed_number(line, line.fields[2]));
      auto [it, fresh] = out.try_emplace(u, EdgeColors{});
      auto& map = std::get<EdgeColors>(it->second).by_neighbor;
      if (!map.emplace(v, c).second) fail(ErrorCode::MalformedLine, line.number, "edge end given twice");
      continue;
    }
    expect_fields(line, 2, "node value");
    const NodeId u = node(line, line.fields[0]);
    OutputValue value;
    switch (kind) {
      case ProblemKind::Mis: {
        const auto b = number(line, line.fields[1]);
        if (b > 1) fail(ErrorCode::MalformedLine, line.number, "MIS value must be 0 or 1");
        value = MisBit{b == 1};
        break;
      }
      case ProblemKind::MaximalMatching:
        if (line.fields[1] == "-") value = MatchPartner{};
        else value = MatchPartner{node(line, line.fields[1])};
        break;
      default:
        value = VertexColor{static_cast<Color>(signed_number(line, line.fields[1]))};
        break;
    }
    if (!out.emplace(u, value).second) fail(ErrorCode::MalformedLine, line.number, "node " + std::to_string(u) + " given twice");
  }
  if (kind == ProblemKind::EdgeColoring && require_symmetric) {
    for (const auto& [u, v] : g.edges()) {
      auto color_at = [&](NodeId a, NodeId b) -> std::optional<Color> {
        auto it = out.find(a);
        if (it == out.end()) return std::nullopt;
        const auto& m = std::get<EdgeColors>(it->second).by_neighbor;
        auto jt = m.find(b);
        return jt == m.end() ? std::nullopt : std::optional<Color>(jt->second);
      };
      const auto cu = color_at(u, v), cv = color_at(v, u);
      if (!cu || !cv || *cu != *cv) {
        throw Error(ErrorCode::InconsistentPrediction,
                    "edge " + std::to_string(u) + "-" + std::to_string(v) + " has disagreeing predictions");
      }
    }
  }
  return out;
}

std::string write_assignment(const Assignment& a) {
  std::ostringstream os;
  for (const auto& [u, value] : a) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, MisBit>) {
            os << u << ' ' << (v.in_set ? 1 : 0) << '\n';
          } else if constexpr (std::is_same_v<T, MatchPartner>) {
            os << u << ' ';
            if (v.partner) os << *v.partner;
            else os << '-';
            os << '\n';
          } else if constexpr (std::is_same_v<T, VertexColor>) {
            os << u << ' ' << v.color << '\n';
          } else {
            for (const auto& [w, c] : v.by_neighbor) os << u << ' ' << w << ' ' << c << '\n';
          }
        },
        value);
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

}  // namespace predsync

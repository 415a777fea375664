#include <charconv>
#include <map>

#include "predsync/error.hpp"
#include "predsync/harness.hpp"

namespace predsync {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) { throw Error(ErrorCode::Config, key + ": " + what); }

template <typename T>
T integer(const std::string& key, std::string_view v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

double real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  bad(key, "expected a number, got '" + v + "'");
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "expected true or false, got '" + v + "'");
}

// "5", "0..10" (inclusive) or "1,4,9".
template <typename T>
std::vector<T> range(const std::string& key, std::string_view v) {
  std::vector<T> out;
  if (const auto dots = v.find(".."); dots != std::string_view::npos) {
    const T lo = integer<T>(key, trim(v.substr(0, dots)));
    const T hi = integer<T>(key, trim(v.substr(dots + 2)));
    for (T x = lo; x <= hi; ++x) out.push_back(x);
  } else {
    while (!v.empty()) {
      const auto comma = v.find(',');
      out.push_back(integer<T>(key, trim(v.substr(0, comma))));
      v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
    }
  }
  if (out.empty()) bad(key, "range is empty");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "graph.family", "graph.n", "graph.k", "graph.rows", "graph.cols", "graph.p", "graph.connected", "graph.ids",
      "graph.d", "graph.seed", "graph.shape", "graph_file", "problem", "predictions", "corrupt.k", "seeds",
      "repetitions", "template", "init", "uniform", "cleanup", "reference", "part1", "part2", "r", "u_budget",
      "phase", "doubling", "r1", "knowledge", "program", "assert", "out", "trace", "outputs_file",
      "sanity.family", "sanity.n"};
  return keys;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!known_keys().contains(key)) bad(key, "unknown key");
    kv[key] = value;
  }

  ExperimentConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("graph.family")) {
    auto f = parse_family(*v);
    if (!f) bad("graph.family", "unknown family '" + *v + "'");
    c.family = *f;
  }
  if (auto v = get("graph.n")) c.gen.n = integer<std::size_t>("graph.n", *v);
  if (auto v = get("graph.k")) c.gen.k = integer<std::size_t>("graph.k", *v);
  if (auto v = get("graph.rows")) c.gen.rows = integer<std::size_t>("graph.rows", *v);
  if (auto v = get("graph.cols")) c.gen.cols = integer<std::size_t>("graph.cols", *v);
  if (auto v = get("graph.p")) c.gen.p = real("graph.p", *v);
  if (auto v = get("graph.connected")) c.gen.connected = boolean("graph.connected", *v);
  if (auto v = get("graph.d")) c.gen.d = integer<std::uint64_t>("graph.d", *v);
  if (auto v = get("graph.seed")) c.graph_seed = integer<std::uint64_t>("graph.seed", *v);
  if (auto v = get("graph.ids")) {
    if (*v == "INCREASING") c.ids = IdScheme::Increasing;
    else if (*v == "SEEDED_PERMUTATION") c.ids = IdScheme::SeededPermutation;
    else bad("graph.ids", "expected INCREASING or SEEDED_PERMUTATION");
  }
  if (auto v = get("graph.shape")) {
    if (*v == "RANDOM") c.gen.shape = TreeShape::RandomRecursive;
    else if (*v == "PATH") c.gen.shape = TreeShape::Path;
    else bad("graph.shape", "expected RANDOM or PATH");
  }
  if (auto v = get("graph_file")) c.graph_file = *v;
  if (auto v = get("problem")) {
    auto p = parse_problem(*v);
    if (!p) bad("problem", "unknown problem '" + *v + "'");
    c.problem = *p;
  }
  if (auto v = get("predictions")) c.predictions = *v;
  if (auto v = get("corrupt.k")) c.ks = range<std::size_t>("corrupt.k", *v);
  if (auto v = get("seeds")) c.seeds = range<std::uint64_t>("seeds", *v);
  if (auto v = get("repetitions")) {
    const auto reps = integer<std::uint64_t>("repetitions", *v);
    if (reps == 0) bad("repetitions", "must be positive");
    if (get("seeds")) bad("repetitions", "give either seeds or repetitions");
    c.seeds.clear();
    for (std::uint64_t s = 1; s <= reps; ++s) c.seeds.push_back(s);
  }
  if (auto v = get("program")) c.program = *v;
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("trace")) c.trace = boolean("trace", *v);
  if (auto v = get("outputs_file")) c.outputs_file = *v;
  if (auto v = get("sanity.family")) c.sanity_family = *v;
  if (auto v = get("sanity.n")) c.sanity_n = integer<std::size_t>("sanity.n", *v);
  if (auto v = get("assert")) {
    c.asserts.clear();
    std::string_view rest = *v;
    static const std::set<std::string> names{"valid", "consistency", "degrading", "robust", "extendable"};
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string name(trim(rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (name == "none" || name.empty()) continue;
      if (name == "all") {
        c.asserts = names;
        continue;
      }
      if (!names.contains(name)) bad("assert", "unknown check '" + name + "'");
      c.asserts.insert(name);
    }
  }

  const bool tree = c.family == Family::Tree;
  if (auto v = get("template")) {
    auto t = parse_template(*v);
    if (!t) bad("template", "expected simple, consecutive, interleaved or parallel");
    TemplateSpec s = default_spec(*t, c.problem, tree);
    auto slot = [&](const char* key, std::string& field) {
      if (auto x = get(key)) field = *x == "none" ? std::string() : *x;
    };
    slot("init", s.init);
    slot("uniform", s.uniform);
    slot("cleanup", s.cleanup);
    slot("reference", s.reference);
    slot("part1", s.part1);
    slot("part2", s.part2);
    slot("r", s.r);
    slot("u_budget", s.u_budget);
    slot("r1", s.r1);
    if (auto x = get("phase")) {
      s.phase = integer<int>("phase", *x);
      if (s.phase < 1) bad("phase", "must be positive");
    }
    if (auto x = get("doubling")) s.doubling = boolean("doubling", *x);
    if (auto x = get("knowledge")) {
      s.knowledge = {};
      std::string_view rest = *x;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto name = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (name == "n") s.knowledge.n = true;
        else if (name == "d") s.knowledge.d = true;
        else if (name == "delta") s.knowledge.delta = true;
        else if (name != "none" && !name.empty()) bad("knowledge", "unknown parameter '" + std::string(name) + "'");
      }
    }
    c.spec = s;
  } else {
    for (const char* key : {"init", "uniform", "cleanup", "reference", "part1", "part2", "r", "u_budget", "phase",
                            "doubling", "r1", "knowledge"}) {
      if (get(key)) bad(key, "only meaningful together with 'template'");
    }
  }
  if (c.spec && !c.program.empty()) bad("program", "give either a template or a program");
  return c;
}

}  // namespace predsync

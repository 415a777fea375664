#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "predsync/graph.hpp"

namespace predsync {

/// Graph text format:
///
///   # comment
///   n d
///   V id id ...      (optional; default identifiers are 1..n)
///   u v              (one line per edge)
///   P u p            (optional parent of u; p = 0 marks the root)
///
/// Errors carry the 1-based line number in their message.
struct GraphFile {
  Graph graph;
  std::optional<RootedTree> tree;
};

GraphFile read_graph(std::string_view text);
std::string write_graph(const Graph& g);
std::string write_graph(const RootedTree& t);

/// One `node value` line per node. MIS: 0/1. Matching: partner or `-`.
/// Vertex coloring: color. Edge coloring: `node neighbor color` per edge end.
/// With `require_symmetric`, both ends of every edge-coloring entry must
/// be present and agree (INCONSISTENT_PREDICTION otherwise).
Assignment read_assignment(std::string_view text, ProblemKind kind, const Graph& g,
                           bool require_symmetric = false);
std::string write_assignment(const Assignment& a);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace predsync

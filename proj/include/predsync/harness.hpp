#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "predsync/engine.hpp"
#include "predsync/generators.hpp"
#include "predsync/templates.hpp"

namespace predsync {

/// Flat `key = value` experiment description. See README for the keys.
struct ExperimentConfig {
  // instance
  Family family = Family::Random;
  GenParams gen;
  IdScheme ids = IdScheme::Increasing;
  std::optional<std::uint64_t> graph_seed;  // fixed graph; otherwise the row seed
  std::string graph_file;

  ProblemKind problem = ProblemKind::Mis;
  std::string predictions = "solve";  // solve | ALL_ONES | ALL_ZEROS | GRID_4BLOCK | MOD3_LINE | file:<path>
  std::vector<std::size_t> ks{0};
  std::vector<std::uint64_t> seeds{1};

  // what runs: a template, or one registered program on its own
  std::optional<TemplateSpec> spec;
  std::string program;

  std::string out;
  std::set<std::string> asserts{"valid", "consistency", "degrading", "robust", "extendable"};
  bool trace = false;

  // verify / sanity
  std::string outputs_file;
  std::string sanity_family;
  std::size_t sanity_n = 0;
};

/// Throws CONFIG with the offending key in the message.
ExperimentConfig parse_config(std::string_view text);

/// One CSV row. Optional cells print empty.
struct ResultRow {
  std::string family;
  std::size_t n = 0;
  std::uint64_t d = 0;
  std::size_t delta = 0;
  std::string problem;
  std::string program;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t eta1 = 0;
  std::optional<std::size_t> eta2, eta_bw, eta_t, eta_h;
  int rounds = 0;
  std::optional<bool> bound_consistency, bound_degrading, bound_robust;
  std::string valid;
};

std::string csv_header();
std::string to_csv(const ResultRow& row);

struct RowOutcome {
  ResultRow row;
  std::vector<std::string> failures;  // asserted checks that did not hold
  std::vector<std::string> audit;     // extendability violations
  int audited_rounds = 0;
  TemplateBudgets budgets;
  std::vector<std::string> trace;
};

/// Rounds the uniform program `name` needs on a component of measure s,
/// or nullopt when no bound is registered.
std::optional<long> uniform_bound(const std::string& name, std::size_t s);

RowOutcome run_row(const ExperimentConfig& config, std::size_t k, std::uint64_t seed, bool trace = false);

/// Every (k, seed) pair, k-major. Rows are computed in parallel with
/// `policy` and returned in that order.
std::vector<RowOutcome> run_sweep(const ExperimentConfig& config, Policy policy = Policy::Parallel);

struct SanityReport {
  std::string family;
  std::size_t n = 0;
  int measured = 0;
  long threshold = 0;
  bool pass = false;
};

/// MIS_LINE, MM_LINE, VC_LINE or EC_LINE on an increasing-identifier line.
SanityReport lowerbound_sanity(std::string_view family, std::size_t n);

}  // namespace predsync

// predsync run|sweep|verify|sanity --config <path> [--trace] [--out <csv>]
//
// Exit status: 0 ok, 1 an assertion (or validation) failed, 2 bad config or input.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "predsync/error.hpp"
#include "predsync/graph_io.hpp"
#include "predsync/harness.hpp"
#include "predsync/validate.hpp"

using namespace predsync;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::Io:
    case ErrorCode::MalformedLine:
    case ErrorCode::DuplicateId:
    case ErrorCode::SelfLoop:
    case ErrorCode::IdOutOfRange:
    case ErrorCode::InconsistentPrediction:
    case ErrorCode::IncompatiblePattern:
      return true;
    default:
      return false;
  }
}

int report_rows(const ExperimentConfig& config, const std::vector<RowOutcome>& rows, bool to_stdout) {
  std::string csv = csv_header() + "\n";
  for (const auto& r : rows) csv += to_csv(r.row) + "\n";
  if (!config.out.empty()) write_file(config.out, csv);
  if (to_stdout || config.out.empty()) std::cout << csv;

  int status = kOk;
  for (const auto& r : rows) {
    if (r.failures.empty()) continue;
    status = kFailed;
    std::cerr << "FAILED k=" << r.row.k << " seed=" << r.row.seed << "\n";
    for (const auto& f : r.failures) std::cerr << "  " << f << "\n";
    const RowOutcome traced = run_row(config, r.row.k, r.row.seed, true);
    for (const auto& line : traced.trace) std::cerr << line << "\n";
  }
  return status;
}

int cmd_verify(const ExperimentConfig& config) {
  if (config.graph_file.empty()) throw Error(ErrorCode::Config, "graph_file: required by verify");
  if (config.outputs_file.empty()) throw Error(ErrorCode::Config, "outputs_file: required by verify");
  const GraphFile gf = read_graph(read_file(config.graph_file));
  const Assignment outputs = read_assignment(read_file(config.outputs_file), config.problem, gf.graph);
  if (auto v = validate(config.problem, gf.graph, outputs)) {
    std::cout << v->describe() << "\n";
    return kFailed;
  }
  std::cout << "VALID\n";
  return kOk;
}

int cmd_sanity(const ExperimentConfig& config) {
  if (config.sanity_family.empty()) throw Error(ErrorCode::Config, "sanity.family: required by sanity");
  const SanityReport r = lowerbound_sanity(config.sanity_family, config.sanity_n);
  std::cout << r.family << " n=" << r.n << " measured=" << r.measured << " threshold=" << r.threshold << " "
            << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronous message-passing algorithms with predictions"};
  app.require_subcommand(1);
  std::string config_path, out;
  bool trace = false;
  for (const char* name : {"run", "sweep", "verify", "sanity"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config")->required();
    sub->add_flag("--trace", trace, "print the round trace of every row");
    sub->add_option("--out", out, "CSV output path");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig config = parse_config(read_file(config_path));
    if (!out.empty()) config.out = out;
    if (trace) config.trace = true;

    if (command == "verify") return cmd_verify(config);
    if (command == "sanity") return cmd_sanity(config);

    const auto rows = run_sweep(config, command == "sweep" ? Policy::Parallel : Policy::Serial);
    if (config.trace) {
      for (const auto& r : rows) {
        for (const auto& line : r.trace) std::cerr << line << "\n";
      }
    }
    return report_rows(config, rows, command == "run");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kBadInput : kFailed;
  }
}

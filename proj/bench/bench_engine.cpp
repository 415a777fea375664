// Serial vs OpenMP timings for the engine's per-node loops and for sweep
// repetitions. Usage: bench_engine [n] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "predsync/generators.hpp"
#include "predsync/harness.hpp"
#include "predsync/registry.hpp"

using namespace predsync;

namespace {

template <typename F>
double best_of(int reps, F&& body) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

void row(const std::string& what, double serial, double parallel) {
  std::printf("%-28s %10.2f %10.2f %8.2fx\n", what.c_str(), serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  std::printf("threads %d, n %zu, best of %d\n", omp_get_max_threads(), n, reps);
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

  GenParams gp;
  gp.n = n;
  gp.p = 8.0 / static_cast<double>(n);
  const Graph g = generate(Family::Random, gp, IdScheme::SeededPermutation, 7).graph;

  int sink = 0;
  for (const char* name : {"mis.greedy", "mm.uniform", "vc.uniform", "ec.uniform"}) {
    const BuiltProgram p = standalone(name, g);
    auto time = [&](Policy policy) {
      SimulationOptions opts;
      opts.policy = policy;
      opts.max_rounds = std::max(p.max_rounds, static_cast<int>(4 * n + 20));
      return best_of(reps, [&] { sink += simulate(g, p.factory, NoPredictions{}, opts).total_rounds; });
    };
    row(std::string("engine ") + name, time(Policy::Serial), time(Policy::Parallel));
  }

  ExperimentConfig c = parse_config(R"(
graph.family = RANDOM
graph.n = 60
graph.p = 0.08
graph.ids = SEEDED_PERMUTATION
corrupt.k = 0..10
repetitions = 8
template = simple
)");
  auto sweep = [&](Policy policy) {
    return best_of(reps, [&] { sink += static_cast<int>(run_sweep(c, policy).size()); });
  };
  row("sweep simple (88 rows)", sweep(Policy::Serial), sweep(Policy::Parallel));

  std::printf("checksum %d\n", sink);
  return 0;
}

// Timing comparison of the skyline kernels: the serial all-pairs
// reference, its OpenMP twin, and the sort-filter sweep. Outputs are
// cross-checked on every repetition, so this doubles as a smoke test.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "skycache/data.hpp"
#include "skycache/engine.hpp"

using namespace skycache;

namespace {

double run_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const std::chrono::duration<double, std::milli> ms =
      std::chrono::steady_clock::now() - start;
  return ms.count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skyline kernel benchmark: serial vs OpenMP vs sort-filter"};
  std::size_t n = 100000;
  std::size_t d = 6;
  std::uint64_t seed = 1;
  int reps = 3;
  app.add_option("--n", n, "relation cardinality");
  app.add_option("--d", d, "relation dimensionality");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--reps", reps, "repetitions per kernel");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif

  const Relation rel = generate(GenSpec{n, d, seed});
  Query q;
  for (std::size_t a = 0; a < d; ++a) q.attrs.insert(static_cast<AttributeId>(a));
  std::printf("n=%zu d=%zu full-set query\n", rel.size(), rel.dim());

  std::vector<Tid> serial_out;
  std::vector<Tid> parallel_out;
  std::vector<Tid> sfs_out;
  double serial_best = 1e300;
  double parallel_best = 1e300;
  double sfs_best = 1e300;
  for (int r = 0; r < reps; ++r) {
    serial_best = std::min(
        serial_best, run_ms([&] { serial_out = brute_force_skyline(rel, q); }));
    parallel_best = std::min(parallel_best, run_ms([&] {
      parallel_out = brute_force_skyline_parallel(rel, q);
    }));
    RunMetrics metrics;
    sfs_best = std::min(
        sfs_best, run_ms([&] { sfs_out = sfs_skyline(rel, q, {}, metrics); }));
    if (parallel_out != serial_out || sfs_out != serial_out) {
      std::fprintf(stderr, "kernel outputs disagree!\n");
      return 1;
    }
  }

  std::printf("skyline size: %zu\n", serial_out.size());
  std::printf("%-22s %10.2f ms\n", "all-pairs serial", serial_best);
  std::printf("%-22s %10.2f ms  (x%.2f)\n", "all-pairs openmp", parallel_best,
              serial_best / parallel_best);
  std::printf("%-22s %10.2f ms\n", "sort-filter sweep", sfs_best);
  return 0;
}

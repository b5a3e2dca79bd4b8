#ifndef SKYCACHE_BENCH_HPP
#define SKYCACHE_BENCH_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skycache/cache.hpp"
#include "skycache/data.hpp"

namespace skycache {

struct CsvSource {
  std::string path;
  std::vector<std::string> columns;
};

/// Everything one benchmark run needs. Exactly one dataset source and at
/// most one workload source may be set; defaults follow the standard
/// parameter table (N=1e5, d=6, 5% cache, 100 queries).
struct RunConfig {
  Mode mode = Mode::INDEX;
  double cache_fraction = 0.05;
  std::optional<GenSpec> gen;
  std::optional<CsvSource> csv;
  std::vector<Preference> prefs;
  std::optional<WorkloadSpec> workload;
  std::optional<std::string> workload_file;
  std::string out_path;  // empty writes nowhere; caller may print instead
  bool verify = false;
};

/// One benchmark CSV row.
struct QueryRow {
  std::size_t query_index = 0;
  AttrSet attrs;
  QueryKind cls = QueryKind::NOVEL;
  std::size_t result_size = 0;
  std::uint64_t base_reads = 0;
  std::uint64_t dom_tests = 0;
  std::int64_t elapsed_micros = 0;
  std::size_t cache_used = 0;
  std::size_t evictions = 0;
};

struct RunSummary {
  std::vector<QueryRow> rows;
  std::size_t final_segments = 0;  // cached segments after the last query
};

/// Raised by verify mode when an answer disagrees with the ground truth.
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs the workload sequentially on an existing cache. With verify on,
/// every answer is checked against the all-pairs skyline and a mismatch
/// throws VerificationError.
RunSummary run_queries(SemanticCache& cache, const Relation& rel,
                       const std::vector<Query>& queries, bool verify);

Relation build_relation(const RunConfig& cfg);
std::vector<Query> build_queries(const RunConfig& cfg, std::size_t d);

/// Tuple budget: ceil(cache_fraction * N).
std::size_t budget_tuples(double cache_fraction, std::size_t n);

/// Serializes rows as CSV, header first, with a trailing aggregate row of
/// per-column means labeled "mean".
std::string to_csv(const std::vector<QueryRow>& rows);

/// Full benchmark: builds the dataset and workload, runs the configured
/// mode, writes the CSV when out_path is set, and returns the rows.
RunSummary run_benchmark(const RunConfig& cfg);

/// The scripted nine-query walkthrough over a synthetic d=10 relation:
/// {1,2}, {1,2,3}, {3,4}, {5,6}, {1,2}, {2,3}, {4,5}, {6,7}, {8,9}.
/// Returns one classification line per step followed by the final index
/// dump. Deterministic for a fixed (n, seed).
std::string replay_fig2(std::size_t n = 512, std::uint64_t seed = 7);

/// The queries used by replay_fig2, in order.
std::vector<Query> fig2_queries();

}  // namespace skycache

#endif  // SKYCACHE_BENCH_HPP

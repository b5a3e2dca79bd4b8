#include "skycache/bench.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skycache {

namespace {

std::string attrs_column(AttrSet attrs) {
  std::string out;
  bool first = true;
  for (AttributeId a : attrs.to_vector()) {
    if (!first) out += '|';
    out += std::to_string(a);
    first = false;
  }
  return out;
}

}  // namespace

std::size_t budget_tuples(double cache_fraction, std::size_t n) {
  if (cache_fraction <= 0.0 || cache_fraction > 1.0)
    throw std::invalid_argument("cache fraction must be in (0,1]");
  return static_cast<std::size_t>(
      std::ceil(cache_fraction * static_cast<double>(n)));
}

RunSummary run_queries(SemanticCache& cache, const Relation& rel,
                       const std::vector<Query>& queries, bool verify) {
  RunSummary summary;
  summary.rows.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Query& q = queries[i];
    QueryOutcome outcome = cache.execute(q);
    if (verify) {
      const std::vector<Tid> truth = brute_force_skyline_parallel(rel, q);
      if (truth != outcome.result) {
        throw VerificationError(
            "answer mismatch on query " + std::to_string(i) + " attrs " +
            q.attrs.to_string() + ": got " +
            std::to_string(outcome.result.size()) + " tuples, expected " +
            std::to_string(truth.size()));
      }
    }
    QueryRow row;
    row.query_index = i;
    row.attrs = q.attrs;
    row.cls = outcome.cls.kind;
    row.result_size = outcome.result.size();
    row.base_reads = outcome.metrics.base_reads;
    row.dom_tests = outcome.metrics.dom_tests;
    row.elapsed_micros = outcome.metrics.elapsed_micros();
    row.cache_used = outcome.cache_used;
    row.evictions = outcome.evictions;
    summary.rows.push_back(row);
  }
  summary.final_segments =
      cache.mode() == Mode::NC ? 0 : cache.index().segment_count();
  return summary;
}

Relation build_relation(const RunConfig& cfg) {
  if (cfg.csv && cfg.gen)
    throw std::invalid_argument("choose either a CSV dataset or generation");
  if (cfg.csv) return load_csv(cfg.csv->path, cfg.csv->columns, cfg.prefs)
      .relation;
  const GenSpec spec = cfg.gen.value_or(GenSpec{});
  return generate(spec, cfg.prefs);
}

std::vector<Query> build_queries(const RunConfig& cfg, std::size_t d) {
  if (cfg.workload_file && cfg.workload)
    throw std::invalid_argument("choose either a workload file or generation");
  if (cfg.workload_file) return load_workload(*cfg.workload_file, d);
  return make_workload(cfg.workload.value_or(WorkloadSpec{}), d);
}

std::string to_csv(const std::vector<QueryRow>& rows) {
  std::ostringstream out;
  out << "queryIndex,attrs,class,resultSize,baseReads,domTests,"
         "elapsedMicros,cacheUsed,evictions\n";
  double sum_result = 0;
  double sum_reads = 0;
  double sum_tests = 0;
  double sum_micros = 0;
  double sum_used = 0;
  double sum_evict = 0;
  for (const QueryRow& r : rows) {
    out << r.query_index << ',' << attrs_column(r.attrs) << ','
        << to_string(r.cls) << ',' << r.result_size << ',' << r.base_reads
        << ',' << r.dom_tests << ',' << r.elapsed_micros << ','
        << r.cache_used << ',' << r.evictions << '\n';
    sum_result += static_cast<double>(r.result_size);
    sum_reads += static_cast<double>(r.base_reads);
    sum_tests += static_cast<double>(r.dom_tests);
    sum_micros += static_cast<double>(r.elapsed_micros);
    sum_used += static_cast<double>(r.cache_used);
    sum_evict += static_cast<double>(r.evictions);
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    out.setf(std::ios::fixed);
    out.precision(3);
    out << "mean,,," << sum_result / n << ',' << sum_reads / n << ','
        << sum_tests / n << ',' << sum_micros / n << ',' << sum_used / n
        << ',' << sum_evict / n << '\n';
  }
  return out.str();
}

std::vector<Query> fig2_queries() {
  return {Query{1, 2}, Query{1, 2, 3}, Query{3, 4}, Query{5, 6}, Query{1, 2},
          Query{2, 3}, Query{4, 5},    Query{6, 7}, Query{8, 9}};
}

std::string replay_fig2(std::size_t n, std::uint64_t seed) {
  const Relation rel = generate(GenSpec{n, 10, seed});
  SemanticCache cache(rel, Mode::INDEX, rel.size());
  std::ostringstream out;
  const std::vector<Query> steps = fig2_queries();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const QueryOutcome outcome = cache.execute(steps[i]);
    out << "step " << i + 1 << " query " << steps[i].attrs.to_string()
        << " -> " << to_string(outcome.cls.kind) << '\n';
  }
  out << cache.index().dump();
  return out.str();
}

RunSummary run_benchmark(const RunConfig& cfg) {
  const Relation rel = build_relation(cfg);
  const std::vector<Query> queries = build_queries(cfg, rel.dim());
  const std::size_t budget =
      cfg.mode == Mode::NC ? 0
                           : budget_tuples(cfg.cache_fraction, rel.size());
  SemanticCache cache(rel, cfg.mode, budget);
  RunSummary summary = run_queries(cache, rel, queries, cfg.verify);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
    out << to_csv(summary.rows);
    if (!out) throw std::runtime_error("write failed: " + cfg.out_path);
  }
  return summary;
}

}  // namespace skycache

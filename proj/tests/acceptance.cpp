// Acceptance suite: end-to-end checks of the caching library against
// independently computed ground truth. Each criterion prints one
// [PASS]/[FAIL] line; the exit code is the number of failures.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "skycache/bench.hpp"

using namespace skycache;
using skycache::testing::random_query;
using skycache::testing::random_relation;
using skycache::testing::random_strict_subquery;

namespace {

struct Report {
  int failures = 0;

  void criterion(int id, const std::string& label, bool pass,
                 const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", id,
                label.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

std::vector<Tid> oracle(const Relation& rel, const Query& q) {
  return brute_force_skyline_parallel(rel, q);
}

// ---------------------------------------------------------------------
// 1. sfs_skyline with an empty seed equals the all-pairs reference on
//    randomized instances.
void criterion_oracle_equivalence(Report& report) {
  std::mt19937_64 rng(101);
  int checked = 0;
  bool ok = true;
  std::string detail;
  for (int round = 0; round < 200 && ok; ++round) {
    const std::size_t n = 100 + rng() % 1901;   // [100, 2000]
    const std::size_t d = 2 + rng() % 5;        // [2, 6]
    const Relation rel = random_relation(rng, n, d);
    const Query q = random_query(rng, d, 1, d);
    RunMetrics metrics;
    if (sfs_skyline(rel, q, {}, metrics) != brute_force_skyline(rel, q)) {
      ok = false;
      detail = "mismatch at instance " + std::to_string(round);
    }
    ++checked;
  }
  if (ok) detail = std::to_string(checked) + " instances";
  report.criterion(1, "oracle equivalence of the sort-filter engine", ok,
                   detail);
}

// ---------------------------------------------------------------------
// 2 + 4. The three modes agree per query under verify mode, and every
//    exact/subset answer touches zero base tuples.
void criterion_mode_equivalence(Report& report) {
  bool equal = true;
  bool zero_read = true;
  std::size_t zero_read_answers = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 20 && equal; ++seed) {
    const Relation rel = generate(GenSpec{10000, 5, seed});
    const std::vector<Query> queries =
        make_workload(WorkloadSpec{50, 2, 0, 0.3, seed + 1000}, 5);
    const std::size_t budget = budget_tuples(0.05, rel.size());

    std::vector<RunSummary> summaries;
    try {
      for (Mode mode : {Mode::NC, Mode::NI, Mode::INDEX}) {
        SemanticCache cache(rel, mode, budget);
        RunSummary s;
        s.rows.reserve(queries.size());
        for (std::size_t i = 0; i < queries.size(); ++i) {
          const QueryOutcome out = cache.execute(queries[i]);
          if (mode != Mode::NC) cache.index().validate();
          QueryRow row;
          row.cls = out.cls.kind;
          row.base_reads = out.metrics.base_reads;
          row.result_size = out.result.size();
          s.rows.push_back(row);
          // verify mode: every answer checked against ground truth
          if (out.result != oracle(rel, queries[i])) {
            throw VerificationError("mode " + std::string(to_string(mode)) +
                                    " query " + std::to_string(i));
          }
          if (out.cls.kind == QueryKind::EXACT ||
              out.cls.kind == QueryKind::SUBSET) {
            ++zero_read_answers;
            if (out.metrics.base_reads != 0) zero_read = false;
          }
        }
        summaries.push_back(std::move(s));
      }
    } catch (const VerificationError& e) {
      equal = false;
      detail = e.what();
      break;
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (summaries[0].rows[i].result_size != summaries[1].rows[i].result_size ||
          summaries[0].rows[i].result_size != summaries[2].rows[i].result_size) {
        equal = false;
        detail = "size mismatch seed " + std::to_string(seed) + " query " +
                 std::to_string(i);
      }
    }
  }
  if (equal) detail = "20 workloads x 50 queries x 3 modes";
  report.criterion(2, "nc/ni/index produce identical verified answers", equal,
                   detail);
  report.criterion(
      4, "exact and subset answers perform zero base reads", zero_read,
      std::to_string(zero_read_answers) + " cache-only answers observed");
}

// ---------------------------------------------------------------------
// 3. The three subset/containment properties behind the cache-only
//    answering paths, each over 500 random (query, superquery) pairs.
void criterion_lemma_suite(Report& report) {
  std::mt19937_64 rng(103);
  bool containment = true;
  bool dominator_inside = true;
  bool base_sound = true;
  int base_incomplete_seen = 0;

  for (int round = 0; round < 500; ++round) {
    const Relation rel = random_relation(rng, 150, 6);
    const Query big = random_query(rng, 6, 2, 6);
    const Query small = random_strict_subquery(rng, big);
    const auto sky_big = brute_force_skyline(rel, big);
    const auto sky_small = brute_force_skyline(rel, small);

    // Containment: the subquery's skyline sits inside the superquery's.
    if (!std::includes(sky_big.begin(), sky_big.end(), sky_small.begin(),
                       sky_small.end())) {
      containment = false;
    }

    // Every cached tuple that drops out of the subquery's skyline is
    // dominated by another cached tuple, so filtering inside the cached
    // result set is sufficient.
    for (Tid v : sky_big) {
      if (std::binary_search(sky_small.begin(), sky_small.end(), v)) continue;
      bool found = false;
      for (Tid u : sky_big) {
        if (u != v && dominates(rel, u, v, small.attrs)) {
          found = true;
          break;
        }
      }
      if (!found) dominator_inside = false;
    }

    // Base sets built the way the partial path builds them: a cached
    // query overlapping the new one contributes the skyline of the
    // shared attributes, filtered inside its own result set. That
    // contribution must sit inside the final answer, but may miss parts
    // of it, which is why the scan phase stays mandatory.
    const Query cached = random_query(rng, 6, 2, 6);
    const AttrSet shared_attrs = big.attrs & cached.attrs;
    if (!shared_attrs.empty() && shared_attrs != big.attrs) {
      const auto cached_sky = brute_force_skyline(rel, cached);
      const auto base = skyline_within(rel, cached_sky, shared_attrs);
      if (!std::includes(sky_big.begin(), sky_big.end(), base.begin(),
                         base.end())) {
        base_sound = false;
      }
      if (base.size() < sky_big.size()) ++base_incomplete_seen;
    }
  }

  const bool ok = containment && dominator_inside && base_sound &&
                  base_incomplete_seen > 0;
  report.criterion(3, "containment, in-result dominators, base-set soundness",
                   ok,
                   "500 pairs per property, " +
                       std::to_string(base_incomplete_seen) +
                       " strictly-growing instances");
}

// ---------------------------------------------------------------------
// 5. The scripted nine-query walkthrough: classifications, the final DAG
//    shape, residual algebra, usage factors, and the golden dump.
void criterion_fig2_replay(Report& report) {
  const Relation rel = generate(GenSpec{512, 10, 7});
  SemanticCache cache(rel, Mode::INDEX, rel.size());
  const std::vector<Query> steps = fig2_queries();
  const std::vector<QueryKind> expected_classes{
      QueryKind::NOVEL,   QueryKind::PARTIAL, QueryKind::PARTIAL,
      QueryKind::NOVEL,   QueryKind::EXACT,   QueryKind::SUBSET,
      QueryKind::PARTIAL, QueryKind::PARTIAL, QueryKind::NOVEL};

  bool ok = true;
  std::string detail;
  auto fail = [&](const std::string& why) {
    if (ok) detail = why;
    ok = false;
  };

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const QueryOutcome out = cache.execute(steps[i]);
    if (out.cls.kind != expected_classes[i]) {
      fail("class of step " + std::to_string(i + 1) + " is " +
           to_string(out.cls.kind));
    }
    cache.index().validate();
  }

  const CacheIndex& index = cache.index();
  auto seg_of = [&](AttrSet attrs) { return index.find(attrs); };
  auto attrs_of = [&](const std::vector<SegId>& ids) {
    std::vector<AttrSet> out;
    for (SegId id : ids) out.push_back(index.segment(id).attrs);
    return out;
  };

  // Final topology: six roots, the shared {3} under both {2,3} and
  // {3,4}, and {2,3} interposed between {1,2,3} and {3}.
  if (index.segment_count() != 12) fail("expected 12 segments");
  if (attrs_of(index.roots()) !=
      std::vector<AttrSet>{{1, 2, 3}, {3, 4}, {5, 6}, {4, 5}, {6, 7}, {8, 9}}) {
    fail("root list differs");
  }
  const auto shared = seg_of({3});
  if (!shared) {
    fail("no segment for {3}");
  } else {
    if (attrs_of(index.segment(*shared).parents) !=
        std::vector<AttrSet>{{3, 4}, {2, 3}}) {
      fail("{3} is not shared below {3,4} and {2,3}");
    }
  }
  const auto s123 = seg_of({1, 2, 3});
  if (s123 && attrs_of(index.segment(*s123).children) !=
                  std::vector<AttrSet>{{1, 2}, {2, 3}}) {
    fail("{1,2,3} should cover {1,2} and {2,3} directly");
  }

  // Residual algebra: residual == own skyline minus children's skylines.
  for (SegId id : index.segment_ids()) {
    const auto& seg = index.segment(id);
    std::vector<Tid> expect = brute_force_skyline(rel, Query{seg.attrs});
    for (SegId child : seg.children) {
      const auto sub =
          brute_force_skyline(rel, Query{index.segment(child).attrs});
      std::vector<Tid> next;
      std::set_difference(expect.begin(), expect.end(), sub.begin(), sub.end(),
                          std::back_inserter(next));
      expect = std::move(next);
    }
    if (seg.residual != expect) {
      fail("residual of " + seg.attrs.to_string() + " is off");
    }
    if (index.reconstruct(id) !=
        brute_force_skyline(rel, Query{seg.attrs})) {
      fail("reconstruction of " + seg.attrs.to_string() + " is off");
    }
  }

  // Usage factors, derived by replaying the walkthrough by hand.
  const std::vector<std::pair<AttrSet, std::uint64_t>> expected_alpha{
      {{1, 2}, 5},    {{1, 2, 3}, 3}, {{3, 4}, 2}, {{3}, 3},
      {{5, 6}, 3},    {{2, 3}, 1},    {{4, 5}, 1}, {{4}, 1},
      {{5}, 2},       {{6, 7}, 1},    {{6}, 1},    {{8, 9}, 1}};
  for (const auto& [attrs, alpha] : expected_alpha) {
    const auto id = seg_of(attrs);
    if (!id || index.segment(*id).alpha != alpha) {
      fail("usage factor of " + attrs.to_string() + " is off");
    }
  }

  // Golden rendering of the whole replay.
  const std::string golden_path =
      std::string(SKYCACHE_GOLDEN_DIR) + "/fig2_dump.txt";
  std::ifstream golden_in(golden_path);
  if (!golden_in) {
    fail("missing golden file " + golden_path);
  } else {
    std::stringstream golden;
    golden << golden_in.rdbuf();
    if (replay_fig2(512, 7) != golden.str()) fail("dump differs from golden");
  }

  // Table of the classification example: cache {1,2,3},{1,2},{3,4},{5,6}.
  const Relation trel = generate(GenSpec{256, 9, 3});
  SemanticCache flat(trel, Mode::NI, trel.size());
  for (const Query& q : {Query{1, 2, 3}, Query{1, 2}, Query{3, 4}, Query{5, 6}})
    flat.execute(q);
  const auto expect_kind = [&](Query q, QueryKind kind,
                               std::vector<AttrSet> witnesses) {
    const Classification cls = flat.index().search(q.attrs);
    if (cls.kind != kind) {
      fail("table classification of " + q.attrs.to_string());
      return;
    }
    std::vector<AttrSet> got;
    for (SegId w : cls.witnesses) got.push_back(flat.index().segment(w).attrs);
    std::sort(got.begin(), got.end());
    std::sort(witnesses.begin(), witnesses.end());
    if (got != witnesses) fail("table witnesses of " + q.attrs.to_string());
  };
  expect_kind(Query{1, 2}, QueryKind::EXACT, {{1, 2}});
  expect_kind(Query{2, 3}, QueryKind::SUBSET, {{1, 2, 3}});
  expect_kind(Query{4, 5}, QueryKind::PARTIAL, {{3, 4}, {5, 6}});
  expect_kind(Query{6, 7}, QueryKind::PARTIAL, {{5, 6}});
  expect_kind(Query{7, 8}, QueryKind::NOVEL, {});

  report.criterion(5, "scripted walkthrough replay and classification table",
                   ok, detail);
}

// ---------------------------------------------------------------------
// 6. Structural invariants plus reconstruction-vs-oracle after every
//    query of downscaled mode-equivalence runs.
void criterion_index_invariants(Report& report) {
  bool ok = true;
  std::string detail;
  std::size_t checks = 0;
  for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
    const Relation rel = generate(GenSpec{2000, 5, seed});
    const std::vector<Query> queries =
        make_workload(WorkloadSpec{50, 2, 0, 0.3, seed + 2000}, 5);
    SemanticCache cache(rel, Mode::INDEX,
                        budget_tuples(0.05, rel.size()));
    for (std::size_t i = 0; i < queries.size() && ok; ++i) {
      cache.execute(queries[i]);
      try {
        cache.index().validate();
      } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
        break;
      }
      for (SegId id : cache.index().segment_ids()) {
        ++checks;
        if (cache.index().reconstruct(id) !=
            oracle(rel, Query{cache.index().segment(id).attrs})) {
          ok = false;
          detail = "reconstruction mismatch, seed " + std::to_string(seed);
          break;
        }
      }
    }
  }
  if (ok) detail = std::to_string(checks) + " segment reconstructions checked";
  report.criterion(6, "index invariants hold after every operation", ok,
                   detail);
}

// ---------------------------------------------------------------------
// 7. Replacement arithmetic and minimum-delta eviction.
void criterion_replacement(Report& report) {
  std::mt19937_64 rng(107);
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 100 && ok; ++i) {
    const std::uint64_t alpha = 1 + rng() % 64;
    const std::size_t dims = 1 + rng() % 10;
    const std::size_t beta = 1 + rng() % 2048;
    const double expect =
        static_cast<double>(alpha) * static_cast<double>(dims) /
        static_cast<double>(beta);
    if (replacement_value(alpha, dims, beta) != expect) {
      ok = false;
      detail = "formula mismatch";
    }
  }

  for (int trial = 0; trial < 20 && ok; ++trial) {
    const Relation rel = random_relation(rng, 300, 6);
    SemanticCache cache(rel, Mode::INDEX, rel.size());
    for (int i = 0; i < 6; ++i) cache.execute(random_query(rng, 6, 1, 6));
    // Re-execute a few to scatter the usage factors.
    for (int i = 0; i < 3; ++i) cache.execute(random_query(rng, 6, 1, 6));

    CacheIndex index = cache.index();  // private copy to evict from
    if (index.roots().empty()) continue;
    std::optional<SegId> expected;
    double best = 0.0;
    for (SegId r : index.roots()) {
      const double delta = index.replacement_value(r);
      if (!expected || delta < best || (delta == best && r < *expected)) {
        expected = r;
        best = delta;
      }
    }
    const auto evicted = index.evict(index.budget() + 1);
    if (evicted.empty() || evicted.front() != *expected) {
      ok = false;
      detail = "wrong eviction victim in trial " + std::to_string(trial);
    }
    index.validate();
  }
  if (ok) detail = "100 delta evaluations, 20 eviction scenarios";
  report.criterion(7, "replacement value arithmetic and eviction order", ok,
                   detail);
}

// ---------------------------------------------------------------------
// 8. Qualitative trends at N=3e4: fewer dominance tests with the cache,
//    per-query time falling as the cache warms while nc stays flat, and
//    the DAG holding at least as many segments as the flat cache.
void criterion_trends(Report& report) {
  const std::size_t n = 30000;
  double nc_tests = 0;
  double index_tests = 0;
  double nc_first = 0;
  double nc_last = 0;
  double index_first = 0;
  double index_last = 0;
  double ni_segments = 0;
  double index_segments = 0;

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Relation rel = generate(GenSpec{n, 6, seed});
    const std::vector<Query> queries =
        make_workload(WorkloadSpec{100, 2, 0, 0.3, seed + 3000}, 6);
    const std::size_t budget = budget_tuples(0.05, rel.size());

    for (Mode mode : {Mode::NC, Mode::NI, Mode::INDEX}) {
      SemanticCache cache(rel, mode, budget);
      RunSummary summary = run_queries(cache, rel, queries, false);
      double tests = 0;
      double first = 0;
      double last = 0;
      for (std::size_t i = 0; i < summary.rows.size(); ++i) {
        tests += static_cast<double>(summary.rows[i].dom_tests);
        if (i < 10) first += static_cast<double>(summary.rows[i].elapsed_micros);
        if (i >= 90) last += static_cast<double>(summary.rows[i].elapsed_micros);
      }
      switch (mode) {
        case Mode::NC:
          nc_tests += tests / 100.0;
          nc_first += first / 10.0;
          nc_last += last / 10.0;
          break;
        case Mode::NI:
          ni_segments += static_cast<double>(summary.final_segments);
          break;
        case Mode::INDEX:
          index_tests += tests / 100.0;
          index_first += first / 10.0;
          index_last += last / 10.0;
          index_segments += static_cast<double>(summary.final_segments);
          break;
      }
    }
  }

  char buf[256];
  const bool fewer_tests = index_tests < nc_tests;
  std::snprintf(buf, sizeof buf, "mean domTests index %.0f vs nc %.0f",
                index_tests / 5.0, nc_tests / 5.0);
  report.criterion(8, std::string("trend (a): ") + buf, fewer_tests);

  const double nc_ratio = nc_last / nc_first;
  const bool warms_up = index_last < index_first;
  const bool nc_flat = nc_ratio > 0.5 && nc_ratio < 2.0;
  std::snprintf(buf, sizeof buf,
                "index us %.0f->%.0f, nc us %.0f->%.0f (ratio %.2f)",
                index_first / 5.0, index_last / 5.0, nc_first / 5.0,
                nc_last / 5.0, nc_ratio);
  report.criterion(8, std::string("trend (b): ") + buf, warms_up && nc_flat);

  std::snprintf(buf, sizeof buf, "mean segments index %.1f vs flat %.1f",
                index_segments / 5.0, ni_segments / 5.0);
  report.criterion(8, std::string("trend (c): ") + buf,
                   index_segments >= ni_segments);
}

// ---------------------------------------------------------------------
// 9. Mean full-set skyline size strictly grows with dimensionality.
void criterion_skyline_growth(Report& report) {
  bool ok = true;
  double previous = 0.0;
  std::string detail = "means";
  for (std::size_t d = 3; d <= 6; ++d) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Relation rel = generate(GenSpec{10000, d, seed});
      Query q;
      for (std::size_t a = 0; a < d; ++a)
        q.attrs.insert(static_cast<AttributeId>(a));
      total += static_cast<double>(oracle(rel, q).size());
    }
    const double mean = total / 5.0;
    detail += " " + std::to_string(static_cast<int>(mean));
    if (mean <= previous) ok = false;
    previous = mean;
  }
  report.criterion(9, "skyline size strictly grows over d=3..6", ok, detail);
}

}  // namespace

int main() {
  Report report;
  criterion_oracle_equivalence(report);
  criterion_mode_equivalence(report);  // also reports criterion 4
  criterion_lemma_suite(report);
  criterion_fig2_replay(report);
  criterion_index_invariants(report);
  criterion_replacement(report);
  criterion_trends(report);
  criterion_skyline_growth(report);
  if (report.failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", report.failures);
  }
  return report.failures;
}

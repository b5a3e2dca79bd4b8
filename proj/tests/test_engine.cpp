#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "skycache/engine.hpp"

using namespace skycache;
using skycache::testing::make_relation;
using skycache::testing::random_query;
using skycache::testing::random_relation;

TEST_CASE("sort_key orders dominating tuples first") {
  const Relation rel = make_relation({{0, 0}, {1, 1}});
  const Query q{0, 1};
  CHECK(sort_key(rel, 0, q) < sort_key(rel, 1, q));
}

TEST_CASE("sort_key ties on identical projections") {
  const Relation rel = make_relation({{2, 7, 1}, {2, 7, 9}});
  const Query q{0, 1};
  CHECK(sort_key(rel, 0, q) == sort_key(rel, 1, q));
}

TEST_CASE("sort_key MAX attribute contributes one minus the normalized value") {
  const Relation rel =
      make_relation({{0.0}, {1.0}, {0.25}}, {Preference::MAX});
  const Query q{0};
  CHECK(sort_key(rel, 0, q) == doctest::Approx(1.0));
  CHECK(sort_key(rel, 1, q) == doctest::Approx(0.0));
  CHECK(sort_key(rel, 2, q) == doctest::Approx(0.75));
}

TEST_CASE("sort_key is monotone with dominance on random instances") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 30; ++round) {
    const Relation rel = random_relation(rng, 50, 4);
    const Query q = random_query(rng, 4, 1, 4);
    for (Tid u = 0; u < 20; ++u) {
      for (Tid v = 0; v < 20; ++v) {
        if (dominates(rel, u, v, q.attrs)) {
          CHECK(sort_key(rel, u, q) < sort_key(rel, v, q));
        }
      }
    }
  }
}

TEST_CASE("sfs matches brute force on the four-point example") {
  const Relation rel = make_relation({{1, 9}, {9, 1}, {5, 5}, {6, 6}});
  RunMetrics metrics;
  CHECK(sfs_skyline(rel, Query{0, 1}, {}, metrics) ==
        std::vector<Tid>{0, 1, 2});
  CHECK(metrics.base_reads == rel.size());
}

TEST_CASE("sfs equals the oracle on randomized instances") {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 50 + rng() % 400;
    const std::size_t d = 2 + rng() % 5;
    const Relation rel = random_relation(rng, n, d);
    const Query q = random_query(rng, d, 1, d);
    RunMetrics metrics;
    CHECK(sfs_skyline(rel, q, {}, metrics) == brute_force_skyline(rel, q));
  }
}

TEST_CASE("seeding with any subset of the true skyline never changes the result") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 60; ++round) {
    const Relation rel = random_relation(rng, 250, 4);
    const Query q = random_query(rng, 4, 2, 4);
    const auto truth = brute_force_skyline(rel, q);

    std::vector<Tid> seed;
    for (Tid t : truth) {
      if ((rng() & 3) == 0) seed.push_back(t);
    }
    RunMetrics metrics;
    CHECK(sfs_skyline(rel, q, seed, metrics) == truth);
    CHECK(metrics.base_reads == rel.size() - seed.size());
  }
}

TEST_CASE("a full-skyline seed reproduces the answer without window growth") {
  const Relation rel = make_relation({{1, 9}, {9, 1}, {5, 5}, {6, 6}});
  const Query q{0, 1};
  const std::vector<Tid> seed{0, 1, 2};
  RunMetrics metrics;
  std::vector<Tid> admitted;
  const auto result = sfs_skyline(rel, q, seed, metrics,
                                  [&](Tid t) { admitted.push_back(t); });
  CHECK(result == seed);
  CHECK(admitted.empty());  // everything was already seeded
  CHECK(metrics.base_reads == 1);
}

TEST_CASE("admissions stream only true skyline members, in sweep order") {
  std::mt19937_64 rng(24);
  const Relation rel = random_relation(rng, 300, 3);
  const Query q{0, 1, 2};
  RunMetrics metrics;
  std::vector<Tid> streamed;
  const auto result =
      sfs_skyline(rel, q, {}, metrics, [&](Tid t) { streamed.push_back(t); });
  std::vector<Tid> sorted = streamed;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == result);
  // Sweep order is ascending sort key.
  for (std::size_t i = 1; i < streamed.size(); ++i) {
    CHECK(sort_key(rel, streamed[i - 1], q) <= sort_key(rel, streamed[i], q));
  }
}

#ifndef NDEBUG
TEST_CASE("debug builds reject a corrupt seed") {
  const Relation rel = make_relation({{1, 9}, {9, 1}, {5, 5}, {6, 6}});
  RunMetrics metrics;
  const std::vector<Tid> bad_seed{3};  // (6,6) is dominated by (5,5)
  CHECK_THROWS_AS(sfs_skyline(rel, Query{0, 1}, bad_seed, metrics),
                  std::logic_error);
}
#endif

TEST_CASE("dominance test counters accumulate") {
  std::mt19937_64 rng(25);
  const Relation rel = random_relation(rng, 100, 3);
  RunMetrics metrics;
  sfs_skyline(rel, Query{0, 1, 2}, {}, metrics);
  CHECK(metrics.dom_tests > 0);
  CHECK(metrics.base_reads == rel.size());
}

// Shared fixtures for the test suites: tiny literal relations and seeded
// random instances (values, preference directions, query subsets).

#pragma once

#include <random>
#include <vector>

#include "skycache/core.hpp"

namespace skycache::testing {

inline Relation make_relation(std::vector<std::vector<double>> rows,
                              std::vector<Preference> prefs = {}) {
  const std::size_t d = rows.empty() ? 1 : rows.front().size();
  return Relation::from_rows(std::move(rows), d, std::move(prefs));
}

inline Relation random_relation(std::mt19937_64& rng, std::size_t n,
                                std::size_t d, bool random_prefs = true) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& row : rows) {
    for (double& v : row) v = unit(rng);
  }
  std::vector<Preference> prefs(d, Preference::MIN);
  if (random_prefs) {
    for (auto& p : prefs) {
      p = (rng() & 1) != 0 ? Preference::MAX : Preference::MIN;
    }
  }
  return Relation::from_rows(std::move(rows), d, std::move(prefs));
}

inline Query random_query(std::mt19937_64& rng, std::size_t d,
                          std::size_t min_size, std::size_t max_size) {
  std::vector<AttributeId> pool(d);
  for (std::size_t i = 0; i < d; ++i) pool[i] = static_cast<AttributeId>(i);
  const std::size_t size =
      min_size + static_cast<std::size_t>(
                     rng() % static_cast<std::uint64_t>(max_size - min_size + 1));
  AttrSet attrs;
  for (std::size_t j = 0; j < size; ++j) {
    const std::size_t k =
        j + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(d - j));
    std::swap(pool[j], pool[k]);
    attrs.insert(pool[j]);
  }
  return Query{attrs};
}

/// A strict non-empty random subset of q, for containment properties.
inline Query random_strict_subquery(std::mt19937_64& rng, const Query& q) {
  const std::vector<AttributeId> ids = q.attrs.to_vector();
  AttrSet attrs;
  while (attrs.empty() || attrs == q.attrs) {
    attrs = AttrSet{};
    for (AttributeId a : ids) {
      if ((rng() & 1) != 0) attrs.insert(a);
    }
  }
  return Query{attrs};
}

}  // namespace skycache::testing

#include "skycache/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace skycache {

namespace {

struct RowHash {
  std::size_t operator()(const std::vector<double>& row) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (double v : row) {
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof v);
      std::memcpy(&bits, &v, sizeof bits);
      h ^= bits;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Relation Relation::from_rows(std::vector<std::vector<double>> rows,
                             std::size_t dim, std::vector<Preference> prefs,
                             bool dedup) {
  require(dim >= 1, "relation dimensionality must be >= 1");
  require(dim <= AttrSet::kMaxAttrs, "relation dimensionality must be <= 64");
  if (prefs.empty()) prefs.assign(dim, Preference::MIN);
  require(prefs.size() == dim, "one preference per attribute required");

  Relation rel;
  rel.dim_ = dim;
  rel.prefs_ = std::move(prefs);
  rel.values_.reserve(rows.size() * dim);

  std::unordered_map<std::vector<double>, Tid, RowHash> seen;
  if (dedup) seen.reserve(rows.size());
  for (auto& row : rows) {
    require(row.size() == dim, "ragged row in relation input");
    for (double v : row) require(std::isfinite(v), "non-finite value in row");
    if (dedup) {
      auto [it, inserted] = seen.emplace(row, static_cast<Tid>(rel.count_));
      if (!inserted) {
        ++rel.dropped_;
        continue;
      }
    }
    rel.values_.insert(rel.values_.end(), row.begin(), row.end());
    ++rel.count_;
  }

  rel.col_min_.assign(dim, std::numeric_limits<double>::infinity());
  rel.col_max_.assign(dim, -std::numeric_limits<double>::infinity());
  for (Tid t = 0; t < rel.count_; ++t) {
    for (std::size_t a = 0; a < dim; ++a) {
      double v = rel.value(t, static_cast<AttributeId>(a));
      rel.col_min_[a] = std::min(rel.col_min_[a], v);
      rel.col_max_[a] = std::max(rel.col_max_[a], v);
    }
  }
  return rel;
}

bool dominates(const Relation& rel, Tid u, Tid v, AttrSet attrs) {
  if (attrs.empty()) throw std::invalid_argument("dominance needs attributes");
  if (!rel.conforms(attrs))
    throw std::invalid_argument("attribute id outside relation schema");
  bool strict = false;
  for (AttributeId a : attrs.to_vector()) {
    double x = rel.value(u, a);
    double y = rel.value(v, a);
    if (rel.pref(a) == Preference::MAX) {
      x = -x;
      y = -y;
    }
    if (x > y) return false;
    if (x < y) strict = true;
  }
  return strict;
}

namespace {

void check_query(const Relation& rel, const Query& q) {
  if (q.attrs.empty()) throw std::invalid_argument("query has no attributes");
  if (!rel.conforms(q.attrs))
    throw std::invalid_argument("query attribute outside relation schema");
}

// Scans tuples in tid order until the first dominator of t; the early
// exit keeps the cost per dominated tuple small and the scan order makes
// the work per row independent of threading.
bool is_dominated_by_any(const Relation& rel, Tid t,
                         std::span<const AttributeId> attrs) {
  const Tid n = static_cast<Tid>(rel.size());
  for (Tid s = 0; s < n; ++s) {
    if (s != t && detail::dominates_on(rel, s, t, attrs)) return true;
  }
  return false;
}

}  // namespace

std::vector<Tid> brute_force_skyline(const Relation& rel, const Query& q) {
  check_query(rel, q);
  const auto attrs = q.attrs.to_vector();
  std::vector<Tid> result;
  for (Tid t = 0; t < static_cast<Tid>(rel.size()); ++t) {
    if (!is_dominated_by_any(rel, t, attrs)) result.push_back(t);
  }
  return result;
}

std::vector<Tid> brute_force_skyline_parallel(const Relation& rel,
                                              const Query& q) {
  check_query(rel, q);
  const auto attrs = q.attrs.to_vector();
  const std::int64_t n = static_cast<std::int64_t>(rel.size());
  std::vector<std::uint8_t> in_skyline(rel.size(), 0);

#pragma omp parallel for schedule(dynamic, 128)
  for (std::int64_t t = 0; t < n; ++t) {
    in_skyline[t] =
        !is_dominated_by_any(rel, static_cast<Tid>(t), attrs) ? 1 : 0;
  }

  std::vector<Tid> result;
  for (std::int64_t t = 0; t < n; ++t) {
    if (in_skyline[t]) result.push_back(static_cast<Tid>(t));
  }
  return result;
}

namespace {

// Shared body of the candidate-set filters. For each candidate, scans the
// other candidates in list order until the first dominator; per-candidate
// test counts are summed, so the total is the same no matter how the
// outer loop is scheduled.
std::vector<Tid> filter_candidates(const Relation& rel,
                                   std::span<const Tid> candidates,
                                   AttrSet attrs, std::uint64_t* dom_tests,
                                   bool parallel) {
  if (!attrs.empty() && !rel.conforms(attrs))
    throw std::invalid_argument("attribute id outside relation schema");
  const auto ids = attrs.to_vector();
  const std::int64_t m = static_cast<std::int64_t>(candidates.size());
  std::vector<std::uint8_t> keep(candidates.size(), 0);
  std::uint64_t tests = 0;

#pragma omp parallel for schedule(dynamic, 32) reduction(+ : tests) \
    if (parallel)
  for (std::int64_t i = 0; i < m; ++i) {
    bool dominated = false;
    for (std::int64_t j = 0; j < m && !dominated; ++j) {
      if (j == i) continue;
      ++tests;
      dominated = detail::dominates_on(rel, candidates[j], candidates[i], ids);
    }
    keep[i] = dominated ? 0 : 1;
  }

  if (dom_tests != nullptr) *dom_tests += tests;
  std::vector<Tid> result;
  for (std::int64_t i = 0; i < m; ++i) {
    if (keep[i]) result.push_back(candidates[i]);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace

std::vector<Tid> skyline_within(const Relation& rel,
                                std::span<const Tid> candidates, AttrSet attrs,
                                std::uint64_t* dom_tests) {
  return filter_candidates(rel, candidates, attrs, dom_tests, false);
}

std::vector<Tid> skyline_within_parallel(const Relation& rel,
                                         std::span<const Tid> candidates,
                                         AttrSet attrs,
                                         std::uint64_t* dom_tests) {
  return filter_candidates(rel, candidates, attrs, dom_tests, true);
}

std::vector<std::pair<Tid, Tid>> validate_distinct_values(
    const Relation& rel) {
  std::unordered_map<std::vector<double>, Tid, RowHash> seen;
  seen.reserve(rel.size());
  std::vector<std::pair<Tid, Tid>> duplicates;
  for (Tid t = 0; t < static_cast<Tid>(rel.size()); ++t) {
    auto r = rel.row(t);
    std::vector<double> key(r.begin(), r.end());
    auto [it, inserted] = seen.emplace(std::move(key), t);
    if (!inserted) duplicates.emplace_back(it->second, t);
  }
  return duplicates;
}

}  // namespace skycache

#ifndef SKYCACHE_CORE_HPP
#define SKYCACHE_CORE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skycache/attr_set.hpp"

namespace skycache {

/// Row identifier. Rows are numbered 0..N-1 in load order (after
/// duplicate removal), and all cached results refer to rows by tid.
using Tid = std::uint32_t;

/// Preference direction for one attribute, fixed for the whole session.
enum class Preference : std::uint8_t { MIN, MAX };

/**
 * An immutable in-memory relation: N rows of d numeric attributes plus a
 * preference direction per attribute.
 *
 * Construction goes through from_rows(), which drops exact-duplicate rows
 * (keeping the first occurrence) so that the distinct value condition
 * holds, and rejects non-finite values. Column min/max are precomputed
 * for monotone sort keys. Safe to share across concurrent readers.
 */
class Relation {
 public:
  /// Builds a relation from row vectors. Throws std::invalid_argument on
  /// ragged rows, non-finite values, d == 0 or d > 64, or a preference
  /// vector of the wrong length. An empty prefs vector means all-MIN.
  /// With dedup off, duplicate rows are kept as-is; the caller is then
  /// responsible for checking validate_distinct_values before relying on
  /// subset containment of skylines.
  static Relation from_rows(std::vector<std::vector<double>> rows,
                            std::size_t dim,
                            std::vector<Preference> prefs = {},
                            bool dedup = true);

  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool empty() const { return count_ == 0; }

  [[nodiscard]] double value(Tid t, AttributeId a) const {
    return values_[static_cast<std::size_t>(t) * dim_ + a];
  }
  [[nodiscard]] std::span<const double> row(Tid t) const {
    return {values_.data() + static_cast<std::size_t>(t) * dim_, dim_};
  }

  [[nodiscard]] Preference pref(AttributeId a) const { return prefs_[a]; }
  [[nodiscard]] std::span<const Preference> prefs() const { return prefs_; }

  [[nodiscard]] double col_min(AttributeId a) const { return col_min_[a]; }
  [[nodiscard]] double col_max(AttributeId a) const { return col_max_[a]; }

  /// Number of exact-duplicate rows dropped at load.
  [[nodiscard]] std::size_t dropped_duplicates() const { return dropped_; }

  /// True iff every id in q is a valid column of this relation.
  [[nodiscard]] bool conforms(AttrSet q) const {
    return q.max_id_bound() <= dim_;
  }

 private:
  Relation() = default;

  std::vector<double> values_;  // row-major, count_ * dim_
  std::vector<Preference> prefs_;
  std::vector<double> col_min_;
  std::vector<double> col_max_;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::size_t dropped_ = 0;
};

/// A skyline query: the non-empty set of attributes to take preferences on.
struct Query {
  AttrSet attrs;

  Query() = default;
  Query(std::initializer_list<AttributeId> ids) : attrs(ids) {}
  explicit Query(AttrSet a) : attrs(a) {}

  friend bool operator==(const Query&, const Query&) = default;
};

/**
 * Pareto dominance on the projection to `attrs`: u dominates v iff u is
 * preferred-or-equal on every attribute of the set and strictly preferred
 * on at least one. Throws std::invalid_argument when attrs is empty or
 * names a column outside the relation.
 */
bool dominates(const Relation& rel, Tid u, Tid v, AttrSet attrs);

namespace detail {

/// Unchecked dominance over a precomputed attribute list; the hot kernel.
inline bool dominates_on(const Relation& rel, Tid u, Tid v,
                         std::span<const AttributeId> attrs) {
  const double* ur = rel.row(u).data();
  const double* vr = rel.row(v).data();
  bool strict = false;
  for (AttributeId a : attrs) {
    double x = ur[a];
    double y = vr[a];
    if (rel.pref(a) == Preference::MAX) {
      x = -x;
      y = -y;
    }
    if (x > y) return false;
    if (x < y) strict = true;
  }
  return strict;
}

}  // namespace detail

/**
 * All-pairs skyline: the tids of tuples not dominated by any other tuple
 * on q. Serial reference implementation; used as ground truth everywhere.
 * Returns tids in ascending order. Empty relation yields an empty set.
 */
std::vector<Tid> brute_force_skyline(const Relation& rel, const Query& q);

/// OpenMP twin of brute_force_skyline: identical output, rows checked in
/// parallel. Falls back to the serial loop when built without OpenMP.
std::vector<Tid> brute_force_skyline_parallel(const Relation& rel,
                                              const Query& q);

/**
 * Skyline restricted to a candidate set: keeps the candidates not
 * dominated on `attrs` by any other candidate. Candidates must be valid
 * tids; output is ascending. `dom_tests`, when given, is incremented by
 * the number of dominance tests performed (deterministic, early-exit
 * scan in candidate order).
 */
std::vector<Tid> skyline_within(const Relation& rel,
                                std::span<const Tid> candidates,
                                AttrSet attrs,
                                std::uint64_t* dom_tests = nullptr);

/// OpenMP twin of skyline_within with the same deterministic test count.
std::vector<Tid> skyline_within_parallel(const Relation& rel,
                                         std::span<const Tid> candidates,
                                         AttrSet attrs,
                                         std::uint64_t* dom_tests = nullptr);

/**
 * Checks the distinct value condition over all d attributes. Returns one
 * (first_tid, duplicate_tid) pair per offending row; empty means ok.
 * from_rows() already drops duplicates, so this reports violations only
 * for relations built from pre-cleaned data that was not actually clean.
 */
std::vector<std::pair<Tid, Tid>> validate_distinct_values(const Relation& rel);

}  // namespace skycache

#endif  // SKYCACHE_CORE_HPP

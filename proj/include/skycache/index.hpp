#ifndef SKYCACHE_INDEX_HPP
#define SKYCACHE_INDEX_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skycache/core.hpp"

namespace skycache {

/// Identifier of a cached semantic segment. Ids start at 1 and follow
/// arrival order; 0 is never assigned (the pseudo root is not a segment).
using SegId = std::uint32_t;

/// The four-way classification of a query against the cache, listed from
/// most to least restrictive.
enum class QueryKind : std::uint8_t { EXACT, SUBSET, PARTIAL, NOVEL };

const char* to_string(QueryKind kind);

/// Classification outcome. For EXACT there is exactly one witness (the
/// segment with identical attributes); for SUBSET every witness strictly
/// contains the query; for PARTIAL every witness is a root sharing at
/// least one attribute; for NOVEL the list is empty.
struct Classification {
  QueryKind kind = QueryKind::NOVEL;
  std::vector<SegId> witnesses;
};

/**
 * Descriptor of one cached query.
 *
 * The residual holds the fragment of this query's skyline not already
 * stored below it: reconstructing the full answer unions the residual
 * with the children's reconstructions. Children are kept in arrival
 * order, and for each attribute of the segment a bit vector marks which
 * children carry that attribute; vectors grow and shrink with the child
 * list, so bit j always refers to children[j].
 */
struct SemanticSegment {
  SegId id = 0;
  AttrSet attrs;
  std::vector<Tid> residual;  // sorted, unique
  std::uint64_t alpha = 1;    // usage factor; bumped whenever the result is used
  std::vector<SegId> children;
  std::vector<SegId> parents;  // sorted; empty means root
  std::map<AttributeId, std::vector<bool>> bit_vectors;

  [[nodiscard]] bool is_root() const { return parents.empty(); }
};

/// Cache-only base-set fragment attached to a partial insertion: the
/// skyline of attrs = query ∩ witness.attrs, derived from the witness.
struct PartialSeed {
  SegId witness = 0;
  AttrSet attrs;
  std::vector<Tid> skyline;
};

struct InsertResult {
  /// Id of the new segment, or nullopt when the insertion was refused
  /// because the result cannot fit the budget even after evictions (the
  /// index is then left exactly as it was).
  std::optional<SegId> id;
  std::vector<SegId> evicted;
};

/// Replacement value delta = (alpha * dims) / beta. Lower is evicted first.
double replacement_value(std::uint64_t alpha, std::size_t dims,
                         std::size_t beta);

/**
 * The cache organization: a DAG of semantic segments under a pseudo root
 * whose children are the roots. An edge always goes from a strict
 * superset to a strict subset, no two segments share an attribute set,
 * and the stored tuple count never exceeds the budget once a public
 * operation returns.
 *
 * When constructed flat, the same object models an unorganized cache:
 * every segment is a root holding its full result set, and nothing is
 * ever linked or shared. That isolates exactly what the DAG contributes.
 *
 * Mutations require exclusive ownership; const operations may run
 * concurrently with each other.
 */
class CacheIndex {
 public:
  explicit CacheIndex(std::size_t budget_tuples, bool flat = false);

  /**
   * Classifies q against the cached segments. Roots are scanned first;
   * when q is contained in a root, the descent walks only children whose
   * bit vectors carry every attribute of q, refining toward an exact
   * match. The resulting kind always equals what a flat scan over all
   * segments would produce.
   */
  [[nodiscard]] Classification search(AttrSet q) const;

  /// Full skyline of the segment: residual plus the union of the
  /// children's reconstructions, ascending by tid.
  [[nodiscard]] std::vector<Tid> reconstruct(SegId s) const;

  /**
   * Inserts the result of a freshly answered query.
   *
   * Placement: a query containing roots becomes a root above them; a
   * query contained in cached segments becomes a child of its minimal
   * supersets; anything else becomes a plain root. Siblings under each
   * new parent that are strict subsets of the query are re-linked below
   * it. The new residual is the skyline minus the children's coverage,
   * and every parent's residual drops the tuples now reachable through
   * the new node.
   *
   * `seeds` carries the partial-query intersections: each one not yet
   * cached is created and linked as a child of both its witness and the
   * new node.
   *
   * Afterwards the budget is enforced by evicting lowest-delta roots
   * (never the new node). If the budget still cannot be met, the whole
   * insertion rolls back and the result carries no id.
   *
   * Throws std::logic_error if a segment with the same attribute set is
   * already cached, and std::invalid_argument on an empty attribute set
   * or empty skyline.
   */
  InsertResult insert_segment(AttrSet attrs, std::vector<Tid> full_skyline,
                              std::span<const PartialSeed> seeds = {});

  /// Removes a root: its residual is discarded and children without any
  /// remaining parent become roots. Throws std::logic_error on non-roots.
  void delete_root(SegId s);

  /// delta of a segment, computed on demand from the live alpha, the
  /// attribute count, and the reconstructed skyline size.
  [[nodiscard]] double replacement_value(SegId s) const;

  /// Evicts lowest-delta roots (ties to the oldest id) until
  /// used + needed <= budget or only `protect` remains evictable.
  /// Returns the evicted ids in order.
  std::vector<SegId> evict(std::size_t needed,
                           std::optional<SegId> protect = std::nullopt);

  /// Marks one use of the segment's result set: increments alpha on the
  /// segment and on every descendant its reconstruction traverses.
  void touch(SegId s);

  /// Increments alpha on one segment only. Callers answering a query
  /// from several overlapping witnesses can use this to count each
  /// contributing segment once.
  void touch_single(SegId s);

  [[nodiscard]] const SemanticSegment& segment(SegId s) const;
  [[nodiscard]] bool contains(SegId s) const;
  [[nodiscard]] std::optional<SegId> find(AttrSet attrs) const;
  [[nodiscard]] const std::vector<SegId>& roots() const { return roots_; }
  [[nodiscard]] std::size_t segment_count() const { return segments_.size(); }
  [[nodiscard]] std::size_t used() const { return used_; }
  [[nodiscard]] std::size_t budget() const { return budget_; }
  [[nodiscard]] bool flat() const { return flat_; }

  /// Ids of all segments, ascending.
  [[nodiscard]] std::vector<SegId> segment_ids() const;

  /// Deterministic text rendering of the DAG, one line per node.
  [[nodiscard]] std::string dump() const;

  /// Checks every structural invariant (graph shape, bit vectors,
  /// redundancy, budget, bookkeeping). Throws std::logic_error with a
  /// description of the first violation.
  void validate() const;

 private:
  SemanticSegment& seg(SegId s);
  const SemanticSegment& cseg(SegId s) const;

  SegId place(AttrSet attrs, std::vector<Tid> skyline);
  SegId place_linked(AttrSet attrs, std::vector<Tid> skyline,
                     const std::vector<SegId>& parents);
  void add_child(SegId parent, SegId child);
  void remove_child(SegId parent, SegId child);
  void recompute_used();
  [[nodiscard]] std::vector<Tid> children_coverage(SegId s) const;

  std::map<SegId, SemanticSegment> segments_;
  std::vector<SegId> roots_;  // pseudo root's children, arrival order
  std::size_t budget_ = 0;
  std::size_t used_ = 0;
  bool flat_ = false;
  SegId next_id_ = 1;
};

}  // namespace skycache

#endif  // SKYCACHE_INDEX_HPP

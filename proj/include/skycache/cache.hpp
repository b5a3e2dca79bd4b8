#ifndef SKYCACHE_CACHE_HPP
#define SKYCACHE_CACHE_HPP

#include <optional>
#include <vector>

#include "skycache/core.hpp"
#include "skycache/engine.hpp"
#include "skycache/index.hpp"

namespace skycache {

/// The three processing modes under comparison: no cache at all, a flat
/// cache of full result sets, and the DAG-organized cache.
enum class Mode : std::uint8_t { NC, NI, INDEX };

const char* to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view token);

struct QueryOutcome {
  Classification cls;
  std::vector<Tid> result;  // ascending by tid
  RunMetrics metrics;
  std::size_t evictions = 0;       // segments evicted while caching this query
  bool inserted = false;           // a new segment was stored
  bool insertion_refused = false;  // result too large for the budget
  std::size_t cache_used = 0;      // stored tuples after the query
};

/**
 * Answers a stream of skyline queries over one immutable relation,
 * reusing previous results according to the query's classification:
 *
 *  - exact: the cached result is reconstructed and returned, no base
 *    data touched, nothing inserted.
 *  - subset: candidates are the intersection of the witnesses'
 *    reconstructions; filtering candidates against each other is enough
 *    to obtain the answer, again without base reads.
 *  - partial: each witness contributes the skyline of its overlap with
 *    the query, computed cache-only. The union of the contributions is
 *    guaranteed to be in the answer, is emitted before the scan starts,
 *    and seeds the scan's window.
 *  - novel: a plain scan.
 *
 * Every answered subset/partial/novel query is cached afterwards,
 * subject to the tuple budget. Queries are processed one at a time; the
 * cache takes exclusive ownership of its index for the duration of each
 * call.
 */
class SemanticCache {
 public:
  /// budget_tuples bounds the stored result tuples; ignored for NC.
  SemanticCache(const Relation& rel, Mode mode, std::size_t budget_tuples);

  /// Answers q. When `emit` is given it receives every result tid exactly
  /// once, cache-derived tuples first; anything emitted before the scan
  /// phase is already guaranteed to be in the final answer.
  QueryOutcome execute(const Query& q, const EmitFn& emit = {});

  [[nodiscard]] Mode mode() const { return mode_; }

  /// The underlying index; throws std::logic_error in NC mode.
  [[nodiscard]] const CacheIndex& index() const;

 private:
  std::vector<Tid> answer_exact(SegId witness, const EmitFn& emit);
  std::vector<Tid> answer_subset(const Query& q,
                                 const std::vector<SegId>& witnesses,
                                 RunMetrics& metrics, const EmitFn& emit);
  std::vector<Tid> answer_partial(const Query& q,
                                  const std::vector<SegId>& witnesses,
                                  RunMetrics& metrics, const EmitFn& emit,
                                  std::vector<PartialSeed>& seeds);
  void touch_each_once(const std::vector<SegId>& used);

  const Relation* rel_;
  Mode mode_;
  std::optional<CacheIndex> index_;
};

}  // namespace skycache

#endif  // SKYCACHE_CACHE_HPP

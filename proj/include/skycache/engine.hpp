#ifndef SKYCACHE_ENGINE_HPP
#define SKYCACHE_ENGINE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "skycache/core.hpp"

namespace skycache {

/// Per-query instrumentation. base_reads counts tuples fetched by the
/// relation scan (cached tuples are not base reads); dom_tests counts
/// dominance tests along the answering path, cache-side filtering
/// included.
struct RunMetrics {
  std::uint64_t base_reads = 0;
  std::uint64_t dom_tests = 0;
  std::chrono::nanoseconds elapsed{0};

  [[nodiscard]] std::int64_t elapsed_micros() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(elapsed)
        .count();
  }
};

/**
 * Monotone scoring function for the sort phase: the sum over q of the
 * min-max normalized attribute values, with MAX attributes contributing
 * (1 - normalized). If u dominates v on q then sort_key(u) < sort_key(v);
 * ties are broken by tid when sorting. Constant columns contribute 0.
 */
double sort_key(const Relation& rel, Tid t, const Query& q);

/// Callback invoked once per skyline tuple as it is confirmed.
using EmitFn = std::function<void(Tid)>;

/**
 * Sort-filter-skyline over the relation, optionally pre-seeded with
 * tuples already known to be in the answer.
 *
 * Rows are sorted by sort_key and swept once; because the key is
 * monotone with dominance, a tuple that survives the window is a skyline
 * member for good, so `on_admit` (when given) fires as each non-seed
 * member is confirmed. Seed tids are placed in the window up front, are
 * never re-tested, and are skipped by the scan: metrics.base_reads ends
 * at N - |seed|.
 *
 * The caller must only seed true skyline members of q; debug builds
 * check the seed against the final result and throw std::logic_error on
 * a violation. Returns the full skyline, ascending by tid.
 */
std::vector<Tid> sfs_skyline(const Relation& rel, const Query& q,
                             std::span<const Tid> seed, RunMetrics& metrics,
                             const EmitFn& on_admit = {});

}  // namespace skycache

#endif  // SKYCACHE_ENGINE_HPP

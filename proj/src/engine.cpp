#include "skycache/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace skycache {

double sort_key(const Relation& rel, Tid t, const Query& q) {
  if (q.attrs.empty()) throw std::invalid_argument("query has no attributes");
  if (!rel.conforms(q.attrs))
    throw std::invalid_argument("query attribute outside relation schema");
  double key = 0.0;
  for (AttributeId a : q.attrs.to_vector()) {
    const double lo = rel.col_min(a);
    const double hi = rel.col_max(a);
    double norm = hi > lo ? (rel.value(t, a) - lo) / (hi - lo) : 0.0;
    if (rel.pref(a) == Preference::MAX) norm = 1.0 - norm;
    key += norm;
  }
  return key;
}

namespace {

#ifndef NDEBUG
void verify_seed(const Relation& rel, std::span<const AttributeId> attrs,
                 std::span<const Tid> seed, std::span<const Tid> result) {
  for (Tid s : seed) {
    for (Tid r : result) {
      if (r != s && detail::dominates_on(rel, r, s, attrs)) {
        throw std::logic_error(
            "sfs_skyline seeded with a tuple that is not a skyline member");
      }
    }
  }
}
#endif

}  // namespace

std::vector<Tid> sfs_skyline(const Relation& rel, const Query& q,
                             std::span<const Tid> seed, RunMetrics& metrics,
                             const EmitFn& on_admit) {
  if (q.attrs.empty()) throw std::invalid_argument("query has no attributes");
  if (!rel.conforms(q.attrs))
    throw std::invalid_argument("query attribute outside relation schema");
  const auto attrs = q.attrs.to_vector();
  const Tid n = static_cast<Tid>(rel.size());

  std::vector<std::uint8_t> seeded(n, 0);
  for (Tid s : seed) seeded[s] = 1;

  // Sort all rows by (key, tid). Seed rows are ordered too: they form the
  // initial window and strong dominators belong near the front.
  std::vector<std::pair<double, Tid>> order;
  order.reserve(n);
  for (Tid t = 0; t < n; ++t) order.emplace_back(sort_key(rel, t, q), t);
  std::sort(order.begin(), order.end());

  std::vector<Tid> window;
  window.reserve(seed.size() + 64);
  for (const auto& [key, t] : order) {
    if (seeded[t]) window.push_back(t);
  }

  for (const auto& [key, t] : order) {
    if (seeded[t]) continue;
    ++metrics.base_reads;
    bool dominated = false;
    for (Tid w : window) {
      ++metrics.dom_tests;
      if (detail::dominates_on(rel, w, t, attrs)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      window.push_back(t);
      if (on_admit) on_admit(t);
    }
  }

#ifndef NDEBUG
  verify_seed(rel, attrs, seed, window);
#endif

  std::sort(window.begin(), window.end());
  return window;
}

}  // namespace skycache

#ifndef SKYCACHE_DATA_HPP
#define SKYCACHE_DATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skycache/core.hpp"

namespace skycache {

/// Synthetic dataset parameters. Equal seeds produce bit-identical
/// relations.
struct GenSpec {
  std::size_t n = 100000;
  std::size_t d = 6;
  std::uint64_t rng_seed = 1;
};

/// Workload parameters. With probability repeat_prob a query repeats a
/// uniformly chosen earlier one; otherwise it is a fresh uniform random
/// attribute subset with size uniform in [min_attrs, max_attrs].
struct WorkloadSpec {
  std::size_t count = 100;
  std::size_t min_attrs = 2;
  std::size_t max_attrs = 0;  // 0 means the relation dimensionality
  double repeat_prob = 0.3;
  std::uint64_t rng_seed = 1;
};

/// n rows of d attributes, each value i.i.d. uniform on [0,1), duplicates
/// dropped. Preferences default to all-MIN when not given.
Relation generate(const GenSpec& spec, std::vector<Preference> prefs = {});

/// Outcome of a CSV load: the relation plus how many raw rows were
/// dropped for a missing or unparseable value in a selected column.
struct LoadResult {
  Relation relation;
  std::size_t dropped_rows = 0;
};

/**
 * Loads selected columns of a header-bearing CSV file. The order of
 * `columns` defines the attribute ids. Rows missing a value in any
 * selected column are dropped and counted; exact duplicates are removed
 * by the relation itself. Throws std::runtime_error on an unreadable
 * file, an unknown column name, an empty selection, or zero surviving
 * rows.
 */
LoadResult load_csv(const std::string& path,
                    const std::vector<std::string>& columns,
                    std::vector<Preference> prefs = {});

/// Deterministic query workload over attributes 0..d-1.
std::vector<Query> make_workload(const WorkloadSpec& spec, std::size_t d);

/// Parses a workload file: one query per line as comma-separated
/// attribute ids; blank lines skipped. Throws std::runtime_error on
/// malformed lines or ids outside 0..d-1.
std::vector<Query> load_workload(const std::string& path, std::size_t d);

/// Writes the relation as CSV with a col0..col{d-1} header; the inverse
/// of load_csv over all columns.
void save_csv(const Relation& rel, const std::string& path);

}  // namespace skycache

#endif  // SKYCACHE_DATA_HPP

#include "skycache/data.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace skycache {

namespace {

// mt19937_64 output mapped to [0,1) by hand so the stream is identical
// on every platform, which uniform_real_distribution does not promise.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& token, double& out) {
  const std::string t = trimmed(token);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) return false;
  return std::isfinite(out);
}

}  // namespace

Relation generate(const GenSpec& spec, std::vector<Preference> prefs) {
  if (spec.n < 1 || spec.d < 1)
    throw std::invalid_argument("generation needs n >= 1 and d >= 1");
  std::mt19937_64 rng(spec.rng_seed);
  std::vector<std::vector<double>> rows(spec.n);
  for (auto& row : rows) {
    row.resize(spec.d);
    for (double& v : row) v = next_unit(rng);
  }
  return Relation::from_rows(std::move(rows), spec.d, std::move(prefs));
}

LoadResult load_csv(const std::string& path,
                    const std::vector<std::string>& columns,
                    std::vector<Preference> prefs) {
  if (columns.empty()) throw std::runtime_error("no columns selected");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("dataset file has no header row: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  std::vector<std::size_t> picks;
  picks.reserve(columns.size());
  for (const std::string& name : columns) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) {
                             return trimmed(h) == name;
                           });
    if (it == header.end())
      throw std::runtime_error("unknown column name: " + name);
    picks.push_back(static_cast<std::size_t>(it - header.begin()));
  }

  std::vector<std::vector<double>> rows;
  std::size_t dropped = 0;
  while (std::getline(in, line)) {
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    std::vector<double> row(picks.size());
    bool ok = true;
    for (std::size_t i = 0; i < picks.size() && ok; ++i) {
      ok = picks[i] < cells.size() && parse_double(cells[picks[i]], row[i]);
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error("no usable rows in dataset file: " + path);

  LoadResult out{Relation::from_rows(std::move(rows), columns.size(),
                                     std::move(prefs)),
                 dropped};
  return out;
}

std::vector<Query> make_workload(const WorkloadSpec& spec, std::size_t d) {
  if (d < 1) throw std::invalid_argument("workload needs d >= 1");
  const std::size_t max_attrs = spec.max_attrs == 0 ? d : spec.max_attrs;
  if (spec.min_attrs < 1 || spec.min_attrs > max_attrs || max_attrs > d)
    throw std::invalid_argument("workload needs 1 <= min <= max <= d");
  if (spec.repeat_prob < 0.0 || spec.repeat_prob > 1.0)
    throw std::invalid_argument("repeat probability must be in [0,1]");

  std::mt19937_64 rng(spec.rng_seed);
  std::vector<AttributeId> pool(d);
  for (std::size_t i = 0; i < d; ++i) pool[i] = static_cast<AttributeId>(i);

  std::vector<Query> queries;
  queries.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    if (!queries.empty() && next_unit(rng) < spec.repeat_prob) {
      const std::size_t pick = static_cast<std::size_t>(
          rng() % static_cast<std::uint64_t>(queries.size()));
      queries.push_back(queries[pick]);
      continue;
    }
    const std::size_t span = max_attrs - spec.min_attrs + 1;
    const std::size_t size =
        spec.min_attrs +
        static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(span));
    // Partial Fisher-Yates: the first `size` entries become the query.
    for (std::size_t j = 0; j < size; ++j) {
      const std::size_t k =
          j + static_cast<std::size_t>(
                  rng() % static_cast<std::uint64_t>(d - j));
      std::swap(pool[j], pool[k]);
    }
    AttrSet attrs;
    for (std::size_t j = 0; j < size; ++j) attrs.insert(pool[j]);
    queries.push_back(Query{attrs});
  }
  return queries;
}

std::vector<Query> load_workload(const std::string& path, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload file: " + path);
  std::vector<Query> queries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    AttrSet attrs;
    for (const std::string& cell : split_csv_line(line)) {
      const std::string t = trimmed(cell);
      unsigned long id = 0;
      try {
        id = std::stoul(t);
      } catch (const std::exception&) {
        throw std::runtime_error("bad attribute id '" + t + "' at line " +
                                 std::to_string(lineno));
      }
      if (id >= d)
        throw std::runtime_error("attribute id " + t +
                                 " outside relation at line " +
                                 std::to_string(lineno));
      attrs.insert(static_cast<AttributeId>(id));
    }
    if (attrs.empty())
      throw std::runtime_error("empty query at line " + std::to_string(lineno));
    queries.push_back(Query{attrs});
  }
  return queries;
}

void save_csv(const Relation& rel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  for (std::size_t a = 0; a < rel.dim(); ++a) {
    if (a > 0) out << ',';
    out << "col" << a;
  }
  out << '\n';
  out.precision(17);
  for (Tid t = 0; t < static_cast<Tid>(rel.size()); ++t) {
    for (std::size_t a = 0; a < rel.dim(); ++a) {
      if (a > 0) out << ',';
      out << rel.value(t, static_cast<AttributeId>(a));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace skycache

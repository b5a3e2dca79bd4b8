#include "skycache/index.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace skycache {

namespace {

std::vector<Tid> sorted_unique(std::vector<Tid> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Tid> set_minus(const std::vector<Tid>& a,
                           const std::vector<Tid>& b) {
  std::vector<Tid> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

void fail(const std::string& what) { throw std::logic_error(what); }

}  // namespace

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::EXACT:
      return "exact";
    case QueryKind::SUBSET:
      return "subset";
    case QueryKind::PARTIAL:
      return "partial";
    case QueryKind::NOVEL:
      return "novel";
  }
  return "?";
}

double replacement_value(std::uint64_t alpha, std::size_t dims,
                         std::size_t beta) {
  if (beta == 0) fail("replacement value of an empty skyline");
  return static_cast<double>(alpha) * static_cast<double>(dims) /
         static_cast<double>(beta);
}

CacheIndex::CacheIndex(std::size_t budget_tuples, bool flat)
    : budget_(budget_tuples), flat_(flat) {}

SemanticSegment& CacheIndex::seg(SegId s) {
  auto it = segments_.find(s);
  if (it == segments_.end()) fail("dangling segment reference");
  return it->second;
}

const SemanticSegment& CacheIndex::cseg(SegId s) const {
  auto it = segments_.find(s);
  if (it == segments_.end()) fail("dangling segment reference");
  return it->second;
}

const SemanticSegment& CacheIndex::segment(SegId s) const { return cseg(s); }

bool CacheIndex::contains(SegId s) const { return segments_.count(s) != 0; }

std::optional<SegId> CacheIndex::find(AttrSet attrs) const {
  for (const auto& [id, s] : segments_) {
    if (s.attrs == attrs) return id;
  }
  return std::nullopt;
}

std::vector<SegId> CacheIndex::segment_ids() const {
  std::vector<SegId> ids;
  ids.reserve(segments_.size());
  for (const auto& [id, s] : segments_) ids.push_back(id);
  return ids;
}

Classification CacheIndex::search(AttrSet q) const {
  Classification out;
  std::optional<SegId> exact;
  std::vector<SegId> supersets;
  std::vector<SegId> partial_roots;
  std::unordered_set<SegId> visited;

  // Bit-vector guided descent below a containing node: only children
  // carrying every attribute of q can contain or equal it.
  auto descend = [&](auto&& self, SegId node) -> void {
    const SemanticSegment& s = cseg(node);
    const std::size_t nc = s.children.size();
    if (nc == 0) return;
    std::vector<bool> candidate(nc, true);
    for (AttributeId a : q.to_vector()) {
      const auto& bv = s.bit_vectors.at(a);
      for (std::size_t j = 0; j < nc; ++j) {
        candidate[j] = candidate[j] && bv[j];
      }
    }
    for (std::size_t j = 0; j < nc && !exact; ++j) {
      if (!candidate[j]) continue;
      SegId child = s.children[j];
      if (!visited.insert(child).second) continue;
      const SemanticSegment& c = cseg(child);
      if (c.attrs == q) {
        exact = child;
        return;
      }
      supersets.push_back(child);
      self(self, child);
    }
  };

  for (SegId r : roots_) {
    const SemanticSegment& s = cseg(r);
    if (s.attrs == q) {
      exact = r;
      break;
    }
    if (q.strict_subset_of(s.attrs)) {
      supersets.push_back(r);
      descend(descend, r);
      if (exact) break;
    } else if (q.intersects(s.attrs)) {
      partial_roots.push_back(r);
    }
  }

  if (exact) {
    out.kind = QueryKind::EXACT;
    out.witnesses = {*exact};
  } else if (!supersets.empty()) {
    out.kind = QueryKind::SUBSET;
    out.witnesses = std::move(supersets);
  } else if (!partial_roots.empty()) {
    out.kind = QueryKind::PARTIAL;
    out.witnesses = std::move(partial_roots);
  }
  return out;
}

std::vector<Tid> CacheIndex::reconstruct(SegId s) const {
  std::vector<Tid> out;
  std::vector<SegId> stack{s};
  std::unordered_set<SegId> visited{s};
  while (!stack.empty()) {
    const SemanticSegment& cur = cseg(stack.back());
    stack.pop_back();
    out.insert(out.end(), cur.residual.begin(), cur.residual.end());
    for (SegId c : cur.children) {
      if (visited.insert(c).second) stack.push_back(c);
    }
  }
  return sorted_unique(std::move(out));
}

void CacheIndex::touch(SegId s) {
  std::vector<SegId> stack{s};
  std::unordered_set<SegId> visited{s};
  while (!stack.empty()) {
    SemanticSegment& cur = seg(stack.back());
    stack.pop_back();
    ++cur.alpha;
    for (SegId c : cur.children) {
      if (visited.insert(c).second) stack.push_back(c);
    }
  }
}

void CacheIndex::touch_single(SegId s) { ++seg(s).alpha; }

void CacheIndex::add_child(SegId parent, SegId child) {
  SemanticSegment& p = seg(parent);
  SemanticSegment& c = seg(child);
  if (std::find(p.children.begin(), p.children.end(), child) !=
      p.children.end()) {
    return;
  }
  if (!c.attrs.strict_subset_of(p.attrs))
    fail("index edge must go from strict superset to strict subset");
  p.children.push_back(child);
  for (AttributeId a : p.attrs.to_vector()) {
    p.bit_vectors[a].push_back(c.attrs.contains(a));
  }
  c.parents.insert(
      std::upper_bound(c.parents.begin(), c.parents.end(), parent), parent);
}

void CacheIndex::remove_child(SegId parent, SegId child) {
  SemanticSegment& p = seg(parent);
  auto it = std::find(p.children.begin(), p.children.end(), child);
  if (it == p.children.end()) fail("removing an edge that does not exist");
  const std::size_t j = static_cast<std::size_t>(it - p.children.begin());
  p.children.erase(it);
  for (auto& [a, bv] : p.bit_vectors) {
    bv.erase(bv.begin() + static_cast<std::ptrdiff_t>(j));
  }
  SemanticSegment& c = seg(child);
  auto pit = std::find(c.parents.begin(), c.parents.end(), parent);
  if (pit != c.parents.end()) c.parents.erase(pit);
}

std::vector<Tid> CacheIndex::children_coverage(SegId s) const {
  std::vector<Tid> cover;
  for (SegId c : cseg(s).children) {
    auto r = reconstruct(c);
    cover.insert(cover.end(), r.begin(), r.end());
  }
  return sorted_unique(std::move(cover));
}

SegId CacheIndex::place_linked(AttrSet attrs, std::vector<Tid> skyline,
                               const std::vector<SegId>& parents) {
  const SegId id = next_id_++;
  SemanticSegment node;
  node.id = id;
  node.attrs = attrs;
  node.alpha = 1;
  segments_.emplace(id, std::move(node));

  if (parents.empty()) {
    roots_.push_back(id);
    // Roots swallowed by the new query become its children.
    const std::vector<SegId> old_roots = roots_;
    for (SegId r : old_roots) {
      if (r == id) continue;
      if (cseg(r).attrs.strict_subset_of(attrs)) {
        roots_.erase(std::find(roots_.begin(), roots_.end(), r));
        add_child(id, r);
      }
    }
  } else {
    for (SegId p : parents) {
      const std::vector<SegId> siblings = cseg(p).children;
      for (SegId c : siblings) {
        if (cseg(c).attrs.strict_subset_of(attrs)) {
          remove_child(p, c);
          add_child(id, c);
        }
      }
      add_child(p, id);
    }
  }

  seg(id).residual = set_minus(skyline, children_coverage(id));
  for (SegId p : parents) {
    SemanticSegment& ps = seg(p);
    ps.residual = set_minus(ps.residual, skyline);
  }
  recompute_used();
  return id;
}

SegId CacheIndex::place(AttrSet attrs, std::vector<Tid> skyline) {
  if (flat_) {
    const SegId id = next_id_++;
    SemanticSegment node;
    node.id = id;
    node.attrs = attrs;
    node.alpha = 1;
    node.residual = std::move(skyline);
    segments_.emplace(id, std::move(node));
    roots_.push_back(id);
    recompute_used();
    return id;
  }
  Classification cls = search(attrs);
  std::vector<SegId> parents;
  if (cls.kind == QueryKind::SUBSET) {
    // Attach below the minimal supersets only; larger witnesses reach the
    // new node through them or keep it as an indirect descendant.
    for (SegId w : cls.witnesses) {
      bool minimal = true;
      for (SegId other : cls.witnesses) {
        if (other != w &&
            cseg(other).attrs.strict_subset_of(cseg(w).attrs)) {
          minimal = false;
          break;
        }
      }
      if (minimal) parents.push_back(w);
    }
  }
  return place_linked(attrs, std::move(skyline), parents);
}

InsertResult CacheIndex::insert_segment(AttrSet attrs,
                                        std::vector<Tid> full_skyline,
                                        std::span<const PartialSeed> seeds) {
  if (attrs.empty())
    throw std::invalid_argument("segment needs a non-empty attribute set");
  if (full_skyline.empty())
    throw std::invalid_argument("refusing to cache an empty skyline");
  if (find(attrs))
    fail("segment with identical attribute set already cached");

  const CacheIndex snapshot = *this;
  full_skyline = sorted_unique(std::move(full_skyline));
  const SegId id = place(attrs, std::move(full_skyline));

  if (!flat_) {
    for (const PartialSeed& seed : seeds) {
      if (seed.attrs.empty() || !seed.attrs.strict_subset_of(attrs))
        fail("partial seed must be a strict subset of the inserted query");
      if (find(seed.attrs)) continue;  // already cached, nothing to add
      place_linked(seed.attrs, sorted_unique(seed.skyline),
                   {seed.witness, id});
    }
  }

  InsertResult result;
  result.evicted = evict(0, id);
  if (used_ > budget_) {
    *this = snapshot;
    return InsertResult{};
  }
  result.id = id;
  return result;
}

void CacheIndex::delete_root(SegId s) {
  const SemanticSegment& node = cseg(s);
  if (!node.is_root()) fail("only root segments can be deleted");

  const std::vector<SegId> children = node.children;
  for (SegId c : children) {
    SemanticSegment& cs = seg(c);
    auto it = std::find(cs.parents.begin(), cs.parents.end(), s);
    cs.parents.erase(it);
  }
  roots_.erase(std::find(roots_.begin(), roots_.end(), s));
  segments_.erase(s);
  // Orphaned children surface as roots, in the old child order.
  for (SegId c : children) {
    if (cseg(c).parents.empty()) roots_.push_back(c);
  }
  recompute_used();
}

double CacheIndex::replacement_value(SegId s) const {
  const SemanticSegment& node = cseg(s);
  return skycache::replacement_value(node.alpha, node.attrs.size(),
                                     reconstruct(s).size());
}

std::vector<SegId> CacheIndex::evict(std::size_t needed,
                                     std::optional<SegId> protect) {
  std::vector<SegId> evicted;
  while (used_ + needed > budget_) {
    std::optional<SegId> victim;
    double victim_delta = 0.0;
    for (SegId r : roots_) {
      if (protect && r == *protect) continue;
      const double delta = replacement_value(r);
      if (!victim || delta < victim_delta ||
          (delta == victim_delta && r < *victim)) {
        victim = r;
        victim_delta = delta;
      }
    }
    if (!victim) break;
    delete_root(*victim);
    evicted.push_back(*victim);
  }
  return evicted;
}

void CacheIndex::recompute_used() {
  used_ = 0;
  for (const auto& [id, s] : segments_) used_ += s.residual.size();
}

std::string CacheIndex::dump() const {
  std::ostringstream out;
  out << "pseudo-root children=[";
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (i > 0) out << ',';
    out << roots_[i];
  }
  out << "]\n";
  for (const auto& [id, s] : segments_) {
    out << 'S' << id << " attrs=" << s.attrs.to_string()
        << " |residual|=" << s.residual.size() << " alpha=" << s.alpha
        << " children=[";
    for (std::size_t i = 0; i < s.children.size(); ++i) {
      if (i > 0) out << ',';
      out << s.children[i];
    }
    out << "]\n";
  }
  return out.str();
}

void CacheIndex::validate() const {
  std::unordered_set<SegId> root_set(roots_.begin(), roots_.end());
  if (root_set.size() != roots_.size()) fail("duplicate root entry");

  for (const auto& [id, s] : segments_) {
    if (s.id != id) fail("segment id mismatch");
    if (s.attrs.empty()) fail("segment with empty attribute set");
    if (s.alpha < 1) fail("usage factor below 1");
    if (!std::is_sorted(s.residual.begin(), s.residual.end()) ||
        std::adjacent_find(s.residual.begin(), s.residual.end()) !=
            s.residual.end()) {
      fail("residual not sorted-unique");
    }
    if (s.is_root() != (root_set.count(id) != 0))
      fail("root list and parent links disagree");
    if (flat_ && !s.children.empty()) fail("flat cache must not link");

    for (const auto& [oid, other] : segments_) {
      if (oid != id && other.attrs == s.attrs)
        fail("two segments share an attribute set");
    }

    // Parent/child symmetry and strict-subset edges.
    for (SegId c : s.children) {
      const SemanticSegment& cs = cseg(c);
      if (!cs.attrs.strict_subset_of(s.attrs))
        fail("edge does not go to a strict subset");
      if (std::find(cs.parents.begin(), cs.parents.end(), id) ==
          cs.parents.end()) {
        fail("child does not point back to parent");
      }
    }
    for (SegId p : s.parents) {
      const SemanticSegment& ps = cseg(p);
      if (std::find(ps.children.begin(), ps.children.end(), id) ==
          ps.children.end()) {
        fail("parent does not list child");
      }
    }

    // Bit vectors match the children's attribute sets exactly.
    for (const auto& [a, bv] : s.bit_vectors) {
      if (!s.attrs.contains(a)) fail("bit vector for foreign attribute");
      if (bv.size() != s.children.size()) fail("bit vector length mismatch");
    }
    for (AttributeId a : s.attrs.to_vector()) {
      auto it = s.bit_vectors.find(a);
      if (s.children.empty()) {
        if (it != s.bit_vectors.end() && !it->second.empty())
          fail("bit vector for childless segment");
        continue;
      }
      if (it == s.bit_vectors.end()) fail("missing bit vector");
      for (std::size_t j = 0; j < s.children.size(); ++j) {
        if (it->second[j] != cseg(s.children[j]).attrs.contains(a))
          fail("bit vector bit disagrees with child attributes");
      }
    }

    // No redundancy along edges: the residual never repeats anything
    // reachable through a child.
    for (SegId c : s.children) {
      const auto below = reconstruct(c);
      std::vector<Tid> overlap;
      std::set_intersection(s.residual.begin(), s.residual.end(),
                            below.begin(), below.end(),
                            std::back_inserter(overlap));
      if (!overlap.empty()) fail("residual overlaps a child reconstruction");
    }
  }

  // Acyclicity and reachability from the pseudo root.
  std::unordered_set<SegId> done;
  std::unordered_set<SegId> in_progress;
  auto dfs = [&](auto&& self, SegId v) -> void {
    if (done.count(v)) return;
    if (!in_progress.insert(v).second) fail("cycle in the segment DAG");
    for (SegId c : cseg(v).children) self(self, c);
    in_progress.erase(v);
    done.insert(v);
  };
  for (SegId r : roots_) dfs(dfs, r);
  if (done.size() != segments_.size())
    fail("segment unreachable from the pseudo root");

  std::size_t total = 0;
  for (const auto& [id, s] : segments_) total += s.residual.size();
  if (total != used_) fail("stored-tuple accounting is stale");
  if (used_ > budget_) fail("stored tuples exceed the budget");
}

}  // namespace skycache

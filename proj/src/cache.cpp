#include "skycache/cache.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <unordered_set>

namespace skycache {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::NC:
      return "nc";
    case Mode::NI:
      return "ni";
    case Mode::INDEX:
      return "index";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view token) {
  if (token == "nc") return Mode::NC;
  if (token == "ni") return Mode::NI;
  if (token == "index") return Mode::INDEX;
  return std::nullopt;
}

SemanticCache::SemanticCache(const Relation& rel, Mode mode,
                             std::size_t budget_tuples)
    : rel_(&rel), mode_(mode) {
  if (mode != Mode::NC) {
    index_.emplace(budget_tuples, /*flat=*/mode == Mode::NI);
  }
}

const CacheIndex& SemanticCache::index() const {
  if (!index_) throw std::logic_error("no cache index in NC mode");
  return *index_;
}

void SemanticCache::touch_each_once(const std::vector<SegId>& used) {
  // A query may consume several witnesses whose sub-DAGs overlap; each
  // contributing segment still counts one use per answered query.
  std::unordered_set<SegId> bumped;
  std::vector<SegId> stack;
  for (SegId w : used) {
    stack.push_back(w);
    while (!stack.empty()) {
      SegId cur = stack.back();
      stack.pop_back();
      if (!bumped.insert(cur).second) continue;
      for (SegId c : index_->segment(cur).children) stack.push_back(c);
    }
  }
  for (SegId s : bumped) index_->touch_single(s);
}

std::vector<Tid> SemanticCache::answer_exact(SegId witness,
                                             const EmitFn& emit) {
  std::vector<Tid> result = index_->reconstruct(witness);
  touch_each_once({witness});
  if (emit) {
    for (Tid t : result) emit(t);
  }
  return result;
}

std::vector<Tid> SemanticCache::answer_subset(
    const Query& q, const std::vector<SegId>& witnesses, RunMetrics& metrics,
    const EmitFn& emit) {
  if (witnesses.empty())
    throw std::logic_error("subset answering requires at least one witness");

  // The true answer lies in every witness's result, so the candidates
  // are their intersection, and dominators of any non-answer candidate
  // are already inside it.
  std::vector<Tid> candidates = index_->reconstruct(witnesses.front());
  for (std::size_t i = 1; i < witnesses.size(); ++i) {
    const std::vector<Tid> other = index_->reconstruct(witnesses[i]);
    std::vector<Tid> merged;
    std::set_intersection(candidates.begin(), candidates.end(), other.begin(),
                          other.end(), std::back_inserter(merged));
    candidates = std::move(merged);
  }

  std::vector<Tid> result =
      skyline_within(*rel_, candidates, q.attrs, &metrics.dom_tests);
  touch_each_once(witnesses);
  if (emit) {
    for (Tid t : result) emit(t);
  }
  return result;
}

std::vector<Tid> SemanticCache::answer_partial(
    const Query& q, const std::vector<SegId>& witnesses, RunMetrics& metrics,
    const EmitFn& emit, std::vector<PartialSeed>& seeds) {
  std::vector<Tid> base;
  for (SegId w : witnesses) {
    const AttrSet overlap = q.attrs & index_->segment(w).attrs;
    const std::vector<Tid> stored = index_->reconstruct(w);
    std::vector<Tid> contribution;
    if (overlap == index_->segment(w).attrs) {
      // The query covers the whole witness, so its entire skyline is in
      // the answer as-is.
      contribution = stored;
    } else {
      contribution =
          skyline_within(*rel_, stored, overlap, &metrics.dom_tests);
      seeds.push_back(PartialSeed{w, overlap, contribution});
    }
    base.insert(base.end(), contribution.begin(), contribution.end());
  }
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  touch_each_once(witnesses);

  // Everything in the base set is final: hand it out before the first
  // base read, then let the scan fill in the rest.
  if (emit) {
    for (Tid t : base) emit(t);
  }
  return sfs_skyline(*rel_, q, base, metrics, emit);
}

QueryOutcome SemanticCache::execute(const Query& q, const EmitFn& emit) {
  if (q.attrs.empty()) throw std::invalid_argument("query has no attributes");
  if (!rel_->conforms(q.attrs))
    throw std::invalid_argument("query attribute outside relation schema");

  const auto started = std::chrono::steady_clock::now();
  QueryOutcome out;

  if (mode_ == Mode::NC) {
    out.result = sfs_skyline(*rel_, q, {}, out.metrics, emit);
  } else {
    out.cls = index_->search(q.attrs);
    std::vector<PartialSeed> seeds;
    switch (out.cls.kind) {
      case QueryKind::EXACT:
        out.result = answer_exact(out.cls.witnesses.front(), emit);
        break;
      case QueryKind::SUBSET:
        out.result = answer_subset(q, out.cls.witnesses, out.metrics, emit);
        break;
      case QueryKind::PARTIAL:
        out.result =
            answer_partial(q, out.cls.witnesses, out.metrics, emit, seeds);
        break;
      case QueryKind::NOVEL:
        out.result = sfs_skyline(*rel_, q, {}, out.metrics, emit);
        break;
    }
    if (out.cls.kind != QueryKind::EXACT && !out.result.empty()) {
      InsertResult ins = index_->insert_segment(q.attrs, out.result, seeds);
      out.inserted = ins.id.has_value();
      out.insertion_refused = !ins.id.has_value();
      out.evictions = ins.evicted.size();
    }
    out.cache_used = index_->used();
  }

  out.metrics.elapsed = std::chrono::steady_clock::now() - started;
  return out;
}

}  // namespace skycache

// Scoring: span P/R/F1, per-attribute and all-attributes-correct scores,
// docTimeRel, and container relations plain and post-closure. All counts are
// micro-averaged: per-document tallies are pooled before any division.

#ifndef CTE_METRICS_HPP
#define CTE_METRICS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cte/annotation.hpp"
#include "cte/closure.hpp"

namespace cte {

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& what) : Error(what) {}
};

enum class MatchMode { Exact, Overlap };
enum class EntityKind { Timex, Event };

inline std::string_view to_string(EntityKind k) {
  return k == EntityKind::Timex ? "timex" : "event";
}

struct PRFScore {
  std::size_t true_positive_count = 0;
  std::size_t system_count = 0;
  std::size_t gold_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const PRFScore&) const = default;
};

struct AccuracyScore {
  std::size_t correct_count = 0;
  std::size_t total_count = 0;
  double accuracy = 0.0;

  bool operator==(const AccuracyScore&) const = default;
};

// P = tp/system, R = tp/gold, F1 = 2PR/(P+R). An empty side scores 0 against
// a non-empty one; two empty sets count as perfect agreement.
inline PRFScore prf(std::size_t tp, std::size_t sys_n, std::size_t gold_n) {
  if (tp > sys_n || tp > gold_n)
    throw std::invalid_argument("prf: tp " + std::to_string(tp) + " exceeds a set size");
  PRFScore s;
  s.true_positive_count = tp;
  s.system_count = sys_n;
  s.gold_count = gold_n;
  if (sys_n == 0 && gold_n == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = sys_n ? static_cast<double>(tp) / static_cast<double>(sys_n) : 0.0;
  s.recall = gold_n ? static_cast<double>(tp) / static_cast<double>(gold_n) : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

inline AccuracyScore make_accuracy(std::size_t correct, std::size_t total) {
  if (correct > total)
    throw std::invalid_argument("accuracy: correct exceeds total");
  AccuracyScore s;
  s.correct_count = correct;
  s.total_count = total;
  s.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 1.0;
  return s;
}

namespace detail {

inline const Span& span_of(const Document& doc, EntityKind kind, std::size_t i) {
  return kind == EntityKind::Timex ? doc.timexes[i].span : doc.events[i].span;
}

inline std::size_t entity_count(const Document& doc, EntityKind kind) {
  return kind == EntityKind::Timex ? doc.timexes.size() : doc.events.size();
}

inline const std::string& id_of(const Document& doc, EntityKind kind, std::size_t i) {
  return kind == EntityKind::Timex ? doc.timexes[i].id : doc.events[i].id;
}

}  // namespace detail

// Serialized attribute value used for equality checks. Absent timex values
// return nullopt, which matches nothing but another absent value.
inline std::optional<std::string> attribute_of(const TimexEntity& t, std::string_view name) {
  if (name == "type") return std::string(to_string(t.type));
  if (name == "value") return t.value;
  throw std::invalid_argument("unknown timex attribute '" + std::string(name) + "'");
}

inline std::optional<std::string> attribute_of(const EventEntity& e, std::string_view name) {
  if (name == "type") return std::string(to_string(e.type));
  if (name == "polarity") return std::string(to_string(e.polarity));
  if (name == "degree") return std::string(to_string(e.degree));
  if (name == "modality") return std::string(to_string(e.modality));
  if (name == "docTimeRel") return std::string(to_string(e.doc_time_rel));
  throw std::invalid_argument("unknown event attribute '" + std::string(name) + "'");
}

inline std::optional<std::string> attribute_of(const Document& doc, EntityKind kind,
                                               std::size_t i, std::string_view name) {
  return kind == EntityKind::Timex ? attribute_of(doc.timexes[i], name)
                                   : attribute_of(doc.events[i], name);
}

// The attributes scored for each kind. docTimeRel is deliberately absent from
// the event list: it is its own subtask.
inline const std::vector<std::string>& attribute_names(EntityKind kind) {
  static const std::vector<std::string> timex_attrs = {"type", "value"};
  static const std::vector<std::string> event_attrs = {"type", "polarity", "degree", "modality"};
  return kind == EntityKind::Timex ? timex_attrs : event_attrs;
}

inline bool is_known_attribute(EntityKind kind, std::string_view name) {
  if (kind == EntityKind::Event && name == "docTimeRel") return true;
  const auto& names = attribute_names(kind);
  return std::find(names.begin(), names.end(), name) != names.end();
}

struct MatchedPair {
  std::size_t sys_index = 0;
  std::size_t gold_index = 0;
};

// Pairs system entities with gold entities of one kind.
//
// Exact mode pairs identical spans. Overlap mode builds a one-to-one matching
// greedily over all overlapping pairs sorted by overlap length (descending),
// then system begin, system end, gold begin, gold end (ascending); each
// entity is used at most once.
inline std::vector<MatchedPair> match_entities(const Document& sys, const Document& gold,
                                               EntityKind kind, MatchMode mode) {
  if (sys.doc_id != gold.doc_id || sys.text != gold.text)
    throw AlignmentError("match_entities: documents differ (system '" + sys.doc_id +
                         "' vs gold '" + gold.doc_id + "')");

  const std::size_t n_sys = detail::entity_count(sys, kind);
  const std::size_t n_gold = detail::entity_count(gold, kind);
  std::vector<MatchedPair> pairs;

  if (mode == MatchMode::Exact) {
    std::map<Span, std::size_t> gold_by_span;
    for (std::size_t g = 0; g < n_gold; ++g) gold_by_span[detail::span_of(gold, kind, g)] = g;
    for (std::size_t s = 0; s < n_sys; ++s) {
      auto it = gold_by_span.find(detail::span_of(sys, kind, s));
      if (it != gold_by_span.end()) pairs.push_back({s, it->second});
    }
    return pairs;
  }

  struct Candidate {
    std::size_t len;
    Span sys_span;
    Span gold_span;
    std::size_t sys_index;
    std::size_t gold_index;
  };
  std::vector<Candidate> candidates;
  for (std::size_t s = 0; s < n_sys; ++s) {
    const Span& ss = detail::span_of(sys, kind, s);
    for (std::size_t g = 0; g < n_gold; ++g) {
      const Span& gs = detail::span_of(gold, kind, g);
      const std::size_t len = ss.overlap_length(gs);
      if (len > 0) candidates.push_back({len, ss, gs, s, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tuple(b.len, a.sys_span.begin, a.sys_span.end, a.gold_span.begin,
                      a.gold_span.end) <
           std::tuple(a.len, b.sys_span.begin, b.sys_span.end, b.gold_span.begin,
                      b.gold_span.end);
  });

  std::vector<bool> sys_used(n_sys, false), gold_used(n_gold, false);
  for (const Candidate& c : candidates) {
    if (sys_used[c.sys_index] || gold_used[c.gold_index]) continue;
    sys_used[c.sys_index] = true;
    gold_used[c.gold_index] = true;
    pairs.push_back({c.sys_index, c.gold_index});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.sys_index < b.sys_index; });
  return pairs;
}

namespace detail {

struct DocPair {
  const Document* sys;  // null when the gold document has no system counterpart
  const Document* gold;
};

// Gold is authoritative: every system document must exist in gold; gold
// documents without system output score zero true positives.
inline std::vector<DocPair> align_documents(const Corpus& sys, const Corpus& gold) {
  std::map<std::string_view, const Document*> sys_by_id;
  for (const Document& d : sys.documents) sys_by_id[d.doc_id] = &d;

  std::set<std::string_view> gold_ids;
  for (const Document& d : gold.documents) gold_ids.insert(d.doc_id);
  for (const Document& d : sys.documents)
    if (!gold_ids.count(d.doc_id))
      throw AlignmentError("system document '" + d.doc_id + "' does not exist in the gold corpus");

  std::vector<DocPair> out;
  out.reserve(gold.documents.size());
  for (const Document& g : gold.documents) {
    auto it = sys_by_id.find(g.doc_id);
    out.push_back({it == sys_by_id.end() ? nullptr : it->second, &g});
  }
  return out;
}

// Requires identical entity id sets with identical spans per id, the
// precondition for accuracy-form scoring (scenarios where spans are given).
inline void require_shared_entities(const Document& sys, const Document& gold, EntityKind kind) {
  const std::size_t n = entity_count(gold, kind);
  if (entity_count(sys, kind) != n)
    throw AlignmentError("document '" + gold.doc_id + "': system has " +
                         std::to_string(entity_count(sys, kind)) + " " +
                         std::string(to_string(kind)) + " entities, gold has " +
                         std::to_string(n));
  std::map<std::string_view, const Span*> gold_spans;
  for (std::size_t g = 0; g < n; ++g)
    gold_spans[id_of(gold, kind, g)] = &span_of(gold, kind, g);
  for (std::size_t s = 0; s < n; ++s) {
    auto it = gold_spans.find(id_of(sys, kind, s));
    if (it == gold_spans.end())
      throw AlignmentError("document '" + gold.doc_id + "': system " +
                           std::string(to_string(kind)) + " id '" + id_of(sys, kind, s) +
                           "' does not exist in gold");
    if (*it->second != span_of(sys, kind, s))
      throw AlignmentError("document '" + gold.doc_id + "': system span for id '" +
                           id_of(sys, kind, s) + "' differs from gold");
  }
}

// Entity index by id for accuracy-form lookups.
inline std::map<std::string_view, std::size_t> index_by_id(const Document& doc, EntityKind kind) {
  std::map<std::string_view, std::size_t> out;
  for (std::size_t i = 0; i < entity_count(doc, kind); ++i) out[id_of(doc, kind, i)] = i;
  return out;
}

}  // namespace detail

// TS / ES: span identification, micro-averaged over documents.
inline PRFScore score_spans(const Corpus& sys, const Corpus& gold, EntityKind kind,
                            MatchMode mode) {
  std::size_t tp = 0, sys_n = 0, gold_n = 0;
  for (const detail::DocPair& p : detail::align_documents(sys, gold)) {
    gold_n += detail::entity_count(*p.gold, kind);
    if (!p.sys) continue;
    sys_n += detail::entity_count(*p.sys, kind);
    tp += match_entities(*p.sys, *p.gold, kind, mode).size();
  }
  return prf(tp, sys_n, gold_n);
}

enum class ScoreForm { PRF, Accuracy };

namespace detail {

// Shared machinery for attribute scoring. `correct` decides whether a
// system/gold entity pair agrees.
template <typename AgreeFn>
inline PRFScore score_pairs_prf(const Corpus& sys, const Corpus& gold, EntityKind kind,
                                MatchMode mode, AgreeFn&& correct) {
  std::size_t tp = 0, sys_n = 0, gold_n = 0;
  for (const DocPair& p : align_documents(sys, gold)) {
    gold_n += entity_count(*p.gold, kind);
    if (!p.sys) continue;
    sys_n += entity_count(*p.sys, kind);
    for (const MatchedPair& m : match_entities(*p.sys, *p.gold, kind, mode))
      if (correct(*p.sys, m.sys_index, *p.gold, m.gold_index)) ++tp;
  }
  return prf(tp, sys_n, gold_n);
}

template <typename AgreeFn>
inline AccuracyScore score_pairs_accuracy(const Corpus& sys, const Corpus& gold, EntityKind kind,
                                          AgreeFn&& correct) {
  std::size_t n_correct = 0, total = 0;
  for (const DocPair& p : align_documents(sys, gold)) {
    if (!p.sys)
      throw AlignmentError("document '" + p.gold->doc_id +
                           "' has no system output; accuracy scoring requires shared entities");
    require_shared_entities(*p.sys, *p.gold, kind);
    const auto sys_index = index_by_id(*p.sys, kind);
    for (std::size_t g = 0; g < entity_count(*p.gold, kind); ++g) {
      ++total;
      const std::size_t s = sys_index.at(id_of(*p.gold, kind, g));
      if (correct(*p.sys, s, *p.gold, g)) ++n_correct;
    }
  }
  return make_accuracy(n_correct, total);
}

}  // namespace detail

struct Score {
  ScoreForm form = ScoreForm::PRF;
  PRFScore prf;
  AccuracyScore accuracy;

  bool operator==(const Score&) const = default;

  static Score from(PRFScore s) { return {ScoreForm::PRF, s, {}}; }
  static Score from(AccuracyScore s) { return {ScoreForm::Accuracy, {}, s}; }
  // Every score collapses to one headline number: F1 for PRF rows, the
  // accuracy itself otherwise.
  double headline() const { return form == ScoreForm::PRF ? prf.f1 : accuracy.accuracy; }
};

// TA / EA, one attribute. PRF form counts a matched pair as a true positive
// iff the attribute values are equal, over full entity-count denominators.
// Accuracy form compares per entity id over shared entity sets.
inline Score score_attribute(const Corpus& sys, const Corpus& gold, EntityKind kind,
                             std::string_view attribute, MatchMode mode, ScoreForm form) {
  if (!is_known_attribute(kind, attribute))
    throw std::invalid_argument("unknown " + std::string(to_string(kind)) + " attribute '" +
                                std::string(attribute) + "'");
  auto agree = [&](const Document& s, std::size_t si, const Document& g, std::size_t gi) {
    return attribute_of(s, kind, si, attribute) == attribute_of(g, kind, gi, attribute);
  };
  if (form == ScoreForm::PRF)
    return Score::from(detail::score_pairs_prf(sys, gold, kind, mode, agree));
  return Score::from(detail::score_pairs_accuracy(sys, gold, kind, agree));
}

// TA / EA overall: an entity pair is correct only if every attribute of the
// kind matches (docTimeRel excluded; it is scored as DR).
inline Score score_all_attributes(const Corpus& sys, const Corpus& gold, EntityKind kind,
                                  MatchMode mode, ScoreForm form) {
  auto agree = [&](const Document& s, std::size_t si, const Document& g, std::size_t gi) {
    for (const std::string& name : attribute_names(kind))
      if (attribute_of(s, kind, si, name) != attribute_of(g, kind, gi, name)) return false;
    return true;
  };
  if (form == ScoreForm::PRF)
    return Score::from(detail::score_pairs_prf(sys, gold, kind, mode, agree));
  return Score::from(detail::score_pairs_accuracy(sys, gold, kind, agree));
}

// DR: docTimeRel over events, same mechanics as a single attribute.
inline Score score_doc_time_rel(const Corpus& sys, const Corpus& gold, MatchMode mode,
                                ScoreForm form) {
  return score_attribute(sys, gold, EntityKind::Event, "docTimeRel", mode, form);
}

enum class ClosureScoring {
  Off,         // plain relation sets
  BothClosed,  // close system and gold, score on the post-closure sets
  Asymmetric   // precision against closed gold, recall of gold against closed system
};

namespace detail {

// Entities correspond across system and gold by kind + exact span; a relation
// whose endpoint has no gold twin can never be a true positive.
struct EntityKey {
  int kind;  // 0 timex, 1 event
  std::size_t begin, end;
  auto operator<=>(const EntityKey&) const = default;
};
using RelationKey = std::pair<EntityKey, EntityKey>;

inline std::map<std::string_view, EntityKey> entity_keys(const Document& doc) {
  std::map<std::string_view, EntityKey> out;
  for (const TimexEntity& t : doc.timexes) out[t.id] = {0, t.span.begin, t.span.end};
  for (const EventEntity& e : doc.events) out[e.id] = {1, e.span.begin, e.span.end};
  return out;
}

inline std::set<RelationKey> relation_keys(const RelationGraph& g,
                                           const std::map<std::string_view, EntityKey>& keys) {
  std::set<RelationKey> out;
  for (const auto& [from, to] : g.edges) out.emplace(keys.at(from), keys.at(to));
  return out;
}

inline std::string cycle_to_string(const std::vector<std::string>& cycle) {
  std::string path;
  for (const std::string& id : cycle) {
    if (!path.empty()) path += " -> ";
    path += id;
  }
  return path;
}

}  // namespace detail

// CR: container relations, plain or closure-based. An inconsistent gold graph
// is a hard error; an inconsistent system graph is repaired by scoring its
// condensation closure and reported through `warnings`.
inline PRFScore score_relations(const Corpus& sys, const Corpus& gold, ClosureScoring closure,
                                std::vector<std::string>* warnings = nullptr) {
  std::size_t tp = 0, sys_n = 0, gold_n = 0;
  std::size_t recall_tp = 0;  // asymmetric mode only

  for (const detail::DocPair& p : detail::align_documents(sys, gold)) {
    const RelationGraph gold_graph = RelationGraph::from_document(*p.gold);
    const ConsistencyResult gold_ok = check_consistency(gold_graph);
    if (!gold_ok.consistent)
      throw InconsistencyError("gold document '" + p.gold->doc_id +
                                   "' has a CONTAINS cycle: " +
                                   detail::cycle_to_string(*gold_ok.witness_cycle),
                               gold_ok);

    const auto gold_keys = detail::entity_keys(*p.gold);
    const std::set<detail::RelationKey> gold_plain =
        detail::relation_keys(gold_graph, gold_keys);

    std::set<detail::RelationKey> sys_plain, sys_closed;
    RelationGraph sys_graph;
    bool sys_consistent = true;
    if (p.sys) {
      sys_graph = RelationGraph::from_document(*p.sys);
      const auto sys_keys = detail::entity_keys(*p.sys);
      sys_plain = detail::relation_keys(sys_graph, sys_keys);
      const ConsistencyResult sys_ok = check_consistency(sys_graph);
      sys_consistent = sys_ok.consistent;
      if (!sys_consistent && warnings)
        warnings->push_back("document '" + p.gold->doc_id +
                            "': system CONTAINS graph has a cycle (" +
                            detail::cycle_to_string(*sys_ok.witness_cycle) +
                            "); scored on its condensation closure");
      if (closure != ClosureScoring::Off)
        sys_closed = detail::relation_keys(
            sys_consistent ? close_contains(sys_graph) : close_contains_condensed(sys_graph),
            sys_keys);
    }

    auto intersection_size = [](const std::set<detail::RelationKey>& a,
                                const std::set<detail::RelationKey>& b) {
      std::size_t n = 0;
      for (const auto& k : a)
        if (b.count(k)) ++n;
      return n;
    };

    switch (closure) {
      case ClosureScoring::Off: {
        sys_n += sys_plain.size();
        gold_n += gold_plain.size();
        tp += intersection_size(sys_plain, gold_plain);
        break;
      }
      case ClosureScoring::BothClosed: {
        const std::set<detail::RelationKey> gold_closed =
            detail::relation_keys(close_contains(gold_graph), gold_keys);
        sys_n += sys_closed.size();
        gold_n += gold_closed.size();
        tp += intersection_size(sys_closed, gold_closed);
        break;
      }
      case ClosureScoring::Asymmetric: {
        const std::set<detail::RelationKey> gold_closed =
            detail::relation_keys(close_contains(gold_graph), gold_keys);
        sys_n += sys_plain.size();
        gold_n += gold_plain.size();
        tp += intersection_size(sys_plain, gold_closed);
        recall_tp += intersection_size(gold_plain, sys_closed);
        break;
      }
    }
  }

  if (closure != ClosureScoring::Asymmetric) return prf(tp, sys_n, gold_n);

  // Asymmetric: P = |sys ∩ closed(gold)| / |sys|, R = |gold ∩ closed(sys)| / |gold|.
  PRFScore s;
  s.true_positive_count = tp;
  s.system_count = sys_n;
  s.gold_count = gold_n;
  if (sys_n == 0 && gold_n == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = sys_n ? static_cast<double>(tp) / static_cast<double>(sys_n) : 0.0;
  s.recall = gold_n ? static_cast<double>(recall_tp) / static_cast<double>(gold_n) : 0.0;
  s.f1 = (s.precision + s.recall) > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace cte

#endif  // CTE_METRICS_HPP

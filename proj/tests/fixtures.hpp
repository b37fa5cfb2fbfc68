// Shared builders for hand-made documents plus the seeded system-output
// perturber used by the dominance property tests.

#ifndef CTE_TESTS_FIXTURES_HPP
#define CTE_TESTS_FIXTURES_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cte/annotation.hpp"

namespace ctetest {

inline cte::TimexEntity mk_timex(std::string id, std::size_t begin, std::size_t end,
                                 cte::TimexType type = cte::TimexType::Date,
                                 std::optional<std::string> value = std::string("2010-01-01")) {
  cte::TimexEntity t;
  t.id = std::move(id);
  t.span = {begin, end};
  t.type = type;
  t.value = std::move(value);
  return t;
}

inline cte::EventEntity mk_event(std::string id, std::size_t begin, std::size_t end,
                                 cte::DocTimeRel dtr = cte::DocTimeRel::Before,
                                 cte::Polarity polarity = cte::Polarity::Pos,
                                 cte::EventType type = cte::EventType::NA,
                                 cte::Degree degree = cte::Degree::NA,
                                 cte::Modality modality = cte::Modality::Actual) {
  cte::EventEntity e;
  e.id = std::move(id);
  e.span = {begin, end};
  e.type = type;
  e.polarity = polarity;
  e.degree = degree;
  e.modality = modality;
  e.doc_time_rel = dtr;
  return e;
}

inline cte::Document mk_doc(std::string doc_id, std::string patient_id, std::string text) {
  cte::Document d;
  d.doc_id = std::move(doc_id);
  d.patient_id = std::move(patient_id);
  d.text = std::move(text);
  d.dct = {2010, 6, 15};
  if (!d.text.empty()) d.sentences.push_back({0, d.text.size()});
  return d;
}

// Random edits that keep the corpus structurally valid: entity drops, small
// span shifts, attribute flips, relation drops and random additions (which
// may introduce cycles into the system graph, never into gold).
inline cte::Corpus perturb(const cte::Corpus& gold, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  cte::Corpus sys = gold;
  for (cte::Document& doc : sys.documents) {
    std::set<std::string> dropped;

    std::vector<cte::EventEntity> events;
    for (cte::EventEntity& e : doc.events) {
      if (rng() % 100 < 15) {
        dropped.insert(e.id);
        continue;
      }
      events.push_back(std::move(e));
    }
    doc.events = std::move(events);

    std::vector<cte::TimexEntity> timexes;
    for (cte::TimexEntity& t : doc.timexes) {
      if (rng() % 100 < 10) {
        dropped.insert(t.id);
        continue;
      }
      timexes.push_back(std::move(t));
    }
    doc.timexes = std::move(timexes);

    const std::size_t text_len = cte::utf8_length(doc.text);
    std::set<cte::Span> event_spans, timex_spans;
    for (const cte::EventEntity& e : doc.events) event_spans.insert(e.span);
    for (const cte::TimexEntity& t : doc.timexes) timex_spans.insert(t.span);

    auto shift = [&](cte::Span span, std::set<cte::Span>& used) {
      if (rng() % 100 >= 20) return span;
      cte::Span moved = span;
      const std::size_t delta = 1 + rng() % 2;
      if (rng() % 2) {
        moved.begin = moved.begin >= delta ? moved.begin - delta : 0;
      } else {
        moved.end = std::min(moved.end + delta, text_len);
      }
      if (moved.begin >= moved.end || used.count(moved)) return span;
      used.erase(span);
      used.insert(moved);
      return moved;
    };

    for (cte::EventEntity& e : doc.events) {
      e.span = shift(e.span, event_spans);
      if (rng() % 100 < 30) {
        switch (rng() % 5) {
          case 0: e.type = static_cast<cte::EventType>(rng() % 3); break;
          case 1: e.polarity = static_cast<cte::Polarity>(rng() % 2); break;
          case 2: e.degree = static_cast<cte::Degree>(rng() % 3); break;
          case 3: e.modality = static_cast<cte::Modality>(rng() % 4); break;
          default: e.doc_time_rel = static_cast<cte::DocTimeRel>(rng() % 4); break;
        }
      }
    }
    for (cte::TimexEntity& t : doc.timexes) {
      t.span = shift(t.span, timex_spans);
      if (rng() % 100 < 20) t.type = static_cast<cte::TimexType>(rng() % 6);
      if (rng() % 100 < 20) t.value = "altered." + std::to_string(rng() % 100);
    }

    std::set<std::pair<std::string, std::string>> kept;
    std::vector<cte::ContainerRelation> relations;
    for (cte::ContainerRelation& r : doc.relations) {
      if (dropped.count(r.source) || dropped.count(r.target)) continue;
      if (rng() % 100 < 20) continue;
      kept.emplace(r.source, r.target);
      relations.push_back(std::move(r));
    }
    std::vector<std::string> ids;
    for (const cte::TimexEntity& t : doc.timexes) ids.push_back(t.id);
    for (const cte::EventEntity& e : doc.events) ids.push_back(e.id);
    if (ids.size() >= 2) {
      const std::size_t n_new = rng() % 3;
      for (std::size_t i = 0; i < n_new; ++i) {
        const std::string& a = ids[rng() % ids.size()];
        const std::string& b = ids[rng() % ids.size()];
        if (a == b || kept.count({a, b})) continue;
        kept.emplace(a, b);
        relations.push_back({a, b});
      }
    }
    doc.relations = std::move(relations);
  }
  return sys;
}

}  // namespace ctetest

#endif  // CTE_TESTS_FIXTURES_HPP

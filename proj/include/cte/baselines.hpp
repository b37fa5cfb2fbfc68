// The three baseline systems: memorization tagging for spans and attributes,
// majority-class / memorization docTimeRel assignment, and closest-timex
// container linking.

#ifndef CTE_BASELINES_HPP
#define CTE_BASELINES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cte/annotation.hpp"
#include "cte/text.hpp"

namespace cte {

struct TimexBundle {
  TimexType type = TimexType::Date;
  std::optional<std::string> value;

  bool operator==(const TimexBundle&) const = default;
};

struct EventBundle {
  EventType type = EventType::NA;
  Polarity polarity = Polarity::Pos;
  Degree degree = Degree::NA;
  Modality modality = Modality::Actual;
  DocTimeRel doc_time_rel = DocTimeRel::Before;  // memorized for the DR variant

  bool operator==(const EventBundle&) const = default;
};

inline std::string serialize_bundle(const TimexBundle& b) {
  return std::string(to_string(b.type)) + "|" + (b.value ? *b.value : "-");
}

inline std::string serialize_bundle(const EventBundle& b) {
  return std::string(to_string(b.type)) + "|" + std::string(to_string(b.polarity)) + "|" +
         std::string(to_string(b.degree)) + "|" + std::string(to_string(b.modality)) + "|" +
         std::string(to_string(b.doc_time_rel));
}

// Surface-string lexicon built from training annotations. Keys are case
// folded unless the lexicon was trained case sensitively. Per surface and
// kind the most frequent bundle wins; ties go to the lexicographically
// smaller serialized bundle.
struct MemorizationLexicon {
  template <typename Bundle>
  struct Entry {
    Bundle bundle;
    std::size_t frequency = 0;

    bool operator==(const Entry&) const = default;
  };

  bool case_sensitive = false;
  std::map<std::string, Entry<TimexBundle>> timexes;
  std::map<std::string, Entry<EventBundle>> events;
  // Surfaces seen as both a timex and an event in training.
  std::vector<std::string> kind_conflicts;

  std::string fold(std::string_view surface) const {
    return case_sensitive ? std::string(surface) : fold_ascii_utf8(surface);
  }
};

namespace detail {

template <typename Bundle>
void tally(std::map<std::string, std::map<std::string, std::pair<Bundle, std::size_t>>>& counts,
           const std::string& surface, const Bundle& bundle) {
  auto& per_bundle = counts[surface];
  auto [it, inserted] = per_bundle.emplace(serialize_bundle(bundle), std::make_pair(bundle, 0));
  ++it->second.second;
}

template <typename Bundle>
std::map<std::string, MemorizationLexicon::Entry<Bundle>> pick_winners(
    const std::map<std::string, std::map<std::string, std::pair<Bundle, std::size_t>>>& counts) {
  std::map<std::string, MemorizationLexicon::Entry<Bundle>> out;
  for (const auto& [surface, per_bundle] : counts) {
    const std::pair<const std::string, std::pair<Bundle, std::size_t>>* best = nullptr;
    for (const auto& candidate : per_bundle) {
      // Map order is lexicographic on the serialized bundle, so the first
      // candidate at the maximal count is the tie-break winner.
      if (!best || candidate.second.second > best->second.second) best = &candidate;
    }
    out[surface] = {best->second.first, best->second.second};
  }
  return out;
}

}  // namespace detail

// Records each annotated entity's exact surface text under its kind and full
// attribute bundle (events include docTimeRel).
inline MemorizationLexicon train_memorizer(const Corpus& train, bool case_sensitive = false) {
  std::map<std::string, std::map<std::string, std::pair<TimexBundle, std::size_t>>> timex_counts;
  std::map<std::string, std::map<std::string, std::pair<EventBundle, std::size_t>>> event_counts;

  MemorizationLexicon lex;
  lex.case_sensitive = case_sensitive;

  for (const Document& doc : train.documents) {
    const std::u32string text = decode_utf8(doc.text);
    auto surface_at = [&](const Span& span) {
      std::string s = encode_utf8(std::u32string_view(text).substr(span.begin, span.length()));
      return lex.fold(s);
    };
    for (const TimexEntity& t : doc.timexes)
      detail::tally(timex_counts, surface_at(t.span), TimexBundle{t.type, t.value});
    for (const EventEntity& e : doc.events)
      detail::tally(event_counts, surface_at(e.span),
                    EventBundle{e.type, e.polarity, e.degree, e.modality, e.doc_time_rel});
  }

  lex.timexes = detail::pick_winners(timex_counts);
  lex.events = detail::pick_winners(event_counts);
  for (const auto& [surface, entry] : lex.timexes)
    if (lex.events.count(surface)) lex.kind_conflicts.push_back(surface);
  return lex;
}

// Inspection dump: surface, kind, serialized bundle, frequency; tab
// separated and sorted by surface then kind.
inline std::string dump_lexicon(const MemorizationLexicon& lex) {
  struct Row {
    std::string surface, kind, bundle;
    std::size_t frequency;
  };
  std::vector<Row> rows;
  for (const auto& [surface, entry] : lex.events)
    rows.push_back({surface, "event", serialize_bundle(entry.bundle), entry.frequency});
  for (const auto& [surface, entry] : lex.timexes)
    rows.push_back({surface, "timex", serialize_bundle(entry.bundle), entry.frequency});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.surface, a.kind) < std::tie(b.surface, b.kind);
  });
  std::string out;
  for (const Row& r : rows)
    out += r.surface + "\t" + r.kind + "\t" + r.bundle + "\t" + std::to_string(r.frequency) + "\n";
  return out;
}

namespace detail {

// Lexicon surfaces grouped by first code point, longest first, for the
// left-to-right longest-match scan.
struct SurfaceIndex {
  struct Item {
    std::u32string surface;
    int kind;  // 0 timex, 1 event
  };
  std::map<char32_t, std::vector<Item>> by_first;

  explicit SurfaceIndex(const MemorizationLexicon& lex) {
    for (const auto& [surface, entry] : lex.timexes) add(surface, 0);
    for (const auto& [surface, entry] : lex.events) add(surface, 1);
    for (auto& [first, items] : by_first)
      std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        return std::tuple(b.surface.size(), a.surface, a.kind) <
               std::tuple(a.surface.size(), b.surface, b.kind);
      });
  }

  void add(std::string_view surface, int kind) {
    const std::u32string decoded = decode_utf8(surface);
    if (!decoded.empty()) by_first[decoded.front()].push_back({decoded, kind});
  }
};

}  // namespace detail

// Retags raw text with the lexicon: scan left to right, take the longest
// surface that matches at word boundaries, emit an entity with the stored
// bundle, and resume after the match. Events win length ties against
// timexes. Existing annotations on the document are ignored.
inline std::pair<std::vector<TimexEntity>, std::vector<EventEntity>> apply_memorizer(
    const MemorizationLexicon& lex, const Document& doc) {
  const std::u32string text = decode_utf8(doc.text);
  const std::u32string folded = lex.case_sensitive ? text : fold_ascii(text);
  const detail::SurfaceIndex index(lex);

  std::vector<TimexEntity> timexes;
  std::vector<EventEntity> events;

  const std::size_t n = folded.size();
  std::size_t i = 0;
  while (i < n) {
    if (i > 0 && is_word_char(folded[i - 1])) {
      ++i;  // a match starting here would not abut a word boundary
      continue;
    }
    std::size_t best_len = 0;
    int best_kind = -1;
    const std::u32string* best_surface = nullptr;
    auto group = index.by_first.find(folded[i]);
    if (group != index.by_first.end()) {
      for (const auto& item : group->second) {
        const std::size_t len = item.surface.size();
        if (len < best_len) break;  // sorted longest first; only ties remain
        if (i + len > n) continue;
        if (folded.compare(i, len, item.surface) != 0) continue;
        if (i + len < n && is_word_char(folded[i + len])) continue;  // end not at a boundary
        if (len > best_len || (len == best_len && item.kind > best_kind)) {
          best_len = len;
          best_kind = item.kind;
          best_surface = &item.surface;
        }
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    const Span span{i, i + best_len};
    const std::string key = encode_utf8(*best_surface);
    if (best_kind == 0) {
      const auto& entry = lex.timexes.at(key);
      TimexEntity t;
      t.id = "t" + std::to_string(timexes.size());
      t.span = span;
      t.type = entry.bundle.type;
      t.value = entry.bundle.value;
      timexes.push_back(std::move(t));
    } else {
      const auto& entry = lex.events.at(key);
      EventEntity e;
      e.id = "e" + std::to_string(events.size());
      e.span = span;
      e.type = entry.bundle.type;
      e.polarity = entry.bundle.polarity;
      e.degree = entry.bundle.degree;
      e.modality = entry.bundle.modality;
      e.doc_time_rel = entry.bundle.doc_time_rel;
      events.push_back(std::move(e));
    }
    i += best_len;
  }
  return {std::move(timexes), std::move(events)};
}

// Majority docTimeRel class; ties break in the fixed label order
// BEFORE < OVERLAP < AFTER < BEFORE-OR-OVERLAP.
struct MajorityDr {
  DocTimeRel label = DocTimeRel::Before;
  std::map<DocTimeRel, std::size_t> training_counts;
};

inline MajorityDr train_dr_majority(const Corpus& train) {
  MajorityDr out;
  for (const Document& doc : train.documents)
    for (const EventEntity& e : doc.events) ++out.training_counts[e.doc_time_rel];
  if (out.training_counts.empty())
    throw Error("cannot train a docTimeRel majority baseline on a corpus with no events");
  std::size_t best = 0;
  for (DocTimeRel label : {DocTimeRel::Before, DocTimeRel::Overlap, DocTimeRel::After,
                           DocTimeRel::BeforeOrOverlap}) {
    const auto it = out.training_counts.find(label);
    if (it != out.training_counts.end() && it->second > best) {
      best = it->second;
      out.label = label;
    }
  }
  return out;
}

// Relabels docTimeRel: memorized label when the surface is known (and a
// lexicon was supplied), otherwise the majority label.
inline std::vector<EventEntity> apply_dr(const MajorityDr& majority,
                                         const MemorizationLexicon* lex,
                                         const std::string& text_utf8,
                                         std::vector<EventEntity> events) {
  const std::u32string text = decode_utf8(text_utf8);
  for (EventEntity& e : events) {
    e.doc_time_rel = majority.label;
    if (!lex) continue;
    const std::string surface =
        lex->fold(encode_utf8(std::u32string_view(text).substr(e.span.begin, e.span.length())));
    const auto it = lex->events.find(surface);
    if (it != lex->events.end()) e.doc_time_rel = it->second.bundle.doc_time_rel;
  }
  return events;
}

// Deterministic fallback segmenter for documents without sentence spans:
// split after . ? or ! followed by whitespace and an ASCII uppercase letter.
inline std::vector<Span> fallback_sentences(const std::string& text_utf8) {
  const std::u32string text = decode_utf8(text_utf8);
  std::vector<Span> out;
  const std::size_t n = text.size();
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (text[i] != '.' && text[i] != '?' && text[i] != '!') continue;
    std::size_t j = i + 1;
    while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\n' || text[j] == '\r'))
      ++j;
    if (j == i + 1 || j >= n || !(text[j] >= 'A' && text[j] <= 'Z')) continue;
    out.push_back({start, i + 1});
    start = j;
    i = j - 1;
  }
  if (start < n) out.push_back({start, n});
  return out;
}

// Links every event to the closest time expression within its sentence:
// gap 0 when spans overlap, otherwise the distance between the nearest span
// edges; equidistant candidates resolve to the preceding timex. Emitted
// relations read timex CONTAINS event.
inline std::vector<ContainerRelation> link_closest_time(const Document& doc) {
  const std::vector<Span> sentences =
      doc.sentences.empty() ? fallback_sentences(doc.text) : doc.sentences;

  std::vector<ContainerRelation> out;
  for (const EventEntity& e : doc.events) {
    const Span* sentence = nullptr;
    for (const Span& s : sentences)
      if (s.contains(e.span)) {
        sentence = &s;
        break;
      }
    if (!sentence) continue;

    const TimexEntity* best = nullptr;
    std::tuple<std::size_t, int, std::size_t, std::size_t> best_key;
    for (const TimexEntity& t : doc.timexes) {
      if (!sentence->contains(t.span)) continue;
      std::size_t gap = 0;
      if (!t.span.overlaps(e.span))
        gap = t.span.end <= e.span.begin ? e.span.begin - t.span.end : t.span.begin - e.span.end;
      const bool preceding = t.span.begin < e.span.begin;
      const auto key = std::tuple(gap, preceding ? 0 : 1, t.span.begin, t.span.end);
      if (!best || key < best_key) {
        best = &t;
        best_key = key;
      }
    }
    if (best) out.push_back({best->id, e.id});
  }
  return out;
}

}  // namespace cte

#endif  // CTE_BASELINES_HPP

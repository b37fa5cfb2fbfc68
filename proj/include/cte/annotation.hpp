// Annotation data model for clinical temporal information extraction:
// time expressions, events, CONTAINS relations, documents and corpora,
// plus structural validation.
//
// All types are immutable value types in spirit: nothing here mutates shared
// state, and every operation is a pure function of its inputs.

#ifndef CTE_ANNOTATION_HPP
#define CTE_ANNOTATION_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cte/text.hpp"

namespace cte {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UnknownIdError : public Error {
 public:
  explicit UnknownIdError(const std::string& what) : Error(what) {}
};

// Half-open character-offset interval [begin, end) into the document text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool contains(const Span& other) const { return begin <= other.begin && other.end <= end; }
  bool overlaps(const Span& other) const {
    return std::max(begin, other.begin) < std::min(end, other.end);
  }
  // Characters shared with another span.
  std::size_t overlap_length(const Span& other) const {
    const std::size_t lo = std::max(begin, other.begin);
    const std::size_t hi = std::min(end, other.end);
    return lo < hi ? hi - lo : 0;
  }

  auto operator<=>(const Span&) const = default;
};

enum class TimexType { Date, Time, Duration, Quantifier, PrePostExp, Set };
enum class EventType { NA, Aspectual, Evidential };
enum class Polarity { Pos, Neg };
enum class Degree { NA, Most, Little };
enum class Modality { Actual, Hedged, Hypothetical, Generic };
// Declaration order doubles as the fixed tie-break order for majority voting.
enum class DocTimeRel { Before, Overlap, After, BeforeOrOverlap };

inline std::string_view to_string(TimexType v) {
  switch (v) {
    case TimexType::Date: return "DATE";
    case TimexType::Time: return "TIME";
    case TimexType::Duration: return "DURATION";
    case TimexType::Quantifier: return "QUANTIFIER";
    case TimexType::PrePostExp: return "PREPOSTEXP";
    case TimexType::Set: return "SET";
  }
  return "?";
}

inline std::string_view to_string(EventType v) {
  switch (v) {
    case EventType::NA: return "NA";
    case EventType::Aspectual: return "ASPECTUAL";
    case EventType::Evidential: return "EVIDENTIAL";
  }
  return "?";
}

inline std::string_view to_string(Polarity v) {
  return v == Polarity::Pos ? "POS" : "NEG";
}

inline std::string_view to_string(Degree v) {
  switch (v) {
    case Degree::NA: return "NA";
    case Degree::Most: return "MOST";
    case Degree::Little: return "LITTLE";
  }
  return "?";
}

inline std::string_view to_string(Modality v) {
  switch (v) {
    case Modality::Actual: return "ACTUAL";
    case Modality::Hedged: return "HEDGED";
    case Modality::Hypothetical: return "HYPOTHETICAL";
    case Modality::Generic: return "GENERIC";
  }
  return "?";
}

inline std::string_view to_string(DocTimeRel v) {
  switch (v) {
    case DocTimeRel::Before: return "BEFORE";
    case DocTimeRel::Overlap: return "OVERLAP";
    case DocTimeRel::After: return "AFTER";
    case DocTimeRel::BeforeOrOverlap: return "BEFORE-OR-OVERLAP";
  }
  return "?";
}

inline std::optional<TimexType> timex_type_from(std::string_view s) {
  if (s == "DATE") return TimexType::Date;
  if (s == "TIME") return TimexType::Time;
  if (s == "DURATION") return TimexType::Duration;
  if (s == "QUANTIFIER") return TimexType::Quantifier;
  if (s == "PREPOSTEXP") return TimexType::PrePostExp;
  if (s == "SET") return TimexType::Set;
  return std::nullopt;
}

inline std::optional<EventType> event_type_from(std::string_view s) {
  if (s == "NA") return EventType::NA;
  if (s == "ASPECTUAL") return EventType::Aspectual;
  if (s == "EVIDENTIAL") return EventType::Evidential;
  return std::nullopt;
}

inline std::optional<Polarity> polarity_from(std::string_view s) {
  if (s == "POS") return Polarity::Pos;
  if (s == "NEG") return Polarity::Neg;
  return std::nullopt;
}

inline std::optional<Degree> degree_from(std::string_view s) {
  if (s == "NA") return Degree::NA;
  if (s == "MOST") return Degree::Most;
  if (s == "LITTLE") return Degree::Little;
  return std::nullopt;
}

inline std::optional<Modality> modality_from(std::string_view s) {
  if (s == "ACTUAL") return Modality::Actual;
  if (s == "HEDGED") return Modality::Hedged;
  if (s == "HYPOTHETICAL") return Modality::Hypothetical;
  if (s == "GENERIC") return Modality::Generic;
  return std::nullopt;
}

inline std::optional<DocTimeRel> doc_time_rel_from(std::string_view s) {
  if (s == "BEFORE") return DocTimeRel::Before;
  if (s == "OVERLAP") return DocTimeRel::Overlap;
  if (s == "AFTER") return DocTimeRel::After;
  if (s == "BEFORE-OR-OVERLAP") return DocTimeRel::BeforeOrOverlap;
  return std::nullopt;
}

// A TIMEX3 mention. The normalized value is an opaque string compared for
// exact equality; it may be absent for span-only system output, and an absent
// value never matches a present one.
struct TimexEntity {
  std::string id;
  Span span;
  TimexType type = TimexType::Date;
  std::optional<std::string> value;

  bool operator==(const TimexEntity&) const = default;
};

// An event mention with the four descriptive attributes plus its relation to
// the document creation time. docTimeRel lives here but is scored as its own
// subtask, never as part of the event-attribute bundle.
struct EventEntity {
  std::string id;
  Span span;
  EventType type = EventType::NA;
  Polarity polarity = Polarity::Pos;
  Degree degree = Degree::NA;
  Modality modality = Modality::Actual;
  DocTimeRel doc_time_rel = DocTimeRel::Overlap;

  bool operator==(const EventEntity&) const = default;
};

// Directed narrative-container edge: source CONTAINS target.
struct ContainerRelation {
  std::string source;
  std::string target;

  auto operator<=>(const ContainerRelation&) const = default;
};

// Calendar date; clinical note headers are date-stamped, no time of day.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;
};

inline bool is_valid_date(const Date& d) {
  if (d.month < 1 || d.month > 12 || d.day < 1) return false;
  static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int days = kDays[d.month - 1];
  const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) days = 29;
  return d.day <= days;
}

inline std::string to_string(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

inline std::optional<Date> date_from(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  Date d;
  d.year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
  d.month = (s[5] - '0') * 10 + (s[6] - '0');
  d.day = (s[8] - '0') * 10 + (s[9] - '0');
  if (!is_valid_date(d)) return std::nullopt;
  return d;
}

struct Document {
  std::string doc_id;
  std::string patient_id;
  std::string text;  // UTF-8; all spans are character offsets into it
  Date dct;
  std::vector<Span> sentences;
  std::vector<TimexEntity> timexes;
  std::vector<EventEntity> events;
  std::vector<ContainerRelation> relations;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;

  bool operator==(const Corpus&) const = default;
};

// A broken well-formedness rule. Violations are data, not failures.
struct Violation {
  std::string subject;  // entity/relation id, or doc-level locus
  std::string message;

  bool operator==(const Violation&) const = default;
};

namespace detail {

inline void check_span(const Span& s, std::size_t text_len, const std::string& subject,
                       std::vector<Violation>& out) {
  if (s.begin >= s.end)
    out.push_back({subject, "span [" + std::to_string(s.begin) + "," + std::to_string(s.end) +
                                ") must satisfy begin < end"});
  else if (s.end > text_len)
    out.push_back({subject, "span end " + std::to_string(s.end) + " exceeds text length " +
                                std::to_string(text_len)});
}

// Identifiers are single whitespace-free tokens in the file format.
inline void check_token(std::string_view token, const std::string& subject, const char* what,
                        std::vector<Violation>& out) {
  if (token.empty()) {
    out.push_back({subject, std::string(what) + " must be non-empty"});
    return;
  }
  for (char c : token)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      out.push_back({subject, std::string(what) + " must not contain whitespace"});
      return;
    }
}

}  // namespace detail

// Checks every structural invariant of a document's annotation set.
// Returns an empty list iff the document is well-formed. Deterministic.
inline std::vector<Violation> validate_document(const Document& doc) {
  std::vector<Violation> out;

  std::size_t text_len = doc.text.size();
  try {
    text_len = utf8_length(doc.text);
  } catch (const TextError& e) {
    out.push_back({doc.doc_id, std::string("text is not valid UTF-8: ") + e.what()});
  }

  if (!is_valid_date(doc.dct))
    out.push_back({doc.doc_id, "dct " + to_string(doc.dct) + " is not a valid calendar date"});

  detail::check_token(doc.doc_id, doc.doc_id, "doc_id", out);
  detail::check_token(doc.patient_id, doc.doc_id, "patient_id", out);

  // Sentences: sorted, non-overlapping, in bounds.
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const std::string subject = doc.doc_id + ":sentence[" + std::to_string(i) + "]";
    detail::check_span(doc.sentences[i], text_len, subject, out);
    if (i > 0 && doc.sentences[i].begin < doc.sentences[i - 1].end)
      out.push_back({subject, "sentence spans must be sorted and non-overlapping"});
  }

  // Entity ids unique across both kinds.
  std::set<std::string_view> ids;
  auto check_id = [&](const std::string& id) {
    detail::check_token(id, id, "entity id", out);
    if (!ids.insert(id).second)
      out.push_back({id, "duplicate entity id"});
  };

  std::set<Span> timex_spans;
  for (const TimexEntity& t : doc.timexes) {
    check_id(t.id);
    detail::check_span(t.span, text_len, t.id, out);
    if (!timex_spans.insert(t.span).second)
      out.push_back({t.id, "duplicate timex span [" + std::to_string(t.span.begin) + "," +
                               std::to_string(t.span.end) + ")"});
    if (t.value && t.value->empty())
      out.push_back({t.id, "timex value must be non-empty when present"});
    if (t.value && t.value->find_first_of("\n\r") != std::string::npos)
      out.push_back({t.id, "timex value must not contain line breaks"});
  }

  std::set<Span> event_spans;
  for (const EventEntity& e : doc.events) {
    check_id(e.id);
    detail::check_span(e.span, text_len, e.id, out);
    if (!event_spans.insert(e.span).second)
      out.push_back({e.id, "duplicate event span [" + std::to_string(e.span.begin) + "," +
                               std::to_string(e.span.end) + ")"});
  }

  for (const ContainerRelation& r : doc.relations) {
    const std::string subject = r.source + " CONTAINS " + r.target;
    if (r.source == r.target)
      out.push_back({subject, "relation source and target must differ"});
    if (!ids.count(r.source))
      out.push_back({subject, "relation source id '" + r.source + "' is undefined"});
    if (!ids.count(r.target))
      out.push_back({subject, "relation target id '" + r.target + "' is undefined"});
  }

  return out;
}

// Corpus-level validation: per-document checks plus doc_id uniqueness.
inline std::vector<Violation> validate_corpus(const Corpus& corpus) {
  std::vector<Violation> out;
  std::set<std::string_view> doc_ids;
  for (const Document& doc : corpus.documents) {
    if (!doc_ids.insert(doc.doc_id).second)
      out.push_back({doc.doc_id, "duplicate doc_id in corpus"});
    for (Violation& v : validate_document(doc)) out.push_back(std::move(v));
  }
  return out;
}

// Entity lookup result, tagged by kind.
using EntityRef = std::variant<const TimexEntity*, const EventEntity*>;

inline std::optional<EntityRef> find_entity(const Document& doc, std::string_view id) {
  for (const TimexEntity& t : doc.timexes)
    if (t.id == id) return EntityRef{&t};
  for (const EventEntity& e : doc.events)
    if (e.id == id) return EntityRef{&e};
  return std::nullopt;
}

// Throwing lookup; an unknown id signals a corrupt relation or a caller bug.
inline EntityRef entity_by_id(const Document& doc, std::string_view id) {
  if (auto ref = find_entity(doc, id)) return *ref;
  throw UnknownIdError("no entity with id '" + std::string(id) + "' in document " + doc.doc_id);
}

inline const Span& entity_span(const EntityRef& ref) {
  if (std::holds_alternative<const TimexEntity*>(ref))
    return std::get<const TimexEntity*>(ref)->span;
  return std::get<const EventEntity*>(ref)->span;
}

}  // namespace cte

#endif  // CTE_ANNOTATION_HPP

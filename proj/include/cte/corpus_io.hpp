// Corpus file format, patient-level train/dev/test splitting, and the
// deterministic synthetic corpus generator.
//
// Format, one document per record, UTF-8:
//   #doc <doc_id> <patient_id> <dct:YYYY-MM-DD>
//   #text <byte-length>         followed by exactly that many bytes, then \n
//   S <begin> <end>             one per sentence
//   T <id> <begin> <end> <TYPE> <value-or-"-">
//   E <id> <begin> <end> <type> <polarity> <degree> <modality> <docTimeRel>
//   R <source_id> CONTAINS <target_id>
//   (blank line terminates the record)
// Offsets are character offsets into the decoded text.

#ifndef CTE_CORPUS_IO_HPP
#define CTE_CORPUS_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cte/annotation.hpp"

namespace cte {

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<Violation> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

namespace detail {

// Cursor over raw file bytes with line accounting for error loci.
class RecordReader {
 public:
  RecordReader(std::string_view data, std::string source) : data_(data), source_(std::move(source)) {}

  bool at_end() const { return pos_ >= data_.size(); }

  // Next full line without its newline. Throws if the file ends mid-record
  // handling is left to callers (EOF returns false).
  bool next_line(std::string_view& out) {
    if (at_end()) return false;
    const std::size_t nl = data_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      out = data_.substr(pos_);
      pos_ = data_.size();
    } else {
      out = data_.substr(pos_, nl - pos_);
      pos_ = nl + 1;
    }
    ++line_;
    return true;
  }

  // Exactly n raw bytes followed by a newline (the #text payload).
  std::string_view take_bytes(std::size_t n) {
    if (pos_ + n > data_.size()) fail("text payload truncated");
    std::string_view out = data_.substr(pos_, n);
    line_ += static_cast<std::size_t>(std::count(out.begin(), out.end(), '\n'));
    pos_ += n;
    if (pos_ >= data_.size() || data_[pos_] != '\n')
      fail("expected newline after text payload");
    ++pos_;
    ++line_;
    return out;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_ + ":" + std::to_string(line_) + ": " + message);
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view data_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t sp = line.find(' ', start);
    if (sp == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, sp - start));
    start = sp + 1;
  }
  return out;
}

inline std::size_t parse_offset(const RecordReader& reader, std::string_view field) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    reader.fail("expected a non-negative integer, got '" + std::string(field) + "'");
  return value;
}

}  // namespace detail

// Parses the documented corpus format. `source` names the input in error
// messages. The result is fully validated: a structural violation anywhere
// raises ValidationError and nothing is returned.
inline Corpus parse_corpus(std::string_view data, const std::string& source = "<memory>") {
  detail::RecordReader reader(data, source);
  Corpus corpus;

  std::string_view line;
  while (reader.next_line(line)) {
    if (line.empty()) continue;  // blank lines between records

    auto fields = detail::split_fields(line);
    if (fields[0] != "#doc")
      reader.fail("expected '#doc', got '" + std::string(fields[0]) + "'");
    if (fields.size() != 4) reader.fail("'#doc' takes doc_id, patient_id and dct");

    Document doc;
    doc.doc_id = std::string(fields[1]);
    doc.patient_id = std::string(fields[2]);
    const auto dct = date_from(fields[3]);
    if (!dct) reader.fail("bad dct '" + std::string(fields[3])  + "', expected YYYY-MM-DD");
    doc.dct = *dct;

    if (!reader.next_line(line)) reader.fail("record truncated before '#text'");
    fields = detail::split_fields(line);
    if (fields[0] != "#text" || fields.size() != 2)
      reader.fail("expected '#text <byte-length>'");
    doc.text = std::string(reader.take_bytes(detail::parse_offset(reader, fields[1])));

    // Annotation lines until a blank line or end of input.
    while (reader.next_line(line)) {
      if (line.empty()) break;
      fields = detail::split_fields(line);
      const std::string_view tag = fields[0];
      if (tag == "S") {
        if (fields.size() != 3) reader.fail("'S' takes begin and end");
        doc.sentences.push_back(
            {detail::parse_offset(reader, fields[1]), detail::parse_offset(reader, fields[2])});
      } else if (tag == "T") {
        if (fields.size() < 5) reader.fail("'T' takes id, begin, end, type, value");
        TimexEntity t;
        t.id = std::string(fields[1]);
        t.span = {detail::parse_offset(reader, fields[2]), detail::parse_offset(reader, fields[3])};
        const auto type = timex_type_from(fields[4]);
        if (!type) reader.fail("unknown timex type '" + std::string(fields[4]) + "'");
        t.type = *type;
        // Value is the final field and may contain spaces; "-" means absent.
        const std::size_t value_pos = fields[0].size() + fields[1].size() + fields[2].size() +
                                      fields[3].size() + fields[4].size() + 5;
        std::string_view value = line.substr(std::min(value_pos, line.size()));
        if (value.empty()) reader.fail("'T' line is missing its value field");
        if (value != "-") t.value = std::string(value);
        doc.timexes.push_back(std::move(t));
      } else if (tag == "E") {
        if (fields.size() != 9)
          reader.fail("'E' takes id, begin, end, type, polarity, degree, modality, docTimeRel");
        EventEntity e;
        e.id = std::string(fields[1]);
        e.span = {detail::parse_offset(reader, fields[2]), detail::parse_offset(reader, fields[3])};
        const auto type = event_type_from(fields[4]);
        if (!type) reader.fail("unknown event type '" + std::string(fields[4]) + "'");
        const auto polarity = polarity_from(fields[5]);
        if (!polarity) reader.fail("unknown polarity '" + std::string(fields[5]) + "'");
        const auto degree = degree_from(fields[6]);
        if (!degree) reader.fail("unknown degree '" + std::string(fields[6]) + "'");
        const auto modality = modality_from(fields[7]);
        if (!modality) reader.fail("unknown modality '" + std::string(fields[7]) + "'");
        const auto dtr = doc_time_rel_from(fields[8]);
        if (!dtr) reader.fail("unknown docTimeRel '" + std::string(fields[8]) + "'");
        e.type = *type;
        e.polarity = *polarity;
        e.degree = *degree;
        e.modality = *modality;
        e.doc_time_rel = *dtr;
        doc.events.push_back(std::move(e));
      } else if (tag == "R") {
        if (fields.size() != 4 || fields[2] != "CONTAINS")
          reader.fail("'R' takes source, the literal CONTAINS, and target");
        doc.relations.push_back({std::string(fields[1]), std::string(fields[3])});
      } else {
        reader.fail("unknown record line tag '" + std::string(tag) + "'");
      }
    }

    corpus.documents.push_back(std::move(doc));
  }

  std::vector<Violation> violations = validate_corpus(corpus);
  if (!violations.empty()) {
    std::string what = source + ": corpus fails validation (" +
                       std::to_string(violations.size()) + " violation(s)); first: [" +
                       violations.front().subject + "] " + violations.front().message;
    throw ValidationError(what, std::move(violations));
  }
  return corpus;
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path.string());
}

// Appends one document record in canonical form: sentences by begin, the
// merged entity sequence by (begin, end, kind) with timexes before events on
// span ties, relations by (source, target).
inline void serialize_document(std::string& out, const Document& doc) {
  out += "#doc " + doc.doc_id + " " + doc.patient_id + " " + to_string(doc.dct) + "\n";
  out += "#text " + std::to_string(doc.text.size()) + "\n";
  out += doc.text;
  out += "\n";

  std::vector<Span> sentences = doc.sentences;
  std::sort(sentences.begin(), sentences.end());
  for (const Span& s : sentences)
    out += "S " + std::to_string(s.begin) + " " + std::to_string(s.end) + "\n";

  struct Line {
    Span span;
    int kind;  // 0 timex, 1 event
    std::string text;
  };
  std::vector<Line> lines;
  lines.reserve(doc.timexes.size() + doc.events.size());
  for (const TimexEntity& t : doc.timexes) {
    std::string line = "T " + t.id + " " + std::to_string(t.span.begin) + " " +
                       std::to_string(t.span.end) + " " + std::string(to_string(t.type)) + " " +
                       (t.value ? *t.value : "-");
    lines.push_back({t.span, 0, std::move(line)});
  }
  for (const EventEntity& e : doc.events) {
    std::string line = "E " + e.id + " " + std::to_string(e.span.begin) + " " +
                       std::to_string(e.span.end) + " " + std::string(to_string(e.type)) + " " +
                       std::string(to_string(e.polarity)) + " " + std::string(to_string(e.degree)) +
                       " " + std::string(to_string(e.modality)) + " " +
                       std::string(to_string(e.doc_time_rel));
    lines.push_back({e.span, 1, std::move(line)});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::tuple(a.span.begin, a.span.end, a.kind) <
           std::tuple(b.span.begin, b.span.end, b.kind);
  });
  for (const Line& l : lines) {
    out += l.text;
    out += "\n";
  }

  std::vector<ContainerRelation> relations = doc.relations;
  std::sort(relations.begin(), relations.end());
  for (const ContainerRelation& r : relations)
    out += "R " + r.source + " CONTAINS " + r.target + "\n";

  out += "\n";
}

// Canonical bytes for a corpus: documents sorted by doc_id, entities and
// relations in the order serialize_document defines. Identical corpora yield
// identical bytes.
inline std::string serialize_corpus(const Corpus& corpus) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const Document& d : corpus.documents) docs.push_back(&d);
  std::sort(docs.begin(), docs.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });
  std::string out;
  for (const Document* d : docs) serialize_document(out, *d);
  return out;
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::vector<Violation> violations = validate_corpus(corpus);
  if (!violations.empty()) {
    const std::string what = "refusing to write invalid corpus; first violation: [" +
                             violations.front().subject + "] " + violations.front().message;
    throw ValidationError(what, std::move(violations));
  }
  const std::string bytes = serialize_corpus(corpus);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

// Returns a copy with documents, entities, sentences and relations in the
// serialization order, so that read(write(c)) == canonical(c) for any valid c.
inline Corpus canonical(Corpus corpus) {
  for (Document& doc : corpus.documents) {
    std::sort(doc.sentences.begin(), doc.sentences.end());
    std::sort(doc.timexes.begin(), doc.timexes.end(),
              [](const TimexEntity& a, const TimexEntity& b) { return a.span < b.span; });
    std::sort(doc.events.begin(), doc.events.end(),
              [](const EventEntity& a, const EventEntity& b) { return a.span < b.span; });
    std::sort(doc.relations.begin(), doc.relations.end());
  }
  std::sort(corpus.documents.begin(), corpus.documents.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return corpus;
}

// ---------------------------------------------------------------------------
// Patient-level splitting

struct SplitSpec {
  double train_fraction = 0.5;
  double dev_fraction = 0.25;
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Corpus train, dev, test;
};

namespace detail {

// Deterministic Fisher-Yates; std::shuffle is implementation-defined, and the
// split must be reproducible across standard libraries.
template <typename T>
inline void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i)
    std::swap(items[i - 1], items[rng() % i]);
}

inline std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(x + 0.5);
}

}  // namespace detail

// Splits documents so that no patient crosses fold boundaries. Patient ids
// are sorted, then shuffled with the seed, then cut at round(n * cumulative
// fraction); the split therefore does not depend on document order. Fold
// sizes follow floor(fraction * n) with leftover patients going to train
// first (e.g. 8 patients -> 4/2/2, 87 -> 44/21/22).
inline SplitResult split_by_patient(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0) || !(spec.dev_fraction > 0.0) || !(spec.test_fraction > 0.0))
    throw std::invalid_argument("split fractions must be positive");
  const double sum = spec.train_fraction + spec.dev_fraction + spec.test_fraction;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split fractions must sum to 1, got " + std::to_string(sum));

  std::set<std::string> patient_set;
  for (const Document& d : corpus.documents) patient_set.insert(d.patient_id);
  if (patient_set.size() < 3)
    throw Error("split needs at least 3 distinct patients, got " +
                std::to_string(patient_set.size()));

  std::vector<std::string> patients(patient_set.begin(), patient_set.end());
  std::mt19937_64 rng(spec.seed);
  detail::deterministic_shuffle(patients, rng);

  const double n = static_cast<double>(patients.size());
  const std::size_t cut1 = detail::round_half_up(n * spec.train_fraction);
  const std::size_t cut2 = std::max(
      cut1, detail::round_half_up(n * (spec.train_fraction + spec.dev_fraction)));

  std::map<std::string_view, int> fold;  // 0 train, 1 dev, 2 test
  for (std::size_t i = 0; i < patients.size(); ++i)
    fold[patients[i]] = i < cut1 ? 0 : (i < std::min(cut2, patients.size()) ? 1 : 2);

  SplitResult result;
  for (const Document& d : corpus.documents) {
    switch (fold.at(d.patient_id)) {
      case 0: result.train.documents.push_back(d); break;
      case 1: result.dev.documents.push_back(d); break;
      default: result.test.documents.push_back(d); break;
    }
  }
  auto by_doc_id = [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; };
  std::sort(result.train.documents.begin(), result.train.documents.end(), by_doc_id);
  std::sort(result.dev.documents.begin(), result.dev.documents.end(), by_doc_id);
  std::sort(result.test.documents.begin(), result.test.documents.end(), by_doc_id);
  return result;
}

// ---------------------------------------------------------------------------
// Synthetic corpus generation

struct CountRange {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct GeneratorConfig {
  std::size_t n_patients = 8;
  CountRange notes_per_patient{2, 3};
  CountRange events_per_note{8, 12};
  CountRange timexes_per_note{2, 4};
  double relation_density = 0.3;   // fraction of events placed inside a container
  bool unambiguous_surfaces = true;
  std::uint64_t seed = 0;

  // Sized after the corpus statistics this toolkit targets: 87 patients,
  // a couple hundred notes, ~130 events and ~11 timexes per note, and
  // roughly three relations per ten events.
  static GeneratorConfig reference_scale(std::uint64_t seed) {
    GeneratorConfig c;
    c.n_patients = 87;
    c.notes_per_patient = {2, 3};
    c.events_per_note = {120, 140};
    c.timexes_per_note = {9, 13};
    c.relation_density = 0.3;
    c.unambiguous_surfaces = true;
    c.seed = seed;
    return c;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4B9B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::size_t draw(std::mt19937_64& rng, const CountRange& range) {
  return range.lo + (range.hi > range.lo ? rng() % (range.hi - range.lo + 1) : 0);
}

// Surface vocabularies. Entity surfaces always end in digits; filler words
// never contain digits, so a filler can never collide with a surface and a
// surface never matches inside a longer alphanumeric token.
inline const std::vector<std::string>& event_stems() {
  static const std::vector<std::string> stems = {
      "biopsy", "resection", "lesion",  "nausea",  "polyp",    "fever",
      "mass",   "screening", "infusion", "dose",   "referral", "swelling"};
  return stems;
}

inline const std::vector<std::string>& timex_stems() {
  static const std::vector<std::string> stems = {"day", "week", "month", "morning", "spring",
                                                 "evening"};
  return stems;
}

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "the",   "patient", "was",    "seen",   "with", "stable", "mild",
      "noted", "plan",    "status", "review", "no",   "change", "on"};
  return words;
}

inline std::string event_surface(std::size_t k) {
  const auto& stems = event_stems();
  return stems[k % stems.size()] + std::to_string(k);
}

inline std::string timex_surface(std::size_t k) {
  const auto& stems = timex_stems();
  return stems[k % stems.size()] + std::to_string(k);
}

// Attribute bundle derived from the surface index (unambiguous mode) or from
// fresh random bits (ambiguous mode).
inline void fill_event_attrs(EventEntity& e, std::uint64_t bits) {
  e.type = static_cast<EventType>(bits % 3);
  e.polarity = static_cast<Polarity>((bits >> 8) % 2);
  e.degree = static_cast<Degree>((bits >> 16) % 3);
  e.modality = static_cast<Modality>((bits >> 24) % 4);
  e.doc_time_rel = static_cast<DocTimeRel>((bits >> 32) % 4);
}

inline void fill_timex_attrs(TimexEntity& t, std::uint64_t bits, std::size_t surface_index) {
  t.type = static_cast<TimexType>(bits % 6);
  char buf[32];
  switch (t.type) {
    case TimexType::Date:
      std::snprintf(buf, sizeof(buf), "20%02d-%02d-%02d",
                    static_cast<int>((bits >> 8) % 20), static_cast<int>(1 + (bits >> 16) % 12),
                    static_cast<int>(1 + (bits >> 24) % 28));
      break;
    case TimexType::Time:
      std::snprintf(buf, sizeof(buf), "T%02d:%02d", static_cast<int>((bits >> 8) % 24),
                    static_cast<int>((bits >> 16) % 60));
      break;
    case TimexType::Duration:
      std::snprintf(buf, sizeof(buf), "P%dD", static_cast<int>(1 + (bits >> 8) % 90));
      break;
    case TimexType::Quantifier:
      std::snprintf(buf, sizeof(buf), "R%d", static_cast<int>(1 + (bits >> 8) % 9));
      break;
    case TimexType::PrePostExp:
      std::snprintf(buf, sizeof(buf), "%s", (bits >> 8) % 2 ? "PREOP" : "POSTOP");
      break;
    case TimexType::Set:
      std::snprintf(buf, sizeof(buf), "RP%dW", static_cast<int>(1 + (bits >> 8) % 8));
      break;
  }
  t.value = std::string(buf) + "." + std::to_string(surface_index);
}

}  // namespace detail

// Deterministic synthetic corpus. Relation graphs are forests by
// construction (every contained event has exactly one container that was
// created earlier in the note), so generated corpora are always consistent.
// With unambiguous_surfaces, every distinct surface string carries exactly
// one kind and attribute bundle corpus-wide.
inline Corpus generate_synthetic(const GeneratorConfig& config) {
  if (config.n_patients == 0) throw std::invalid_argument("n_patients must be positive");
  for (const CountRange* r :
       {&config.notes_per_patient, &config.events_per_note, &config.timexes_per_note}) {
    if (r->lo == 0 || r->lo > r->hi)
      throw std::invalid_argument("count ranges must be positive and ordered");
  }
  if (config.relation_density < 0.0 || config.relation_density > 1.0)
    throw std::invalid_argument("relation_density must lie in [0,1]");

  constexpr std::size_t kEventVocab = 240;
  constexpr std::size_t kTimexVocab = 40;

  std::mt19937_64 rng(config.seed);
  Corpus corpus;

  for (std::size_t pi = 0; pi < config.n_patients; ++pi) {
    char pid_buf[16];
    std::snprintf(pid_buf, sizeof(pid_buf), "p%04zu", pi);
    const std::string patient_id = pid_buf;

    const std::size_t n_notes = detail::draw(rng, config.notes_per_patient);
    for (std::size_t ni = 0; ni < n_notes; ++ni) {
      Document doc;
      doc.patient_id = patient_id;
      char doc_buf[24];
      std::snprintf(doc_buf, sizeof(doc_buf), "%s-n%02zu", patient_id.c_str(), ni);
      doc.doc_id = doc_buf;
      doc.dct = {2010 + static_cast<int>(pi % 8),
                 1 + static_cast<int>((pi * 5 + ni * 3) % 12),
                 1 + static_cast<int>((pi * 7 + ni * 11) % 28)};

      const std::size_t n_events = detail::draw(rng, config.events_per_note);
      const std::size_t n_timexes = detail::draw(rng, config.timexes_per_note);

      // Interleave the entity slots, then lay words down left to right.
      std::vector<int> slots(n_events, 1);
      slots.insert(slots.end(), n_timexes, 0);
      detail::deterministic_shuffle(slots, rng);

      std::string text;
      std::size_t sentence_start = 0, words_in_sentence = 0;
      std::size_t sentence_target = 8 + rng() % 7;

      struct Placed {
        int kind;  // 0 timex, 1 event
        std::string id;
      };
      std::vector<Placed> placed;

      auto close_sentence = [&]() {
        text += " .";
        doc.sentences.push_back({sentence_start, text.size()});
        text += "\n";
        sentence_start = text.size();
        words_in_sentence = 0;
        sentence_target = 8 + rng() % 7;
      };

      auto append_word = [&](const std::string& word) {
        if (words_in_sentence > 0) text += " ";
        const std::size_t begin = text.size();
        text += word;
        ++words_in_sentence;
        const Span span{begin, text.size()};
        if (words_in_sentence >= sentence_target) close_sentence();
        return span;
      };

      auto filler = [&]() -> std::string {
        if (!config.unambiguous_surfaces && rng() % 20 == 0) {
          // Ambiguous corpora occasionally drop a known surface into plain
          // text, unannotated.
          return rng() % 2 ? detail::event_surface(rng() % kEventVocab)
                           : detail::timex_surface(rng() % kTimexVocab);
        }
        const auto& words = detail::filler_words();
        return words[rng() % words.size()];
      };

      for (int slot_kind : slots) {
        const std::size_t n_fillers = 1 + rng() % 3;
        for (std::size_t f = 0; f < n_fillers; ++f) append_word(filler());

        if (slot_kind == 1) {
          const std::size_t k = rng() % kEventVocab;
          EventEntity e;
          e.id = "e" + std::to_string(placed.size());
          e.span = append_word(detail::event_surface(k));
          const std::uint64_t bits = config.unambiguous_surfaces
                                         ? detail::splitmix64(config.seed ^ (k * 2 + 1))
                                         : rng();
          detail::fill_event_attrs(e, bits);
          placed.push_back({1, e.id});
          doc.events.push_back(std::move(e));
        } else {
          const std::size_t k = rng() % kTimexVocab;
          TimexEntity t;
          t.id = "t" + std::to_string(placed.size());
          t.span = append_word(detail::timex_surface(k));
          const std::uint64_t bits = config.unambiguous_surfaces
                                         ? detail::splitmix64(config.seed ^ (k * 2))
                                         : rng();
          detail::fill_timex_attrs(t, bits, k);
          placed.push_back({0, t.id});
          doc.timexes.push_back(std::move(t));
        }
      }
      const std::size_t n_tail = 1 + rng() % 2;
      for (std::size_t f = 0; f < n_tail; ++f) append_word(filler());
      if (words_in_sentence > 0) close_sentence();
      doc.text = std::move(text);

      // Containment: lround(density * events) events each get one container
      // chosen among earlier entities, which keeps every graph a forest.
      const std::size_t n_contained = static_cast<std::size_t>(
          std::lround(config.relation_density * static_cast<double>(n_events)));
      std::vector<std::size_t> event_positions;
      for (std::size_t i = 0; i < placed.size(); ++i)
        if (placed[i].kind == 1) event_positions.push_back(i);
      detail::deterministic_shuffle(event_positions, rng);

      std::size_t taken = 0;
      for (std::size_t pos : event_positions) {
        if (taken >= n_contained) break;
        if (pos == 0) continue;  // nothing earlier to contain it
        const std::size_t parent = rng() % pos;
        doc.relations.push_back({placed[parent].id, placed[pos].id});
        ++taken;
      }
      std::sort(doc.relations.begin(), doc.relations.end());

      corpus.documents.push_back(std::move(doc));
    }
  }
  return corpus;
}

}  // namespace cte

#endif  // CTE_CORPUS_IO_HPP

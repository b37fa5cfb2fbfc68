#include "cte/corpus_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cte/closure.hpp"
#include "fixtures.hpp"

using namespace cte;
using ctetest::mk_doc;
using ctetest::mk_event;
using ctetest::mk_timex;

namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("cte_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

Corpus sample_corpus() {
  Document d1 = mk_doc("note-a", "p1", "scan on day3 was clear .");
  d1.timexes.push_back(mk_timex("t0", 8, 12, TimexType::Date, std::string("2010-02-03")));
  d1.events.push_back(mk_event("e0", 0, 4));
  d1.events.push_back(mk_event("e1", 17, 22, DocTimeRel::Overlap, Polarity::Neg));
  d1.relations.push_back({"t0", "e0"});

  Document d2 = mk_doc("note-b", "p2", "biopsy7 planned");
  d2.events.push_back(mk_event("e0", 0, 7, DocTimeRel::After));

  Corpus c;
  c.documents = {d1, d2};
  return c;
}

TEST(RoundTrip, WriteThenReadEqualsOriginal) {
  TempDir tmp;
  const Corpus c = sample_corpus();
  write_corpus(c, tmp / "c.cte");
  EXPECT_EQ(read_corpus(tmp / "c.cte"), c);
}

TEST(RoundTrip, SerializationIsByteDeterministic) {
  const Corpus c = sample_corpus();
  EXPECT_EQ(serialize_corpus(c), serialize_corpus(c));
}

TEST(RoundTrip, ScrambledOrderReadsBackCanonical) {
  Corpus c = sample_corpus();
  std::swap(c.documents[0], c.documents[1]);
  std::swap(c.documents[1].events[0], c.documents[1].events[1]);
  EXPECT_EQ(parse_corpus(serialize_corpus(c)), canonical(c));
}

TEST(RoundTrip, EmptyCorpus) {
  TempDir tmp;
  write_corpus(Corpus{}, tmp / "empty.cte");
  const Corpus back = read_corpus(tmp / "empty.cte");
  EXPECT_TRUE(back.documents.empty());
}

TEST(RoundTrip, GeneratedCorpora) {
  std::mt19937_64 rng(5150);
  for (int i = 0; i < 25; ++i) {
    GeneratorConfig cfg;
    cfg.n_patients = 1 + rng() % 4;
    cfg.notes_per_patient = {1, 3};
    cfg.events_per_note = {1, 10};
    cfg.timexes_per_note = {1, 4};
    cfg.relation_density = (rng() % 11) / 10.0;
    cfg.unambiguous_surfaces = rng() % 2 == 0;
    cfg.seed = rng();
    const Corpus c = generate_synthetic(cfg);
    EXPECT_EQ(parse_corpus(serialize_corpus(c)), c);
  }
}

TEST(RoundTrip, TimexValueWithSpacesSurvives) {
  Corpus c;
  Document d = mk_doc("d1", "p1", "january the third");
  d.timexes.push_back(mk_timex("t0", 0, 7, TimexType::Date, std::string("APPROX 2010-01-03")));
  c.documents.push_back(d);
  const Corpus back = parse_corpus(serialize_corpus(c));
  EXPECT_EQ(back.documents[0].timexes[0].value, "APPROX 2010-01-03");
}

TEST(RoundTrip, AbsentValueSerializesAsDash) {
  Corpus c;
  Document d = mk_doc("d1", "p1", "january");
  d.timexes.push_back(mk_timex("t0", 0, 7, TimexType::Date, std::nullopt));
  c.documents.push_back(d);
  const std::string bytes = serialize_corpus(c);
  EXPECT_NE(bytes.find("T t0 0 7 DATE -\n"), std::string::npos);
  EXPECT_EQ(parse_corpus(bytes).documents[0].timexes[0].value, std::nullopt);
}

TEST(RoundTrip, TextWithNewlinesIsLengthFramed) {
  Corpus c;
  Document d = mk_doc("d1", "p1", "line one\nline two\n");
  d.sentences = {{0, 8}, {9, 17}};
  d.events.push_back(mk_event("e0", 0, 4));
  c.documents.push_back(d);
  EXPECT_EQ(parse_corpus(serialize_corpus(c)), c);
}

TEST(Parse, TruncatedTextPayloadFails) {
  EXPECT_THROW(parse_corpus("#doc d1 p1 2010-01-01\n#text 100\nshort\n"), ParseError);
}

TEST(Parse, MissingTextHeaderFails) {
  EXPECT_THROW(parse_corpus("#doc d1 p1 2010-01-01\nS 0 1\n"), ParseError);
}

TEST(Parse, BadDateFails) {
  EXPECT_THROW(parse_corpus("#doc d1 p1 2010-13-01\n#text 1\nx\n\n"), ParseError);
}

TEST(Parse, UnknownTagFails) {
  EXPECT_THROW(parse_corpus("#doc d1 p1 2010-01-01\n#text 1\nx\nQ 0 1\n"), ParseError);
}

TEST(Parse, UnknownEnumTokenFails) {
  try {
    parse_corpus("#doc d1 p1 2010-01-01\n#text 4\nscan\nE e0 0 4 NA POS NA ACTUAL SOON\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("SOON"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(":4"), std::string::npos);  // line locus
  }
}

TEST(Parse, UndefinedRelationTargetIsValidationError) {
  const std::string data =
      "#doc d1 p1 2010-01-01\n#text 4\nscan\nE e0 0 4 NA POS NA ACTUAL BEFORE\n"
      "R e0 CONTAINS e9\n";
  try {
    parse_corpus(data);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_FALSE(e.violations().empty());
    EXPECT_NE(e.violations()[0].message.find("e9"), std::string::npos);
  }
}

TEST(Parse, InvalidUtf8TextIsValidationError) {
  EXPECT_THROW(parse_corpus("#doc d1 p1 2010-01-01\n#text 1\n\xFF\n\n"), ValidationError);
}

TEST(Parse, OffsetsCountCharactersNotBytes) {
  // Text "café x" is 7 bytes, 6 characters; an event over the final "x" sits
  // at characters [5,6).
  const std::string data =
      "#doc d1 p1 2010-01-01\n#text 7\ncaf\xC3\xA9 x\nE e0 5 6 NA POS NA ACTUAL BEFORE\n";
  const Corpus c = parse_corpus(data);
  EXPECT_EQ(c.documents[0].events[0].span, (Span{5, 6}));
}

TEST(Parse, MutatedInputNeverCrashes) {
  // Byte-level mutations of a valid file must either parse or throw; they
  // must never corrupt memory or return a half-built corpus silently.
  GeneratorConfig cfg;
  cfg.n_patients = 2;
  cfg.seed = 99;
  const std::string valid = serialize_corpus(generate_synthetic(cfg));
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 500; ++trial) {
    std::string mutated = valid;
    const int op = rng() % 3;
    const std::size_t pos = rng() % mutated.size();
    if (op == 0) mutated[pos] = static_cast<char>(rng() % 256);
    else if (op == 1) mutated.erase(pos, 1 + rng() % 30);
    else mutated.insert(pos, 1, static_cast<char>(rng() % 256));
    try {
      const Corpus c = parse_corpus(mutated);
      EXPECT_TRUE(validate_corpus(c).empty());  // anything returned is valid
    } catch (const Error&) {
      // ParseError, ValidationError or TextError wrapped as Error: all fine.
    } catch (const TextError&) {
    }
  }
}

TEST(Write, InvalidCorpusIsRefused) {
  Corpus c;
  Document d = mk_doc("d1", "p1", "tiny");
  d.events.push_back(mk_event("e0", 0, 99));
  c.documents.push_back(d);
  TempDir tmp;
  EXPECT_THROW(write_corpus(c, tmp / "bad.cte"), ValidationError);
}

// --------------------------------------------------------------------------
// Splitting

Corpus corpus_with_patients(std::size_t n_patients, std::size_t notes_each = 2) {
  Corpus c;
  for (std::size_t p = 0; p < n_patients; ++p) {
    for (std::size_t n = 0; n < notes_each; ++n) {
      char id[32];
      std::snprintf(id, sizeof(id), "p%03zu-n%zu", p, n);
      Document d = mk_doc(id, "p" + std::to_string(p), "word");
      c.documents.push_back(std::move(d));
    }
  }
  return c;
}

std::set<std::string> patients_of(const Corpus& c) {
  std::set<std::string> out;
  for (const Document& d : c.documents) out.insert(d.patient_id);
  return out;
}

TEST(Split, EightPatientsDefaultSpecGivesFourTwoTwo) {
  const SplitResult r = split_by_patient(corpus_with_patients(8), SplitSpec{.seed = 11});
  EXPECT_EQ(patients_of(r.train).size(), 4u);
  EXPECT_EQ(patients_of(r.dev).size(), 2u);
  EXPECT_EQ(patients_of(r.test).size(), 2u);
}

TEST(Split, EightySevenPatientsGivesFortyFourTwentyOneTwentyTwo) {
  const SplitResult r = split_by_patient(corpus_with_patients(87, 1), SplitSpec{.seed = 3});
  EXPECT_EQ(patients_of(r.train).size(), 44u);
  EXPECT_EQ(patients_of(r.dev).size(), 21u);
  EXPECT_EQ(patients_of(r.test).size(), 22u);
}

TEST(Split, FoldsPartitionDocumentsWithDisjointPatients) {
  const Corpus c = corpus_with_patients(10, 3);
  const SplitResult r = split_by_patient(c, SplitSpec{.seed = 99});
  EXPECT_EQ(r.train.documents.size() + r.dev.documents.size() + r.test.documents.size(),
            c.documents.size());
  const auto train = patients_of(r.train), dev = patients_of(r.dev), test = patients_of(r.test);
  for (const std::string& p : train) {
    EXPECT_FALSE(dev.count(p));
    EXPECT_FALSE(test.count(p));
  }
  for (const std::string& p : dev) EXPECT_FALSE(test.count(p));
}

TEST(Split, DeterministicAndDocumentOrderIndependent) {
  Corpus c = corpus_with_patients(9, 2);
  const SplitResult a = split_by_patient(c, SplitSpec{.seed = 5});
  std::reverse(c.documents.begin(), c.documents.end());
  const SplitResult b = split_by_patient(c, SplitSpec{.seed = 5});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.dev, b.dev);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, SeedChangesAssignment) {
  const Corpus c = corpus_with_patients(20, 1);
  const SplitResult a = split_by_patient(c, SplitSpec{.seed = 1});
  const SplitResult b = split_by_patient(c, SplitSpec{.seed = 2});
  EXPECT_NE(patients_of(a.train), patients_of(b.train));
}

TEST(Split, TooFewPatientsFails) {
  EXPECT_THROW(split_by_patient(corpus_with_patients(2), SplitSpec{}), Error);
}

TEST(Split, BadFractionsRejected) {
  EXPECT_THROW(split_by_patient(corpus_with_patients(8),
                                SplitSpec{.train_fraction = 0.5, .dev_fraction = 0.4,
                                          .test_fraction = 0.4}),
               std::invalid_argument);
  EXPECT_THROW(split_by_patient(corpus_with_patients(8),
                                SplitSpec{.train_fraction = -0.5, .dev_fraction = 1.0,
                                          .test_fraction = 0.5}),
               std::invalid_argument);
}

TEST(Split, CustomFractions) {
  const SplitResult r = split_by_patient(
      corpus_with_patients(10, 1),
      SplitSpec{.train_fraction = 0.8, .dev_fraction = 0.1, .test_fraction = 0.1, .seed = 1});
  EXPECT_EQ(patients_of(r.train).size(), 8u);
  EXPECT_EQ(patients_of(r.dev).size(), 1u);
  EXPECT_EQ(patients_of(r.test).size(), 1u);
}

// --------------------------------------------------------------------------
// Synthetic generation

TEST(Generate, DeterministicPerSeed) {
  GeneratorConfig cfg;
  cfg.n_patients = 4;
  cfg.seed = 77;
  EXPECT_EQ(generate_synthetic(cfg), generate_synthetic(cfg));
  GeneratorConfig other = cfg;
  other.seed = 78;
  EXPECT_NE(generate_synthetic(other), generate_synthetic(cfg));
}

TEST(Generate, ZeroDensityMeansNoRelations) {
  GeneratorConfig cfg;
  cfg.n_patients = 5;
  cfg.relation_density = 0.0;
  cfg.seed = 1;
  for (const Document& d : generate_synthetic(cfg).documents)
    EXPECT_TRUE(d.relations.empty());
}

TEST(Generate, OutputIsValidAndConsistent) {
  GeneratorConfig cfg;
  cfg.n_patients = 6;
  cfg.relation_density = 0.8;
  cfg.seed = 123;
  const Corpus c = generate_synthetic(cfg);
  EXPECT_TRUE(validate_corpus(c).empty());
  for (const Document& d : c.documents)
    EXPECT_TRUE(check_consistency(RelationGraph::from_document(d)).consistent);
}

TEST(Generate, UnambiguousSurfacesCarryOneBundleCorpusWide) {
  GeneratorConfig cfg;
  cfg.n_patients = 8;
  cfg.notes_per_patient = {2, 3};
  cfg.events_per_note = {10, 20};
  cfg.timexes_per_note = {2, 5};
  cfg.unambiguous_surfaces = true;
  cfg.seed = 31;
  const Corpus c = generate_synthetic(cfg);
  std::map<std::string, std::string> bundle_by_surface;
  for (const Document& d : c.documents) {
    for (const TimexEntity& t : d.timexes) {
      const std::string surface = utf8_slice(d.text, t.span.begin, t.span.end);
      const std::string bundle =
          "timex|" + std::string(to_string(t.type)) + "|" + (t.value ? *t.value : "-");
      auto [it, inserted] = bundle_by_surface.emplace(surface, bundle);
      EXPECT_EQ(it->second, bundle) << "surface " << surface;
    }
    for (const EventEntity& e : d.events) {
      const std::string surface = utf8_slice(d.text, e.span.begin, e.span.end);
      const std::string bundle = "event|" + std::string(to_string(e.type)) + "|" +
                                 std::string(to_string(e.polarity)) + "|" +
                                 std::string(to_string(e.degree)) + "|" +
                                 std::string(to_string(e.modality)) + "|" +
                                 std::string(to_string(e.doc_time_rel));
      auto [it, inserted] = bundle_by_surface.emplace(surface, bundle);
      EXPECT_EQ(it->second, bundle) << "surface " << surface;
    }
  }
}

TEST(Generate, EntitiesSitInsideSentences) {
  GeneratorConfig cfg;
  cfg.n_patients = 3;
  cfg.seed = 9;
  const Corpus c = generate_synthetic(cfg);
  for (const Document& d : c.documents) {
    auto inside_some_sentence = [&](const Span& s) {
      for (const Span& sent : d.sentences)
        if (sent.contains(s)) return true;
      return false;
    };
    for (const TimexEntity& t : d.timexes) EXPECT_TRUE(inside_some_sentence(t.span));
    for (const EventEntity& e : d.events) EXPECT_TRUE(inside_some_sentence(e.span));
  }
}

TEST(Generate, BadConfigRejected) {
  GeneratorConfig cfg;
  cfg.n_patients = 0;
  EXPECT_THROW(generate_synthetic(cfg), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.relation_density = 1.5;
  EXPECT_THROW(generate_synthetic(cfg), std::invalid_argument);
  cfg = GeneratorConfig{};
  cfg.events_per_note = {5, 2};
  EXPECT_THROW(generate_synthetic(cfg), std::invalid_argument);
}

}  // namespace

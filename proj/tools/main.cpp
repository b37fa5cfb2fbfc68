// cte: scoring, baselines, splitting, closure, validation and synthetic data
// for clinical temporal annotation corpora.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 internal
// error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cte/baselines.hpp"
#include "cte/closure.hpp"
#include "cte/corpus_io.hpp"
#include "cte/metrics.hpp"
#include "cte/report.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct ScoreArgs {
  int scenario = 1;
  std::string gold_path, system_path;
  std::string subtasks_csv;
  std::string match = "exact";
  std::string closure = "both-closed";
  std::string format = "tsv";
};

int run_score(const ScoreArgs& args) {
  cte::ScenarioConfig config;
  config.scenario = args.scenario;
  for (const std::string& token : split_csv(args.subtasks_csv)) {
    const auto subtask = cte::subtask_from(token);
    if (!subtask) throw std::invalid_argument("unknown subtask '" + token + "'");
    config.subtasks.push_back(*subtask);
  }
  const auto match = cte::match_mode_from(args.match);
  if (!match) throw std::invalid_argument("unknown match mode '" + args.match + "'");
  config.match_mode = *match;
  const auto closure = cte::closure_scoring_from(args.closure);
  if (!closure) throw std::invalid_argument("unknown closure mode '" + args.closure + "'");
  config.closure_mode = *closure;
  if (args.format != "tsv" && args.format != "json")
    throw std::invalid_argument("unknown format '" + args.format + "'");

  const cte::Corpus gold = cte::read_corpus(args.gold_path);
  const cte::Corpus system = cte::read_corpus(args.system_path);
  const cte::Report report = cte::run_scenario(config, system, gold);
  std::cout << cte::emit_report(
      report, args.format == "tsv" ? cte::ReportFormat::Tsv : cte::ReportFormat::Json);
  return 0;
}

struct BaselineArgs {
  std::string train_path, input_path, out_path;
  std::string components_csv = "memorize,dr-memorize,cr-closest";
  std::string lexicon_dump_path;
  bool case_sensitive = false;
};

int run_baseline(const BaselineArgs& args) {
  const std::vector<std::string> components = split_csv(args.components_csv);
  const std::set<std::string> known = {"memorize", "dr-majority", "dr-memorize", "cr-closest"};
  std::set<std::string> selected;
  for (const std::string& c : components) {
    if (!known.count(c)) throw std::invalid_argument("unknown baseline component '" + c + "'");
    selected.insert(c);
  }
  if (selected.empty()) throw std::invalid_argument("no baseline components selected");
  if (selected.count("dr-majority") && selected.count("dr-memorize"))
    throw std::invalid_argument("dr-majority and dr-memorize are mutually exclusive");

  const cte::Corpus train = cte::read_corpus(args.train_path);
  const cte::Corpus input = cte::read_corpus(args.input_path);

  const bool memorize = selected.count("memorize") > 0;
  const bool dr_majority = selected.count("dr-majority") > 0;
  const bool dr_memorize = selected.count("dr-memorize") > 0;
  const bool cr_closest = selected.count("cr-closest") > 0;

  cte::MemorizationLexicon lexicon;
  if (memorize || dr_memorize || !args.lexicon_dump_path.empty())
    lexicon = cte::train_memorizer(train, args.case_sensitive);
  cte::MajorityDr majority;
  if (dr_majority || dr_memorize) majority = cte::train_dr_majority(train);

  if (!args.lexicon_dump_path.empty()) {
    std::ofstream dump(args.lexicon_dump_path, std::ios::binary | std::ios::trunc);
    if (!dump) throw cte::Error("cannot open '" + args.lexicon_dump_path + "' for writing");
    dump << cte::dump_lexicon(lexicon);
  }

  cte::Corpus output;
  for (const cte::Document& doc : input.documents) {
    cte::Document out_doc;
    out_doc.doc_id = doc.doc_id;
    out_doc.patient_id = doc.patient_id;
    out_doc.text = doc.text;
    out_doc.dct = doc.dct;
    out_doc.sentences = doc.sentences;

    if (memorize) {
      auto [timexes, events] = cte::apply_memorizer(lexicon, doc);
      out_doc.timexes = std::move(timexes);
      out_doc.events = std::move(events);
    } else {
      out_doc.timexes = doc.timexes;
      out_doc.events = doc.events;
    }
    if (dr_majority)
      out_doc.events = cte::apply_dr(majority, nullptr, out_doc.text, std::move(out_doc.events));
    else if (dr_memorize)
      out_doc.events = cte::apply_dr(majority, &lexicon, out_doc.text, std::move(out_doc.events));

    if (cr_closest)
      out_doc.relations = cte::link_closest_time(out_doc);
    else if (!memorize)
      out_doc.relations = doc.relations;  // entity ids unchanged, so still valid

    output.documents.push_back(std::move(out_doc));
  }
  cte::write_corpus(output, args.out_path);
  std::cerr << "baseline output for " << output.documents.size() << " document(s) written to "
            << args.out_path << "\n";
  return 0;
}

struct SplitArgs {
  std::string in_path, out_prefix;
  std::uint64_t seed = 0;
  std::string fractions_csv = "0.5,0.25,0.25";
};

int run_split(const SplitArgs& args) {
  const std::vector<std::string> parts = split_csv(args.fractions_csv);
  if (parts.size() != 3)
    throw std::invalid_argument("--fractions takes exactly three comma-separated numbers");
  cte::SplitSpec spec;
  try {
    spec.train_fraction = std::stod(parts[0]);
    spec.dev_fraction = std::stod(parts[1]);
    spec.test_fraction = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("--fractions must be numeric");
  }
  spec.seed = args.seed;

  const cte::Corpus corpus = cte::read_corpus(args.in_path);
  const cte::SplitResult result = cte::split_by_patient(corpus, spec);

  const auto patients = [](const cte::Corpus& c) {
    std::set<std::string> p;
    for (const cte::Document& d : c.documents) p.insert(d.patient_id);
    return p.size();
  };
  struct Fold {
    const char* name;
    const cte::Corpus* corpus;
  };
  for (const Fold& fold : {Fold{"train", &result.train}, Fold{"dev", &result.dev},
                           Fold{"test", &result.test}}) {
    const std::string path = args.out_prefix + fold.name + ".cte";
    cte::write_corpus(*fold.corpus, path);
    std::cout << fold.name << "\t" << path << "\t" << patients(*fold.corpus) << " patients\t"
              << fold.corpus->documents.size() << " documents\n";
  }
  return 0;
}

int run_closure(const std::string& in_path, const std::string& out_path) {
  cte::Corpus corpus = cte::read_corpus(in_path);
  for (cte::Document& doc : corpus.documents) {
    cte::RelationGraph graph = cte::RelationGraph::from_document(doc);
    cte::RelationGraph closed;
    try {
      closed = cte::close_contains(graph);
    } catch (const cte::InconsistencyError& e) {
      throw cte::InconsistencyError("document '" + doc.doc_id + "': " + e.what(), e.result());
    }
    doc.relations.clear();
    for (const auto& [source, target] : closed.edges) doc.relations.push_back({source, target});
  }
  cte::write_corpus(corpus, out_path);
  return 0;
}

int run_validate(const std::string& in_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open '" << in_path << "' for reading\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    const cte::Corpus corpus = cte::parse_corpus(buf.str(), in_path);
    std::size_t entities = 0, relations = 0;
    for (const cte::Document& d : corpus.documents) {
      entities += d.timexes.size() + d.events.size();
      relations += d.relations.size();
    }
    std::cout << "OK\t" << corpus.documents.size() << " documents\t" << entities
              << " entities\t" << relations << " relations\n";
    return 0;
  } catch (const cte::ValidationError& e) {
    for (const cte::Violation& v : e.violations())
      std::cout << v.subject << "\t" << v.message << "\n";
    std::cerr << e.what() << "\n";
    return 2;
  }
  // ParseError propagates to the generic handler (exit 2).
}

struct GenerateArgs {
  std::size_t patients = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  bool unambiguous = false;
  double density = 0.3;
};

int run_generate(const GenerateArgs& args) {
  cte::GeneratorConfig config = cte::GeneratorConfig::reference_scale(args.seed);
  config.n_patients = args.patients;
  config.relation_density = args.density;
  config.unambiguous_surfaces = args.unambiguous;
  const cte::Corpus corpus = cte::generate_synthetic(config);
  cte::write_corpus(corpus, args.out_path);

  std::size_t events = 0, timexes = 0, relations = 0;
  for (const cte::Document& d : corpus.documents) {
    events += d.events.size();
    timexes += d.timexes.size();
    relations += d.relations.size();
  }
  std::cout << "documents\t" << corpus.documents.size() << "\n"
            << "events\t" << events << "\n"
            << "timexes\t" << timexes << "\n"
            << "relations\t" << relations << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clinical temporal annotation toolkit: scoring, baselines, corpus utilities"};
  app.require_subcommand(1);

  ScoreArgs score_args;
  CLI::App* score = app.add_subcommand("score", "score a system corpus against gold");
  score->add_option("--scenario", score_args.scenario, "evaluation scenario")
      ->required()
      ->check(CLI::Range(1, 3));
  score->add_option("--gold", score_args.gold_path, "gold corpus file")->required();
  score->add_option("--system", score_args.system_path, "system corpus file")->required();
  score->add_option("--subtasks", score_args.subtasks_csv,
                    "comma-separated subset of TS,ES,TA,EA,DR,CR");
  score->add_option("--match", score_args.match, "span matching: exact|overlap");
  score->add_option("--closure", score_args.closure,
                    "closure-based CR scoring: both-closed|asymmetric|off");
  score->add_option("--format", score_args.format, "report format: tsv|json");

  BaselineArgs baseline_args;
  CLI::App* baseline = app.add_subcommand("baseline", "run the baseline systems");
  baseline->add_option("--train", baseline_args.train_path, "training corpus")->required();
  baseline->add_option("--input", baseline_args.input_path, "corpus to annotate")->required();
  baseline->add_option("--out", baseline_args.out_path, "output corpus path")->required();
  baseline->add_option("--components", baseline_args.components_csv,
                       "memorize,dr-majority,dr-memorize,cr-closest");
  baseline->add_option("--dump-lexicon", baseline_args.lexicon_dump_path,
                       "also write the trained lexicon (tab-separated, sorted)");
  baseline->add_flag("--case-sensitive", baseline_args.case_sensitive,
                     "match surfaces case-sensitively");

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand("split", "patient-level train/dev/test split");
  split->add_option("--in", split_args.in_path, "corpus to split")->required();
  split->add_option("--seed", split_args.seed, "shuffle seed")->required();
  split->add_option("--fractions", split_args.fractions_csv, "train,dev,test fractions");
  split->add_option("--out-prefix", split_args.out_prefix,
                    "output prefix; writes <prefix>train.cte etc.")
      ->required();

  std::string closure_in, closure_out;
  CLI::App* closure = app.add_subcommand("closure", "replace relations with their closure");
  closure->add_option("--in", closure_in, "input corpus")->required();
  closure->add_option("--out", closure_out, "output corpus")->required();

  std::string validate_in;
  CLI::App* validate = app.add_subcommand("validate", "check corpus well-formedness");
  validate->add_option("--in", validate_in, "corpus to check")->required();

  GenerateArgs generate_args;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic corpus");
  generate->add_option("--patients", generate_args.patients, "number of patients")->required();
  generate->add_option("--seed", generate_args.seed, "generator seed")->required();
  generate->add_option("--out", generate_args.out_path, "output corpus path")->required();
  generate->add_flag("--unambiguous", generate_args.unambiguous,
                     "every surface string carries one kind and attribute bundle");
  generate->add_option("--density", generate_args.density,
                       "fraction of events placed inside a container");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (score->parsed()) return run_score(score_args);
    if (baseline->parsed()) return run_baseline(baseline_args);
    if (split->parsed()) return run_split(split_args);
    if (closure->parsed()) return run_closure(closure_in, closure_out);
    if (validate->parsed()) return run_validate(validate_in);
    if (generate->parsed()) return run_generate(generate_args);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const cte::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}

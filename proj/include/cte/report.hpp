// Scenario orchestration and report emission.
//
// Scenario 1 scores raw system output. Scenarios 2 and 3 assume spans (and,
// for 3, attributes) were given to the system, so the runner first verifies
// that the system file is id-aligned with gold before scoring the remaining
// subtasks in accuracy form.

#ifndef CTE_REPORT_HPP
#define CTE_REPORT_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cte/annotation.hpp"
#include "cte/metrics.hpp"

namespace cte {

enum class Subtask { TS, ES, TA, EA, DR, CR };

inline std::string_view to_string(Subtask s) {
  switch (s) {
    case Subtask::TS: return "TS";
    case Subtask::ES: return "ES";
    case Subtask::TA: return "TA";
    case Subtask::EA: return "EA";
    case Subtask::DR: return "DR";
    case Subtask::CR: return "CR";
  }
  return "?";
}

inline std::optional<Subtask> subtask_from(std::string_view s) {
  if (s == "TS") return Subtask::TS;
  if (s == "ES") return Subtask::ES;
  if (s == "TA") return Subtask::TA;
  if (s == "EA") return Subtask::EA;
  if (s == "DR") return Subtask::DR;
  if (s == "CR") return Subtask::CR;
  return std::nullopt;
}

inline std::string_view to_string(MatchMode m) {
  return m == MatchMode::Exact ? "exact" : "overlap";
}

inline std::optional<MatchMode> match_mode_from(std::string_view s) {
  if (s == "exact") return MatchMode::Exact;
  if (s == "overlap") return MatchMode::Overlap;
  return std::nullopt;
}

inline std::string_view to_string(ClosureScoring c) {
  switch (c) {
    case ClosureScoring::Off: return "off";
    case ClosureScoring::BothClosed: return "both-closed";
    case ClosureScoring::Asymmetric: return "asymmetric";
  }
  return "?";
}

inline std::optional<ClosureScoring> closure_scoring_from(std::string_view s) {
  if (s == "off") return ClosureScoring::Off;
  if (s == "both-closed") return ClosureScoring::BothClosed;
  if (s == "asymmetric") return ClosureScoring::Asymmetric;
  return std::nullopt;
}

// Which subtasks each evaluation setup defines.
inline const std::vector<Subtask>& permitted_subtasks(int scenario) {
  static const std::vector<Subtask> s1 = {Subtask::TS, Subtask::ES, Subtask::TA,
                                          Subtask::EA, Subtask::DR, Subtask::CR};
  static const std::vector<Subtask> s2 = {Subtask::TA, Subtask::EA, Subtask::DR, Subtask::CR};
  static const std::vector<Subtask> s3 = {Subtask::DR, Subtask::CR};
  switch (scenario) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: throw std::invalid_argument("scenario must be 1, 2 or 3");
  }
}

struct ScenarioConfig {
  int scenario = 1;
  // Empty means every subtask the scenario permits.
  std::vector<Subtask> subtasks;
  MatchMode match_mode = MatchMode::Exact;
  ClosureScoring closure_mode = ClosureScoring::BothClosed;
};

struct ReportRow {
  Subtask subtask = Subtask::TS;
  std::string metric;
  Score score;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  int scenario = 1;
  MatchMode match_mode = MatchMode::Exact;
  ClosureScoring closure_mode = ClosureScoring::BothClosed;
  std::size_t gold_documents = 0;
  std::size_t system_documents = 0;
  std::vector<std::string> warnings;  // sorted, deduplicated
  std::vector<ReportRow> rows;        // sorted by (subtask, metric)

  bool operator==(const Report&) const = default;
};

namespace detail {

// Scenario 2/3 precondition: system entities mirror gold ids and spans; for
// scenario 3 the descriptive attributes must match as well (docTimeRel stays
// free, otherwise the DR subtask would be vacuous).
inline void require_alignment(const Corpus& sys, const Corpus& gold, bool attributes_too) {
  for (const DocPair& p : align_documents(sys, gold)) {
    if (!p.sys)
      throw AlignmentError("document '" + p.gold->doc_id +
                           "' has no system output; this scenario provides spans to systems");
    for (EntityKind kind : {EntityKind::Timex, EntityKind::Event}) {
      require_shared_entities(*p.sys, *p.gold, kind);
      if (!attributes_too) continue;
      const auto sys_index = index_by_id(*p.sys, kind);
      for (std::size_t g = 0; g < entity_count(*p.gold, kind); ++g) {
        const std::size_t s = sys_index.at(id_of(*p.gold, kind, g));
        for (const std::string& attr : attribute_names(kind)) {
          if (attribute_of(*p.sys, kind, s, attr) != attribute_of(*p.gold, kind, g, attr))
            throw AlignmentError("document '" + p.gold->doc_id + "': system " +
                                 std::string(to_string(kind)) + " '" +
                                 id_of(*p.gold, kind, g) + "' differs from gold on " + attr +
                                 "; this scenario provides attributes to systems");
        }
      }
    }
  }
}

inline int subtask_rank(Subtask s) { return static_cast<int>(s); }

}  // namespace detail

// Runs one evaluation scenario and assembles the report rows it mandates.
inline Report run_scenario(const ScenarioConfig& config, const Corpus& system,
                           const Corpus& gold) {
  const std::vector<Subtask>& permitted = permitted_subtasks(config.scenario);
  std::vector<Subtask> subtasks = config.subtasks.empty() ? permitted : config.subtasks;
  for (Subtask s : subtasks) {
    if (std::find(permitted.begin(), permitted.end(), s) == permitted.end())
      throw std::invalid_argument("subtask " + std::string(to_string(s)) +
                                  " is not defined for scenario " +
                                  std::to_string(config.scenario));
  }
  // Normalize to canonical order, dropping duplicates.
  std::vector<Subtask> ordered;
  for (Subtask s : permitted)
    if (std::find(subtasks.begin(), subtasks.end(), s) != subtasks.end()) ordered.push_back(s);

  if (config.scenario >= 2)
    detail::require_alignment(system, gold, /*attributes_too=*/config.scenario == 3);

  const ScoreForm attr_form = config.scenario == 1 ? ScoreForm::PRF : ScoreForm::Accuracy;
  const char* attr_suffix = config.scenario == 1 ? "-F1" : "-acc";

  Report report;
  report.scenario = config.scenario;
  report.match_mode = config.match_mode;
  report.closure_mode = config.closure_mode;
  report.gold_documents = gold.documents.size();
  report.system_documents = system.documents.size();

  std::set<std::string> warnings;
  auto add_row = [&](Subtask subtask, std::string metric, Score score) {
    report.rows.push_back({subtask, std::move(metric), std::move(score)});
  };

  for (Subtask subtask : ordered) {
    switch (subtask) {
      case Subtask::TS:
        add_row(subtask, "span-F1",
                Score::from(score_spans(system, gold, EntityKind::Timex, config.match_mode)));
        break;
      case Subtask::ES:
        add_row(subtask, "span-F1",
                Score::from(score_spans(system, gold, EntityKind::Event, config.match_mode)));
        break;
      case Subtask::TA:
      case Subtask::EA: {
        const EntityKind kind = subtask == Subtask::TA ? EntityKind::Timex : EntityKind::Event;
        for (const std::string& attr : attribute_names(kind))
          add_row(subtask, attr + attr_suffix,
                  score_attribute(system, gold, kind, attr, config.match_mode, attr_form));
        add_row(subtask, std::string("overall") + attr_suffix,
                score_all_attributes(system, gold, kind, config.match_mode, attr_form));
        break;
      }
      case Subtask::DR:
        add_row(subtask, std::string("docTimeRel") + attr_suffix,
                score_doc_time_rel(system, gold, config.match_mode, attr_form));
        break;
      case Subtask::CR: {
        std::vector<std::string> local;
        add_row(subtask, "plain-F1",
                Score::from(score_relations(system, gold, ClosureScoring::Off, &local)));
        if (config.closure_mode == ClosureScoring::BothClosed)
          add_row(subtask, "closure-F1",
                  Score::from(
                      score_relations(system, gold, ClosureScoring::BothClosed, &local)));
        else if (config.closure_mode == ClosureScoring::Asymmetric)
          add_row(subtask, "closure-asym-F1",
                  Score::from(
                      score_relations(system, gold, ClosureScoring::Asymmetric, &local)));
        warnings.insert(local.begin(), local.end());
        break;
      }
    }
  }

  report.warnings.assign(warnings.begin(), warnings.end());
  std::sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tuple(detail::subtask_rank(a.subtask), std::string_view(a.metric)) <
           std::tuple(detail::subtask_rank(b.subtask), std::string_view(b.metric));
  });
  return report;
}

enum class ReportFormat { Tsv, Json };

namespace detail {

inline std::string format_score(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace detail

// Deterministic bytes. The TSV uses one 8-column schema for both row kinds:
// accuracy over a shared entity set is exactly micro P = R = F1 with
// tp = correct and system = gold = total, so accuracy rows fill the same
// columns without loss.
inline std::string emit_report(const Report& report, ReportFormat format = ReportFormat::Tsv) {
  if (format == ReportFormat::Tsv) {
    std::string out;
    out += "# scenario\t" + std::to_string(report.scenario) + "\n";
    out += "# match\t" + std::string(to_string(report.match_mode)) + "\n";
    out += "# closure\t" + std::string(to_string(report.closure_mode)) + "\n";
    out += "# gold-documents\t" + std::to_string(report.gold_documents) + "\n";
    out += "# system-documents\t" + std::to_string(report.system_documents) + "\n";
    for (const std::string& w : report.warnings) out += "# warning\t" + w + "\n";
    out += "subtask\tmetric\ttp\tsystem\tgold\tprecision\trecall\tf1\n";
    for (const ReportRow& row : report.rows) {
      out += std::string(to_string(row.subtask)) + "\t" + row.metric + "\t";
      if (row.score.form == ScoreForm::PRF) {
        const PRFScore& s = row.score.prf;
        out += std::to_string(s.true_positive_count) + "\t" + std::to_string(s.system_count) +
               "\t" + std::to_string(s.gold_count) + "\t" + detail::format_score(s.precision) +
               "\t" + detail::format_score(s.recall) + "\t" + detail::format_score(s.f1) + "\n";
      } else {
        const AccuracyScore& s = row.score.accuracy;
        const std::string acc = detail::format_score(s.accuracy);
        out += std::to_string(s.correct_count) + "\t" + std::to_string(s.total_count) + "\t" +
               std::to_string(s.total_count) + "\t" + acc + "\t" + acc + "\t" + acc + "\n";
      }
    }
    return out;
  }

  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["match_mode"] = std::string(to_string(report.match_mode));
  j["closure_mode"] = std::string(to_string(report.closure_mode));
  j["gold_documents"] = report.gold_documents;
  j["system_documents"] = report.system_documents;
  j["warnings"] = report.warnings;
  j["rows"] = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["subtask"] = std::string(to_string(row.subtask));
    r["metric"] = row.metric;
    if (row.score.form == ScoreForm::PRF) {
      r["form"] = "prf";
      r["tp"] = row.score.prf.true_positive_count;
      r["system"] = row.score.prf.system_count;
      r["gold"] = row.score.prf.gold_count;
      r["precision"] = row.score.prf.precision;
      r["recall"] = row.score.prf.recall;
      r["f1"] = row.score.prf.f1;
    } else {
      r["form"] = "accuracy";
      r["correct"] = row.score.accuracy.correct_count;
      r["total"] = row.score.accuracy.total_count;
      r["accuracy"] = row.score.accuracy.accuracy;
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

// Reads the JSON form back; every field round-trips.
inline Report parse_report(const std::string& json_bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("cannot parse report JSON: ") + e.what());
  }
  try {
    Report report;
    report.scenario = j.at("scenario").get<int>();
    const auto match = match_mode_from(j.at("match_mode").get<std::string>());
    const auto closure = closure_scoring_from(j.at("closure_mode").get<std::string>());
    if (!match || !closure) throw Error("unknown mode string in report");
    report.match_mode = *match;
    report.closure_mode = *closure;
    report.gold_documents = j.at("gold_documents").get<std::size_t>();
    report.system_documents = j.at("system_documents").get<std::size_t>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      const auto subtask = subtask_from(r.at("subtask").get<std::string>());
      if (!subtask) throw Error("unknown subtask in report");
      row.subtask = *subtask;
      row.metric = r.at("metric").get<std::string>();
      if (r.at("form").get<std::string>() == "prf") {
        row.score.form = ScoreForm::PRF;
        row.score.prf.true_positive_count = r.at("tp").get<std::size_t>();
        row.score.prf.system_count = r.at("system").get<std::size_t>();
        row.score.prf.gold_count = r.at("gold").get<std::size_t>();
        row.score.prf.precision = r.at("precision").get<double>();
        row.score.prf.recall = r.at("recall").get<double>();
        row.score.prf.f1 = r.at("f1").get<double>();
      } else {
        row.score.form = ScoreForm::Accuracy;
        row.score.accuracy.correct_count = r.at("correct").get<std::size_t>();
        row.score.accuracy.total_count = r.at("total").get<std::size_t>();
        row.score.accuracy.accuracy = r.at("accuracy").get<double>();
      }
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report JSON has unexpected shape: ") + e.what());
  }
}

}  // namespace cte

#endif  // CTE_REPORT_HPP

// SPDX-License-Identifier: Apache-2.0

#include "chemeval/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chemeval {

using nlohmann::json;

namespace {

json answer_to_json(const ExtractedAnswer &answer) {
  json j;
  switch (answer.kind) {
  case AnswerKind::Smiles:
    j["kind"] = "smiles";
    j["smiles"] = answer.smiles;
    break;
  case AnswerKind::Choices: {
    j["kind"] = "choices";
    json letters = json::array();
    for (char c : answer.choices) {
      letters.push_back(std::string(1, c));
    }
    j["choices"] = letters;
    break;
  }
  case AnswerKind::Blanks:
    j["kind"] = "blanks";
    break;
  case AnswerKind::FreeText:
    j["kind"] = "free_text";
    break;
  case AnswerKind::None:
    j["kind"] = "none";
    break;
  }
  j["method"] =
      answer.method == ExtractionMethod::Judge ? "judge" : "heuristic";
  return j;
}

std::string format1(double pct) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << round1(pct);
  return out.str();
}

} // namespace

std::string report_json(const EvalReport &report) {
  verify_report_integrity(report);
  json j;
  j["benchmark_name"] = report.benchmark_name;
  j["n_records"] = report.n_records;
  j["avg_similarity_pct"] = report.avg_similarity_pct
                                ? json(*report.avg_similarity_pct)
                                : json(nullptr);
  j["tanimoto_at_1_pct"] = report.tanimoto_at_1_pct
                               ? json(*report.tanimoto_at_1_pct)
                               : json(nullptr);
  j["total_score_pct"] = report.total_score_pct
                             ? json(*report.total_score_pct)
                             : json(nullptr);
  json per_record = json::array();
  for (const OcrVerdict &v : report.ocr_records) {
    json r;
    r["id"] = v.record_id;
    r["similarity"] = v.similarity;
    r["exact"] = v.exact;
    r["extracted"] = answer_to_json(v.extracted);
    per_record.push_back(std::move(r));
  }
  for (const ExamVerdict &v : report.exam_records) {
    json r;
    r["id"] = v.record_id;
    r["points"] = v.points;
    r["question_type"] = to_string(v.question_type);
    if (!v.blank_detail.empty()) {
      json blanks = json::array();
      for (bool b : v.blank_detail) {
        blanks.push_back(b);
      }
      r["blanks"] = blanks;
    }
    if (v.extracted.kind == AnswerKind::Choices) {
      json letters = json::array();
      for (char c : v.extracted.choices) {
        letters.push_back(std::string(1, c));
      }
      r["choices"] = letters;
    }
    per_record.push_back(std::move(r));
  }
  j["per_record"] = std::move(per_record);
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string report_markdown(const EvalReport &report) {
  std::ostringstream out;
  out << "# Evaluation report: " << report.benchmark_name << "\n\n";
  out << "| Benchmark | N | Avg Sim. (%) | Tani@1.0 (%) | Score (%) |\n";
  out << "|---|---|---|---|---|\n";
  out << "| " << report.benchmark_name << " | " << report.n_records << " | "
      << (report.avg_similarity_pct ? format1(*report.avg_similarity_pct)
                                    : "-")
      << " | "
      << (report.tanimoto_at_1_pct ? format1(*report.tanimoto_at_1_pct) : "-")
      << " | "
      << (report.total_score_pct ? format1(*report.total_score_pct) : "-")
      << " |\n";
  if (!report.warnings.empty()) {
    out << "\n## Warnings\n\n";
    for (const std::string &w : report.warnings) {
      out << "- " << w << "\n";
    }
  }
  return out.str();
}

void write_report_files(const EvalReport &report, const std::string &dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(std::filesystem::path(dir) / "report.json",
                      std::ios::binary);
    out << report_json(report);
  }
  {
    std::ofstream out(std::filesystem::path(dir) / "report.md",
                      std::ios::binary);
    out << report_markdown(report);
  }
}

} // namespace chemeval

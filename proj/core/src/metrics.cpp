// SPDX-License-Identifier: Apache-2.0

#include "chemeval/metrics.hpp"

#include <cmath>

namespace chemeval {

QuestionType question_type_from_string(const std::string &s) {
  if (s == "single_choice") {
    return QuestionType::SingleChoice;
  }
  if (s == "multi_choice") {
    return QuestionType::MultiChoice;
  }
  if (s == "fill_blank") {
    return QuestionType::FillBlank;
  }
  if (s == "short_answer") {
    return QuestionType::ShortAnswer;
  }
  throw ConfigError("unknown question type: " + s);
}

std::string to_string(QuestionType t) {
  switch (t) {
  case QuestionType::SingleChoice:
    return "single_choice";
  case QuestionType::MultiChoice:
    return "multi_choice";
  case QuestionType::FillBlank:
    return "fill_blank";
  case QuestionType::ShortAnswer:
    return "short_answer";
  }
  return "single_choice";
}

OcrSummary score_ocr(const std::vector<OcrPair> &pairs,
                     const FingerprintParams &params) {
  OcrSummary summary;
  summary.verdicts.reserve(pairs.size());
  double sum = 0.0;
  std::size_t exact = 0;
  for (const OcrPair &pair : pairs) {
    double sim = 0.0;
    try {
      sim = similarity_of_smiles(pair.pred, pair.gold, params);
    } catch (const GoldInvalid &e) {
      throw GoldInvalid("record '" + pair.record_id + "': " + e.what());
    }
    OcrVerdict v;
    v.record_id = pair.record_id;
    v.similarity = sim;
    v.exact = sim == 1.0;
    if (pair.pred) {
      v.extracted.kind = AnswerKind::Smiles;
      v.extracted.smiles = *pair.pred;
    }
    sum += sim;
    exact += v.exact ? 1 : 0;
    summary.verdicts.push_back(std::move(v));
  }
  if (!pairs.empty()) {
    summary.avg_similarity_pct = sum / static_cast<double>(pairs.size()) * 100.0;
    summary.tanimoto_at_1_pct =
        static_cast<double>(exact) / static_cast<double>(pairs.size()) * 100.0;
  }
  return summary;
}

int score_choice(const std::set<char> &gold, const ExtractedAnswer &answer) {
  if (answer.kind != AnswerKind::Choices) {
    return 0;
  }
  return answer.choices == gold ? 1 : 0;
}

int score_blanks(const std::vector<bool> &per_blank) {
  if (per_blank.empty()) {
    throw InvalidParameter("score_blanks requires a non-empty list");
  }
  for (bool b : per_blank) {
    if (!b) {
      return 0;
    }
  }
  return 1;
}

double total_score(const std::vector<ExamVerdict> &verdicts) {
  if (verdicts.empty()) {
    throw EmptyBenchmark("cannot score an empty benchmark");
  }
  int points = 0;
  for (const ExamVerdict &v : verdicts) {
    points += v.points;
  }
  return static_cast<double>(points) / static_cast<double>(verdicts.size()) *
         100.0;
}

double round1(double pct) { return std::round(pct * 10.0) / 10.0; }

void verify_report_integrity(const EvalReport &report) {
  auto mismatch = [](const char *what) {
    throw Error(std::string("report integrity: ") + what +
                " does not match per-record recomputation");
  };
  if (!report.ocr_records.empty() || report.avg_similarity_pct) {
    double sum = 0.0;
    std::size_t exact = 0;
    for (const OcrVerdict &v : report.ocr_records) {
      if (v.exact != (v.similarity == 1.0)) {
        mismatch("exact flag");
      }
      sum += v.similarity;
      exact += v.exact ? 1 : 0;
    }
    const double n = static_cast<double>(report.ocr_records.size());
    if (!report.avg_similarity_pct ||
        std::abs(*report.avg_similarity_pct - sum / n * 100.0) > 1e-9) {
      mismatch("avg_similarity_pct");
    }
    if (!report.tanimoto_at_1_pct ||
        std::abs(*report.tanimoto_at_1_pct -
                 static_cast<double>(exact) / n * 100.0) > 1e-9) {
      mismatch("tanimoto_at_1_pct");
    }
  }
  if (!report.exam_records.empty() || report.total_score_pct) {
    if (!report.total_score_pct) {
      mismatch("total_score_pct");
    }
    if (std::abs(*report.total_score_pct - total_score(report.exam_records)) >
        1e-9) {
      mismatch("total_score_pct");
    }
  }
  if (report.n_records !=
      report.ocr_records.size() + report.exam_records.size()) {
    mismatch("n_records");
  }
}

} // namespace chemeval

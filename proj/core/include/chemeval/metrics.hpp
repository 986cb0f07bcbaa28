// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_METRICS_HPP
#define CHEMEVAL_METRICS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chemeval/extraction.hpp"
#include "chemeval/fingerprint.hpp"

namespace chemeval {

enum class QuestionType { SingleChoice, MultiChoice, FillBlank, ShortAnswer };

QuestionType question_type_from_string(const std::string &s);
std::string to_string(QuestionType t);

struct OcrVerdict {
  std::string record_id;
  double similarity = 0.0;
  bool exact = false; // similarity == 1.0
  ExtractedAnswer extracted;
};

struct ExamVerdict {
  std::string record_id;
  int points = 0; // whole points only
  QuestionType question_type = QuestionType::SingleChoice;
  std::vector<bool> blank_detail;
  std::set<char> matched_choices;
  ExtractedAnswer extracted;
};

struct OcrPair {
  std::string record_id;
  std::optional<std::string> pred;
  std::string gold;
};

struct OcrSummary {
  double avg_similarity_pct = 0.0;
  double tanimoto_at_1_pct = 0.0;
  std::vector<OcrVerdict> verdicts;
};

/// Average similarity and exact-hit percentage over prediction/gold pairs.
/// An unparsable gold aborts with GoldInvalid naming the record.
OcrSummary score_ocr(const std::vector<OcrPair> &pairs,
                     const FingerprintParams &params = {});

/// 1 iff the extracted choice set equals the gold set exactly, else 0.
int score_choice(const std::set<char> &gold, const ExtractedAnswer &answer);

/// 1 iff every blank is right; a single wrong blank zeroes the question.
int score_blanks(const std::vector<bool> &per_blank);

/// Points over questions, as a percentage.
double total_score(const std::vector<ExamVerdict> &verdicts);

/// Rounds to one decimal, the precision used in reports.
double round1(double pct);

struct EvalReport {
  std::string benchmark_name;
  std::size_t n_records = 0;
  std::optional<double> avg_similarity_pct;
  std::optional<double> tanimoto_at_1_pct;
  std::optional<double> total_score_pct;
  std::vector<OcrVerdict> ocr_records;
  std::vector<ExamVerdict> exam_records;
  std::vector<std::string> warnings;
};

/// Recomputes every aggregate from per-record data; throws Error on any
/// mismatch. Called on every report emission.
void verify_report_integrity(const EvalReport &report);

} // namespace chemeval

#endif // CHEMEVAL_METRICS_HPP

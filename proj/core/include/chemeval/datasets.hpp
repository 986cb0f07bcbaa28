// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_DATASETS_HPP
#define CHEMEVAL_DATASETS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chemeval/metrics.hpp"
#include "chemeval/prompts.hpp"

namespace chemeval {

struct ImageRef {
  enum class Kind { Path, Base64 };
  Kind kind = Kind::Path;
  std::string value;                   // path or base64 payload
  std::string media_type = "image/png"; // base64 only
};

struct OcrRecord {
  std::string id;
  ImageRef image;
  std::string gold_smiles;
  Lang lang = Lang::En;
};

struct ExamRecord {
  std::string id;
  std::string question;
  std::vector<ImageRef> images;
  QuestionType qtype = QuestionType::SingleChoice;
  std::map<char, std::string> choices;   // choice questions
  std::set<char> gold_choices;           // choice questions
  std::vector<std::string> gold_blanks;  // fill_blank questions
  std::string gold_text;                 // short_answer questions
  Lang lang = Lang::En;
};

struct QaTemplate {
  std::string id;
  Lang lang = Lang::En;
  std::string task; // ocr, caption, property, exam, reaction
  std::string human;
  std::string assistant;
};

/// JSONL loaders: one JSON object per line, schema-validated, file order
/// preserved. SchemaError carries the line number and field; DuplicateId on
/// repeated record ids.
std::vector<OcrRecord> load_ocr_benchmark(const std::string &path);
std::vector<ExamRecord> load_exam_benchmark(const std::string &path);
std::vector<QaTemplate> load_templates(const std::string &path);

std::string to_jsonl_line(const OcrRecord &record);
std::string to_jsonl_line(const ExamRecord &record);

using Bindings = std::map<std::string, std::string>;

struct QaPair {
  std::string human;
  std::string assistant;
};

/// Literal `{Name}` substitution; substituted text is never re-interpreted.
QaPair expand_template(const QaTemplate &tpl, const Bindings &bindings);

struct QaSource {
  std::string id;
  std::string task;
  Lang lang = Lang::En;
  Bindings bindings;
};

std::vector<QaSource> load_qa_sources(const std::string &path);

/// Pairs each record with a seeded uniform draw among templates matching its
/// task and language; deterministic for a fixed seed across platforms.
std::vector<QaPair> build_qa_pairs(const std::vector<QaSource> &records,
                                   const std::vector<QaTemplate> &templates,
                                   std::uint64_t seed);

namespace detail {
/// splitmix64-style mix used for seeded template draws; stdlib distributions
/// are not bit-stable across implementations.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index);
} // namespace detail

} // namespace chemeval

#endif // CHEMEVAL_DATASETS_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_EXTRACTION_HPP
#define CHEMEVAL_EXTRACTION_HPP

#include <set>
#include <string>
#include <vector>

#include "chemeval/errors.hpp"
#include "chemeval/prompts.hpp"

namespace chemeval {

enum class AnswerKind { Smiles, Choices, Blanks, FreeText, None };
enum class ExtractionMethod { Heuristic, Judge };

struct ExtractedAnswer {
  AnswerKind kind = AnswerKind::None;
  ExtractionMethod method = ExtractionMethod::Heuristic;
  std::string smiles;        // kind == Smiles
  std::set<char> choices;    // kind == Choices, letters A..H
  std::string raw;           // original response text
};

/// Text-only judge interface; implementations live in the clients module.
class JudgeClient {
public:
  virtual ~JudgeClient() = default;
  /// Sends one prompt, returns the reply text. Throws JudgeUnavailable on
  /// transport failure after retries.
  virtual std::string query(const std::string &prompt) = 0;
};

/// Scans maximal SMILES-alphabet substrings, strips surrounding punctuation,
/// keeps candidates that validate, and returns the longest one (ties go to
/// the last occurrence). Never returns an invalid SMILES.
ExtractedAnswer extract_smiles_heuristic(const std::string &response);

/// Asks the judge with the bilingual extraction prompt; falls back to the
/// heuristic when the judge's reply does not validate.
ExtractedAnswer extract_smiles_judge(const std::string &response,
                                     JudgeClient &judge, Lang lang = Lang::En);

/// Standalone capital letters A..H in the final answer region (the last line
/// containing any such letter). Letters embedded in words are ignored.
ExtractedAnswer extract_choices(const std::string &response);

struct BlankJudgement {
  std::vector<bool> correct; // one entry per gold blank
  bool malformed_reply = false;
  std::string judge_reply;
};

/// Grades fill-in-the-blank answers via the judge. A malformed judge reply
/// scores every blank false and sets the flag instead of erroring the run.
BlankJudgement judge_blanks(const std::string &question,
                            const std::vector<std::string> &gold_blanks,
                            const std::string &response, JudgeClient &judge,
                            Lang lang = Lang::En);

namespace detail {
/// Parses a "1,0,1" style reply into n booleans; nullopt when malformed.
std::vector<bool> parse_blank_bits(const std::string &reply, std::size_t n,
                                   bool &ok);
} // namespace detail

} // namespace chemeval

#endif // CHEMEVAL_EXTRACTION_HPP

// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_RUNNER_HPP
#define CHEMEVAL_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "chemeval/clients.hpp"
#include "chemeval/datasets.hpp"
#include "chemeval/report.hpp"

namespace chemeval {

inline constexpr const char *kToolVersion = "chemeval 0.1.0";

enum class ExtractionMode { Heuristic, Judge, JudgeWithFallback };

ExtractionMode extraction_mode_from_string(const std::string &s);
std::string to_string(ExtractionMode mode);

struct RunConfig {
  std::string benchmark_path;
  std::string schema; // "ocr" | "exam"
  ModelEndpoint model;
  std::optional<ModelEndpoint> judge;
  FingerprintParams fingerprint;
  ExtractionMode extraction = ExtractionMode::Heuristic;
  std::string output_dir;
  std::uint64_t seed = 0;
};

/// INI-style sections/keys with ${ENV} interpolation in values.
RunConfig load_run_config(const std::string &path);
void validate_run_config(const RunConfig &cfg);

/// End-to-end OCR evaluation: prompt -> model -> extract -> score. Writes
/// predictions.jsonl, report.json, report.md, manifest.json to output_dir.
/// Per-record model failures score 0 with a warning; a run is total.
/// Existing predictions in output_dir are reused (resume).
EvalReport run_ocr_eval(const RunConfig &cfg, ChatClient &model,
                        ChatClient *judge = nullptr);
EvalReport run_ocr_eval(const RunConfig &cfg);

EvalReport run_exam_eval(const RunConfig &cfg, ChatClient &model,
                         ChatClient *judge = nullptr);
EvalReport run_exam_eval(const RunConfig &cfg);

/// Offline re-scoring of saved predictions; no model calls, byte-identical
/// output across runs.
EvalReport score_ocr_files(const std::string &pred_path,
                           const std::string &gold_path,
                           const FingerprintParams &params = {});

/// Blanks are graded by `judge` when given, else by the deterministic
/// exact-match judge.
EvalReport score_exam_files(const std::string &pred_path,
                            const std::string &gold_path,
                            JudgeClient *judge = nullptr);

/// Deterministic offline judge: a blank is right iff the reference answer
/// appears verbatim in the student answer.
class ExactMatchJudge : public JudgeClient {
public:
  std::string query(const std::string &prompt) override {
    return exact_match_judge_reply(prompt);
  }
};

namespace detail {
std::string base64_encode(const std::string &bytes);
} // namespace detail

} // namespace chemeval

#endif // CHEMEVAL_RUNNER_HPP

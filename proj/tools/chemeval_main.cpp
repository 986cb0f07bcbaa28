// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chemeval/runner.hpp"
#include "chemeval/smiles.hpp"

namespace {

using namespace chemeval;

// Exit codes: 0 success, 1 usage, 2 benchmark/schema, 3 endpoint config.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSchema = 2;
constexpr int kExitEndpoint = 3;

bool g_json_errors = false;

void print_error(const std::string &kind, const std::string &message) {
  if (g_json_errors) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << message << "\n";
  }
}

int cmd_validate(const std::vector<std::string> &inputs) {
  bool all_ok = true;
  for (const std::string &s : inputs) {
    ValidityVerdict v = validate(s);
    if (v.ok) {
      std::cout << s << "\tok\n";
    } else {
      std::cout << s << "\terror: " << v.reason << " (position "
                << v.position << ")\n";
      all_ok = false;
    }
  }
  return all_ok ? kExitOk : kExitSchema;
}

int cmd_canon(const std::vector<std::string> &inputs) {
  for (const std::string &s : inputs) {
    std::cout << canonicalize(s) << "\n";
  }
  return kExitOk;
}

int cmd_sim(const std::string &a, const std::string &b,
            const FingerprintParams &params) {
  const double sim = similarity_of_smiles(a, b, params);
  std::cout << std::fixed << std::setprecision(4) << sim << "\n";
  return kExitOk;
}

int cmd_eval(const std::string &schema, const std::string &config_path) {
  RunConfig cfg = load_run_config(config_path);
  cfg.schema = schema;
  EvalReport report =
      schema == "ocr" ? run_ocr_eval(cfg) : run_exam_eval(cfg);
  std::cout << report_markdown(report);
  std::cout << "\nreport written to " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_score(const std::string &schema, const std::string &pred_path,
              const std::string &gold_path, const FingerprintParams &params,
              const std::string &output_dir) {
  EvalReport report = schema == "ocr"
                          ? score_ocr_files(pred_path, gold_path, params)
                          : score_exam_files(pred_path, gold_path);
  if (!output_dir.empty()) {
    write_report_files(report, output_dir);
  }
  std::cout << report_json(report);
  return kExitOk;
}

int cmd_templates_expand(const std::string &templates_path,
                         const std::string &bindings_path, std::uint64_t seed,
                         const std::string &output_path) {
  const auto templates = load_templates(templates_path);
  const auto sources = load_qa_sources(bindings_path);
  const auto pairs = build_qa_pairs(sources, templates, seed);
  std::ostream *out = &std::cout;
  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path, std::ios::binary);
    out = &file;
  }
  for (const QaPair &pair : pairs) {
    nlohmann::json j;
    j["human"] = pair.human;
    j["assistant"] = pair.assistant;
    *out << j.dump() << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Benchmark-evaluation toolkit for multimodal chemistry "
               "models: SMILES validation and canonicalization, Tanimoto "
               "scoring for chemical OCR, and exam-question grading."};
  app.require_subcommand(1);
  app.add_flag("--json", g_json_errors, "machine-readable errors on stderr");

  // SMILES arrive via remaining() so bracket atoms like [NH4+] are not
  // re-parsed as CLI11 array syntax.
  auto *validate_cmd =
      app.add_subcommand("validate", "check SMILES strings, ok/error each");
  validate_cmd->allow_extras();

  auto *canon_cmd =
      app.add_subcommand("canon", "print canonical SMILES, one per line");
  canon_cmd->allow_extras();

  std::string sim_a, sim_b;
  FingerprintParams sim_params;
  auto *sim_cmd =
      app.add_subcommand("sim", "Tanimoto similarity of two SMILES");
  sim_cmd->add_option("a", sim_a, "first SMILES")->required();
  sim_cmd->add_option("b", sim_b, "second (gold) SMILES")->required();
  sim_cmd->add_option("--radius", sim_params.radius, "fingerprint radius");
  sim_cmd->add_option("--bits", sim_params.width, "fingerprint width");

  std::string eval_config;
  auto *eval_cmd = app.add_subcommand("eval", "run a live evaluation");
  auto *eval_ocr = eval_cmd->add_subcommand("ocr", "chemical OCR benchmark");
  eval_ocr->add_option("--config", eval_config, "run config file")
      ->required();
  auto *eval_exam = eval_cmd->add_subcommand("exam", "exam benchmark");
  eval_exam->add_option("--config", eval_config, "run config file")
      ->required();
  eval_cmd->require_subcommand(1);

  std::string score_pred, score_gold, score_out;
  FingerprintParams score_params;
  auto *score_cmd =
      app.add_subcommand("score", "re-score saved predictions offline");
  auto *score_ocr_cmd = score_cmd->add_subcommand("ocr", "OCR re-scoring");
  score_ocr_cmd->add_option("--pred", score_pred, "predictions.jsonl")
      ->required();
  score_ocr_cmd->add_option("--gold", score_gold, "benchmark JSONL")
      ->required();
  score_ocr_cmd->add_option("--radius", score_params.radius, "radius");
  score_ocr_cmd->add_option("--bits", score_params.width, "width");
  score_ocr_cmd->add_option("--out", score_out, "also write report files");
  auto *score_exam_cmd = score_cmd->add_subcommand("exam", "exam re-scoring");
  score_exam_cmd->add_option("--pred", score_pred, "predictions.jsonl")
      ->required();
  score_exam_cmd->add_option("--gold", score_gold, "benchmark JSONL")
      ->required();
  score_exam_cmd->add_option("--out", score_out, "also write report files");
  score_cmd->require_subcommand(1);

  std::string tpl_path, bindings_path, tpl_out;
  std::uint64_t tpl_seed = 0;
  auto *tpl_cmd = app.add_subcommand("templates", "QA template utilities");
  auto *tpl_expand =
      tpl_cmd->add_subcommand("expand", "expand templates into QA pairs");
  tpl_expand->add_option("--templates", tpl_path, "templates JSONL")
      ->required();
  tpl_expand->add_option("--bindings", bindings_path, "bindings JSONL")
      ->required();
  tpl_expand->add_option("--seed", tpl_seed, "selection seed");
  tpl_expand->add_option("--out", tpl_out, "output path (default stdout)");
  tpl_cmd->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e); // --help
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      if (validate_cmd->remaining().empty()) {
        print_error("usage", "validate requires at least one SMILES");
        return kExitUsage;
      }
      return cmd_validate(validate_cmd->remaining());
    }
    if (canon_cmd->parsed()) {
      if (canon_cmd->remaining().empty()) {
        print_error("usage", "canon requires at least one SMILES");
        return kExitUsage;
      }
      return cmd_canon(canon_cmd->remaining());
    }
    if (sim_cmd->parsed()) {
      return cmd_sim(sim_a, sim_b, sim_params);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(eval_ocr->parsed() ? "ocr" : "exam", eval_config);
    }
    if (score_cmd->parsed()) {
      return cmd_score(score_ocr_cmd->parsed() ? "ocr" : "exam", score_pred,
                       score_gold, score_params, score_out);
    }
    if (tpl_cmd->parsed()) {
      return cmd_templates_expand(tpl_path, bindings_path, tpl_seed, tpl_out);
    }
  } catch (const InvalidSmiles &e) {
    print_error("invalid_smiles", e.what());
    return kExitSchema;
  } catch (const SchemaError &e) {
    print_error("schema", e.what());
    return kExitSchema;
  } catch (const DuplicateId &e) {
    print_error("duplicate_id", e.what());
    return kExitSchema;
  } catch (const GoldInvalid &e) {
    print_error("gold_invalid", e.what());
    return kExitSchema;
  } catch (const EmptyBenchmark &e) {
    print_error("empty_benchmark", e.what());
    return kExitSchema;
  } catch (const NoTemplateForTask &e) {
    print_error("no_template", e.what());
    return kExitSchema;
  } catch (const MissingBinding &e) {
    print_error("missing_binding", e.what());
    return kExitSchema;
  } catch (const ConfigError &e) {
    print_error("config", e.what());
    return kExitEndpoint;
  } catch (const AuthError &e) {
    print_error("auth", e.what());
    return kExitEndpoint;
  } catch (const Error &e) {
    print_error("runtime", e.what());
    return kExitUsage;
  } catch (const std::exception &e) {
    print_error("internal", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

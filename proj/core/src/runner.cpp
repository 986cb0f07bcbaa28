// SPDX-License-Identifier: Apache-2.0

#include "chemeval/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chemeval/smiles.hpp"

namespace chemeval {

using nlohmann::json;
namespace fs = std::filesystem;

ExtractionMode extraction_mode_from_string(const std::string &s) {
  if (s == "heuristic") {
    return ExtractionMode::Heuristic;
  }
  if (s == "judge") {
    return ExtractionMode::Judge;
  }
  if (s == "judge_with_fallback") {
    return ExtractionMode::JudgeWithFallback;
  }
  throw ConfigError("unknown extraction mode: " + s);
}

std::string to_string(ExtractionMode mode) {
  switch (mode) {
  case ExtractionMode::Heuristic:
    return "heuristic";
  case ExtractionMode::Judge:
    return "judge";
  case ExtractionMode::JudgeWithFallback:
    return "judge_with_fallback";
  }
  return "heuristic";
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string interpolate_env(const std::string &value) {
  std::string out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    std::size_t open = value.find("${", pos);
    if (open == std::string::npos) {
      out.append(value, pos, std::string::npos);
      break;
    }
    std::size_t close = value.find('}', open);
    if (close == std::string::npos) {
      out.append(value, pos, std::string::npos);
      break;
    }
    out.append(value, pos, open - pos);
    const std::string name = value.substr(open + 2, close - open - 2);
    if (const char *env = std::getenv(name.c_str())) {
      out += env;
    }
    pos = close + 1;
  }
  return out;
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> parse_ini(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::map<std::string, Section> sections;
  std::string current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') {
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    sections[current][key] = interpolate_env(value);
  }
  return sections;
}

std::string get_str(const Section &s, const std::string &key,
                    const std::string &fallback = "") {
  auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

double get_num(const Section &s, const std::string &key, double fallback) {
  auto it = s.find(key);
  if (it == s.end()) {
    return fallback;
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      it->second + "'");
  }
}

ModelEndpoint endpoint_from_section(const Section &s) {
  ModelEndpoint ep;
  ep.base_url = get_str(s, "base_url");
  ep.api_key_env = get_str(s, "api_key_env");
  ep.model_name = get_str(s, "model_name", get_str(s, "name"));
  ep.timeout_s = get_num(s, "timeout", ep.timeout_s);
  ep.max_retries = static_cast<int>(get_num(s, "max_retries", ep.max_retries));
  ep.max_concurrency =
      static_cast<int>(get_num(s, "max_concurrency", ep.max_concurrency));
  ep.backoff_base_s = get_num(s, "backoff_base", ep.backoff_base_s);
  ep.temperature = get_num(s, "temperature", ep.temperature);
  ep.max_tokens = static_cast<int>(get_num(s, "max_tokens", ep.max_tokens));
  return ep;
}

} // namespace

RunConfig load_run_config(const std::string &path) {
  auto sections = parse_ini(path);
  RunConfig cfg;
  const Section &run = sections["run"];
  cfg.benchmark_path = get_str(run, "benchmark");
  cfg.schema = get_str(run, "schema");
  cfg.output_dir = get_str(run, "output_dir", "chemeval-out");
  cfg.seed = static_cast<std::uint64_t>(get_num(run, "seed", 0));
  cfg.extraction =
      extraction_mode_from_string(get_str(run, "extraction", "heuristic"));

  const Section &fp = sections["fingerprint"];
  cfg.fingerprint.radius =
      static_cast<int>(get_num(fp, "radius", cfg.fingerprint.radius));
  cfg.fingerprint.width =
      static_cast<int>(get_num(fp, "width", cfg.fingerprint.width));

  if (!sections.count("model")) {
    throw ConfigError("config is missing the [model] section");
  }
  cfg.model = endpoint_from_section(sections["model"]);
  if (sections.count("judge")) {
    cfg.judge = endpoint_from_section(sections["judge"]);
  }
  validate_run_config(cfg);
  return cfg;
}

void validate_run_config(const RunConfig &cfg) {
  if (cfg.benchmark_path.empty()) {
    throw ConfigError("config: benchmark path is required");
  }
  if (cfg.schema != "ocr" && cfg.schema != "exam") {
    throw ConfigError("config: schema must be 'ocr' or 'exam'");
  }
  validate_endpoint(cfg.model);
  if (cfg.judge) {
    validate_endpoint(*cfg.judge);
  }
  if (cfg.extraction != ExtractionMode::Heuristic && !cfg.judge) {
    throw ConfigError(
        "config: judge-based extraction requires a [judge] endpoint");
  }
}

// ---------------------------------------------------------------------------
// Predictions and manifest
// ---------------------------------------------------------------------------

namespace detail {

std::string base64_encode(const std::string &bytes) {
  static const char table[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += table[v & 63];
    i += 3;
  }
  if (i + 1 == bytes.size()) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

} // namespace detail

namespace {

struct Prediction {
  std::string id;
  std::optional<std::string> response;
  std::optional<std::string> error;
  double latency_ms = 0.0;
  int retries = 0;
  std::optional<std::string> extracted_smiles;
  std::optional<std::set<char>> extracted_choices;
  std::string method = "heuristic";
};

json prediction_to_json(const Prediction &p) {
  json j;
  j["id"] = p.id;
  j["response"] = p.response ? json(*p.response) : json(nullptr);
  j["error"] = p.error ? json(*p.error) : json(nullptr);
  j["latency_ms"] = p.latency_ms;
  j["retries"] = p.retries;
  j["extracted_smiles"] =
      p.extracted_smiles ? json(*p.extracted_smiles) : json(nullptr);
  if (p.extracted_choices) {
    json letters = json::array();
    for (char c : *p.extracted_choices) {
      letters.push_back(std::string(1, c));
    }
    j["extracted_choices"] = letters;
  } else {
    j["extracted_choices"] = nullptr;
  }
  j["method"] = p.method;
  return j;
}

Prediction prediction_from_json(const json &j) {
  Prediction p;
  p.id = j.at("id").get<std::string>();
  if (j.contains("response") && j["response"].is_string()) {
    p.response = j["response"].get<std::string>();
  }
  if (j.contains("error") && j["error"].is_string()) {
    p.error = j["error"].get<std::string>();
  }
  p.latency_ms = j.value("latency_ms", 0.0);
  p.retries = j.value("retries", 0);
  if (j.contains("extracted_smiles") && j["extracted_smiles"].is_string()) {
    p.extracted_smiles = j["extracted_smiles"].get<std::string>();
  }
  if (j.contains("extracted_choices") && j["extracted_choices"].is_array()) {
    std::set<char> letters;
    for (const json &c : j["extracted_choices"]) {
      const std::string s = c.get<std::string>();
      if (s.size() == 1) {
        letters.insert(s[0]);
      }
    }
    p.extracted_choices = std::move(letters);
  }
  p.method = j.value("method", "heuristic");
  return p;
}

std::map<std::string, Prediction> load_predictions(const std::string &path) {
  std::map<std::string, Prediction> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return out;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      continue;
    }
    Prediction p = prediction_from_json(j);
    out[p.id] = std::move(p);
  }
  return out;
}

void write_predictions(const std::string &path,
                       const std::vector<Prediction> &predictions) {
  std::ofstream out(path, std::ios::binary);
  for (const Prediction &p : predictions) {
    out << prediction_to_json(p).dump() << "\n";
  }
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
#if defined(_WIN32)
  gmtime_s(&tm_utc, &t);
#else
  gmtime_r(&t, &tm_utc);
#endif
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json config_snapshot(const RunConfig &cfg) {
  json j;
  j["benchmark"] = cfg.benchmark_path;
  j["schema"] = cfg.schema;
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["extraction"] = to_string(cfg.extraction);
  j["fingerprint"] = {{"radius", cfg.fingerprint.radius},
                      {"width", cfg.fingerprint.width}};
  auto ep_json = [](const ModelEndpoint &ep) {
    // snapshot carries the env var name, never the key itself
    return json{{"base_url", ep.base_url},
                {"api_key_env", ep.api_key_env},
                {"model_name", ep.model_name},
                {"timeout", ep.timeout_s},
                {"max_retries", ep.max_retries},
                {"max_concurrency", ep.max_concurrency},
                {"temperature", ep.temperature},
                {"max_tokens", ep.max_tokens}};
  };
  j["model"] = ep_json(cfg.model);
  if (cfg.judge) {
    j["judge"] = ep_json(*cfg.judge);
  }
  return j;
}

void write_manifest(const RunConfig &cfg, const std::string &started_at,
                    const std::vector<Prediction> &predictions,
                    const std::vector<std::string> &warnings) {
  json j;
  j["tool_version"] = kToolVersion;
  j["config"] = config_snapshot(cfg);
  j["started_at"] = started_at;
  j["finished_at"] = iso_timestamp();
  json records = json::array();
  for (const Prediction &p : predictions) {
    json r;
    r["id"] = p.id;
    r["latency_ms"] = p.latency_ms;
    r["retries"] = p.retries;
    r["error"] = p.error ? json(*p.error) : json(nullptr);
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  j["warnings"] = warnings;
  std::ofstream out(fs::path(cfg.output_dir) / "manifest.json",
                    std::ios::binary);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Prompt building
// ---------------------------------------------------------------------------

const std::vector<QaTemplate> &builtin_ocr_templates() {
  static const std::vector<QaTemplate> templates = {
      {"ocr-en-1", Lang::En, "ocr",
       "Please recognize the molecule in this image and write its SMILES "
       "notation.",
       ""},
      {"ocr-en-2", Lang::En, "ocr",
       "What is the SMILES representation of the molecular structure shown "
       "in the image?",
       ""},
      {"ocr-zh-1", Lang::Zh, "ocr",
       "请识别图中的分子结构，并给出它的SMILES表示。", ""},
      {"ocr-zh-2", Lang::Zh, "ocr",
       "图中分子的SMILES表达式是什么？请直接给出。", ""},
  };
  return templates;
}

std::string pick_ocr_prompt(Lang lang, std::uint64_t seed,
                            std::size_t record_index) {
  std::vector<const QaTemplate *> matching;
  for (const QaTemplate &tpl : builtin_ocr_templates()) {
    if (tpl.lang == lang) {
      matching.push_back(&tpl);
    }
  }
  const std::size_t pick =
      chemeval::detail::mix64(seed, record_index) % matching.size();
  return matching[pick]->human;
}

std::optional<MessagePart> image_part(const ImageRef &image,
                                      const fs::path &benchmark_dir,
                                      std::string &error) {
  if (image.kind == ImageRef::Kind::Base64) {
    return MessagePart::make_image(image.value, image.media_type);
  }
  fs::path p(image.value);
  if (p.is_relative()) {
    p = benchmark_dir / p;
  }
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    error = "cannot read image file: " + p.string();
    return std::nullopt;
  }
  std::ostringstream bytes;
  bytes << in.rdbuf();
  std::string media = "image/png";
  const std::string ext = p.extension().string();
  if (ext == ".jpg" || ext == ".jpeg") {
    media = "image/jpeg";
  }
  return MessagePart::make_image(detail::base64_encode(bytes.str()), media);
}

std::string render_exam_question(const ExamRecord &rec) {
  std::string text = rec.question;
  if (!rec.choices.empty()) {
    text += "\n";
    for (const auto &[letter, body] : rec.choices) {
      text += "\n";
      text += letter;
      text += ". ";
      text += body;
    }
    text += rec.lang == Lang::Zh
                ? "\n\n请用选项字母作答。"
                : "\n\nAnswer with the letter(s) of the correct choice(s).";
  } else if (rec.qtype == QuestionType::FillBlank) {
    text += rec.lang == Lang::Zh ? "\n\n请按顺序回答每个空。"
                                 : "\n\nAnswer each blank in order.";
  }
  return text;
}

// ---------------------------------------------------------------------------
// Parallel collection
// ---------------------------------------------------------------------------

template <typename Work>
void run_pool(std::size_t n_items, int max_concurrency, Work work) {
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(max_concurrency),
                            std::max<std::size_t>(n_items, 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_items) {
          return;
        }
        work(i);
      }
    });
  }
  for (std::thread &t : workers) {
    t.join();
  }
}

std::map<std::string, std::string>
gold_map_for_ocr(const std::vector<OcrRecord> &records) {
  std::map<std::string, std::string> gold;
  for (const OcrRecord &r : records) {
    gold[r.id] = r.gold_smiles;
  }
  return gold;
}

std::map<std::string, std::string>
gold_map_for_exam(const std::vector<ExamRecord> &records) {
  std::map<std::string, std::string> gold;
  for (const ExamRecord &r : records) {
    std::string answer;
    if (!r.gold_choices.empty()) {
      for (char c : r.gold_choices) {
        answer += c;
      }
    } else if (!r.gold_blanks.empty()) {
      for (std::size_t i = 0; i < r.gold_blanks.size(); ++i) {
        if (i) {
          answer += "; ";
        }
        answer += r.gold_blanks[i];
      }
    } else {
      answer = r.gold_text;
    }
    gold[r.id] = answer;
  }
  return gold;
}

} // namespace

// ---------------------------------------------------------------------------
// OCR evaluation
// ---------------------------------------------------------------------------

EvalReport run_ocr_eval(const RunConfig &cfg, ChatClient &model,
                        ChatClient *judge) {
  validate_run_config(cfg);
  const std::vector<OcrRecord> records =
      load_ocr_benchmark(cfg.benchmark_path);
  fs::create_directories(cfg.output_dir);
  const fs::path benchmark_dir = fs::path(cfg.benchmark_path).parent_path();
  const fs::path pred_path = fs::path(cfg.output_dir) / "predictions.jsonl";
  const std::string started_at = iso_timestamp();

  std::map<std::string, Prediction> resumed = load_predictions(pred_path);
  std::vector<Prediction> predictions(records.size());
  std::vector<std::string> warnings;
  std::mutex warn_mutex;

  auto process = [&](std::size_t i) {
    const OcrRecord &rec = records[i];
    if (auto it = resumed.find(rec.id); it != resumed.end()) {
      predictions[i] = it->second;
      return;
    }
    Prediction p;
    p.id = rec.id;
    std::string image_error;
    auto part = image_part(rec.image, benchmark_dir, image_error);
    if (!part) {
      p.error = image_error;
      predictions[i] = std::move(p);
      return;
    }
    ChatRequest req;
    req.record_id = rec.id;
    req.messages.push_back(
        Message{"user",
                {MessagePart::make_text(
                     pick_ocr_prompt(rec.lang, cfg.seed, i)),
                 std::move(*part)}});
    try {
      ChatResponse res = model.chat(req);
      p.response = res.text;
      p.latency_ms = res.latency_ms;
      p.retries = res.retries;

      ExtractedAnswer extracted;
      if (cfg.extraction == ExtractionMode::Heuristic || judge == nullptr) {
        extracted = extract_smiles_heuristic(res.text);
      } else {
        ChatJudge judge_client(*judge);
        try {
          extracted = extract_smiles_judge(res.text, judge_client, rec.lang);
        } catch (const JudgeUnavailable &e) {
          if (cfg.extraction == ExtractionMode::Judge) {
            throw;
          }
          extracted = extract_smiles_heuristic(res.text);
          std::lock_guard lock(warn_mutex);
          warnings.push_back("record " + rec.id +
                             ": judge unavailable, heuristic fallback (" +
                             e.what() + ")");
        }
      }
      if (extracted.kind == AnswerKind::Smiles) {
        p.extracted_smiles = extracted.smiles;
      }
      p.method =
          extracted.method == ExtractionMethod::Judge ? "judge" : "heuristic";
    } catch (const Error &e) {
      p.error = e.what();
    }
    predictions[i] = std::move(p);
  };

  try {
    run_pool(records.size(), cfg.model.max_concurrency, process);
  } catch (...) {
    write_manifest(cfg, started_at, predictions, warnings);
    throw;
  }

  std::vector<OcrPair> pairs;
  pairs.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (predictions[i].error) {
      warnings.push_back("record " + records[i].id +
                         ": scored 0 (model failure: " +
                         *predictions[i].error + ")");
    }
    pairs.push_back(OcrPair{records[i].id, predictions[i].extracted_smiles,
                            records[i].gold_smiles});
  }
  OcrSummary summary = score_ocr(pairs, cfg.fingerprint);

  EvalReport report;
  report.benchmark_name = fs::path(cfg.benchmark_path).stem().string();
  report.n_records = records.size();
  report.avg_similarity_pct = summary.avg_similarity_pct;
  report.tanimoto_at_1_pct = summary.tanimoto_at_1_pct;
  report.ocr_records = std::move(summary.verdicts);
  report.warnings = warnings;

  write_predictions(pred_path.string(), predictions);
  write_report_files(report, cfg.output_dir);
  write_manifest(cfg, started_at, predictions, warnings);
  return report;
}

EvalReport run_ocr_eval(const RunConfig &cfg) {
  validate_run_config(cfg);
  auto gold = gold_map_for_ocr(load_ocr_benchmark(cfg.benchmark_path));
  std::unique_ptr<ChatClient> model = make_client(cfg.model, gold);
  std::unique_ptr<ChatClient> judge_client;
  if (cfg.judge) {
    judge_client = make_client(*cfg.judge, gold);
  }
  return run_ocr_eval(cfg, *model, judge_client.get());
}

// ---------------------------------------------------------------------------
// Exam evaluation
// ---------------------------------------------------------------------------

namespace {

ExamVerdict score_exam_record(const ExamRecord &rec,
                              const std::optional<std::string> &response,
                              const std::optional<std::set<char>> &choices,
                              JudgeClient *judge,
                              std::vector<std::string> &warnings,
                              std::mutex &warn_mutex) {
  ExamVerdict v;
  v.record_id = rec.id;
  v.question_type = rec.qtype;
  if (!response && !choices) {
    return v; // model failure already warned; zero points
  }
  if (rec.qtype == QuestionType::SingleChoice ||
      rec.qtype == QuestionType::MultiChoice) {
    ExtractedAnswer answer;
    if (choices) {
      answer.kind = AnswerKind::Choices;
      answer.choices = *choices;
    } else {
      answer = extract_choices(*response);
    }
    v.extracted = answer;
    if (answer.kind == AnswerKind::Choices) {
      v.matched_choices = answer.choices;
    }
    v.points = score_choice(rec.gold_choices, answer);
    return v;
  }

  // fill_blank and short_answer both grade through the blank judge; a short
  // answer is a single blank holding the gold text.
  const std::vector<std::string> gold_blanks =
      rec.qtype == QuestionType::FillBlank
          ? rec.gold_blanks
          : std::vector<std::string>{rec.gold_text};
  if (judge == nullptr) {
    std::lock_guard lock(warn_mutex);
    warnings.push_back("record " + rec.id +
                       ": no judge configured, scored 0");
    return v;
  }
  try {
    BlankJudgement jd =
        judge_blanks(rec.question, gold_blanks, *response, *judge, rec.lang);
    v.blank_detail = jd.correct;
    if (jd.malformed_reply) {
      std::lock_guard lock(warn_mutex);
      warnings.push_back("record " + rec.id +
                         ": malformed judge reply, all blanks scored wrong");
    }
    v.points = score_blanks(jd.correct);
  } catch (const JudgeUnavailable &e) {
    std::lock_guard lock(warn_mutex);
    warnings.push_back("record " + rec.id + ": judge unavailable, scored 0 (" +
                       std::string(e.what()) + ")");
  }
  return v;
}

} // namespace

EvalReport run_exam_eval(const RunConfig &cfg, ChatClient &model,
                         ChatClient *judge) {
  validate_run_config(cfg);
  const std::vector<ExamRecord> records =
      load_exam_benchmark(cfg.benchmark_path);
  fs::create_directories(cfg.output_dir);
  const fs::path benchmark_dir = fs::path(cfg.benchmark_path).parent_path();
  const fs::path pred_path = fs::path(cfg.output_dir) / "predictions.jsonl";
  const std::string started_at = iso_timestamp();

  std::map<std::string, Prediction> resumed = load_predictions(pred_path);
  std::vector<Prediction> predictions(records.size());
  std::vector<ExamVerdict> verdicts(records.size());
  std::vector<std::string> warnings;
  std::mutex warn_mutex;
  ChatJudge judge_adapter(judge ? *judge : model); // bound only when used
  JudgeClient *judge_ptr = judge ? &judge_adapter : nullptr;

  auto process = [&](std::size_t i) {
    const ExamRecord &rec = records[i];
    Prediction p;
    if (auto it = resumed.find(rec.id); it != resumed.end()) {
      p = it->second;
    } else {
      p.id = rec.id;
      ChatRequest req;
      req.record_id = rec.id;
      Message user{"user",
                   {MessagePart::make_text(render_exam_question(rec))}};
      for (const ImageRef &img : rec.images) {
        std::string image_error;
        if (auto part = image_part(img, benchmark_dir, image_error)) {
          user.parts.push_back(std::move(*part));
        } else {
          std::lock_guard lock(warn_mutex);
          warnings.push_back("record " + rec.id + ": " + image_error);
        }
      }
      req.messages.push_back(std::move(user));
      try {
        ChatResponse res = model.chat(req);
        p.response = res.text;
        p.latency_ms = res.latency_ms;
        p.retries = res.retries;
        if (rec.qtype == QuestionType::SingleChoice ||
            rec.qtype == QuestionType::MultiChoice) {
          ExtractedAnswer answer = extract_choices(res.text);
          if (answer.kind == AnswerKind::Choices) {
            p.extracted_choices = answer.choices;
          }
        }
      } catch (const Error &e) {
        p.error = e.what();
      }
    }
    if (p.error) {
      std::lock_guard lock(warn_mutex);
      warnings.push_back("record " + rec.id +
                         ": scored 0 (model failure: " + *p.error + ")");
    }
    verdicts[i] = score_exam_record(rec, p.response, p.extracted_choices,
                                    judge_ptr, warnings, warn_mutex);
    predictions[i] = std::move(p);
  };

  try {
    run_pool(records.size(), cfg.model.max_concurrency, process);
  } catch (...) {
    write_manifest(cfg, started_at, predictions, warnings);
    throw;
  }

  EvalReport report;
  report.benchmark_name = fs::path(cfg.benchmark_path).stem().string();
  report.n_records = records.size();
  report.exam_records = verdicts;
  report.total_score_pct = total_score(verdicts);
  report.warnings = warnings;

  write_predictions(pred_path.string(), predictions);
  write_report_files(report, cfg.output_dir);
  write_manifest(cfg, started_at, predictions, warnings);
  return report;
}

EvalReport run_exam_eval(const RunConfig &cfg) {
  validate_run_config(cfg);
  auto gold = gold_map_for_exam(load_exam_benchmark(cfg.benchmark_path));
  std::unique_ptr<ChatClient> model = make_client(cfg.model, gold);
  std::unique_ptr<ChatClient> judge_client;
  if (cfg.judge) {
    judge_client = make_client(*cfg.judge, gold);
  }
  return run_exam_eval(cfg, *model, judge_client.get());
}

// ---------------------------------------------------------------------------
// Offline re-scoring
// ---------------------------------------------------------------------------

EvalReport score_ocr_files(const std::string &pred_path,
                           const std::string &gold_path,
                           const FingerprintParams &params) {
  const std::vector<OcrRecord> records = load_ocr_benchmark(gold_path);
  std::map<std::string, Prediction> predictions = load_predictions(pred_path);

  std::vector<OcrPair> pairs;
  std::vector<std::string> warnings;
  pairs.reserve(records.size());
  for (const OcrRecord &rec : records) {
    std::optional<std::string> pred;
    auto it = predictions.find(rec.id);
    if (it == predictions.end()) {
      warnings.push_back("record " + rec.id + ": no saved prediction");
    } else if (it->second.extracted_smiles) {
      pred = it->second.extracted_smiles;
    } else if (it->second.response) {
      ExtractedAnswer answer = extract_smiles_heuristic(*it->second.response);
      if (answer.kind == AnswerKind::Smiles) {
        pred = answer.smiles;
      }
    }
    pairs.push_back(OcrPair{rec.id, std::move(pred), rec.gold_smiles});
  }
  OcrSummary summary = score_ocr(pairs, params);

  EvalReport report;
  report.benchmark_name = fs::path(gold_path).stem().string();
  report.n_records = records.size();
  report.avg_similarity_pct = summary.avg_similarity_pct;
  report.tanimoto_at_1_pct = summary.tanimoto_at_1_pct;
  report.ocr_records = std::move(summary.verdicts);
  report.warnings = std::move(warnings);
  verify_report_integrity(report);
  return report;
}

EvalReport score_exam_files(const std::string &pred_path,
                            const std::string &gold_path, JudgeClient *judge) {
  const std::vector<ExamRecord> records = load_exam_benchmark(gold_path);
  std::map<std::string, Prediction> predictions = load_predictions(pred_path);
  ExactMatchJudge fallback_judge;
  if (judge == nullptr) {
    judge = &fallback_judge;
  }

  std::vector<ExamVerdict> verdicts;
  std::vector<std::string> warnings;
  std::mutex warn_mutex;
  verdicts.reserve(records.size());
  for (const ExamRecord &rec : records) {
    auto it = predictions.find(rec.id);
    if (it == predictions.end()) {
      warnings.push_back("record " + rec.id + ": no saved prediction");
      ExamVerdict v;
      v.record_id = rec.id;
      v.question_type = rec.qtype;
      verdicts.push_back(std::move(v));
      continue;
    }
    verdicts.push_back(score_exam_record(rec, it->second.response,
                                         it->second.extracted_choices, judge,
                                         warnings, warn_mutex));
  }

  EvalReport report;
  report.benchmark_name = fs::path(gold_path).stem().string();
  report.n_records = records.size();
  report.total_score_pct = total_score(verdicts);
  report.exam_records = std::move(verdicts);
  report.warnings = std::move(warnings);
  verify_report_integrity(report);
  return report;
}

} // namespace chemeval

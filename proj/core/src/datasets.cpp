// SPDX-License-Identifier: Apache-2.0

#include "chemeval/datasets.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "chemeval/smiles.hpp"

namespace chemeval {

namespace {

using nlohmann::json;

const std::set<std::string> &declared_placeholders() {
  static const std::set<std::string> names = {
      "SMILES", "Name",   "Properties", "Answer",
      "path",   "target", "reagent",    "Detailed solutions"};
  return names;
}

json parse_line(const std::string &line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw SchemaError(line_no, "<line>", "not a JSON object");
  }
  return j;
}

std::string require_string(const json &j, const char *field,
                           std::size_t line_no) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw SchemaError(line_no, field, "missing or not a string");
  }
  return j[field].get<std::string>();
}

Lang optional_lang(const json &j, std::size_t line_no) {
  if (!j.contains("lang")) {
    return Lang::En;
  }
  try {
    return lang_from_string(j["lang"].get<std::string>());
  } catch (const std::exception &) {
    throw SchemaError(line_no, "lang", "expected 'en' or 'zh'");
  }
}

ImageRef parse_image(const json &j, std::size_t line_no) {
  if (!j.is_object()) {
    throw SchemaError(line_no, "image", "expected an object");
  }
  ImageRef ref;
  const std::string type = require_string(j, "type", line_no);
  if (type == "path") {
    ref.kind = ImageRef::Kind::Path;
  } else if (type == "base64") {
    ref.kind = ImageRef::Kind::Base64;
    if (j.contains("media_type")) {
      ref.media_type = j["media_type"].get<std::string>();
    }
  } else {
    throw SchemaError(line_no, "image.type", "expected 'path' or 'base64'");
  }
  ref.value = require_string(j, "value", line_no);
  return ref;
}

json image_to_json(const ImageRef &ref) {
  json j;
  j["type"] = ref.kind == ImageRef::Kind::Path ? "path" : "base64";
  j["value"] = ref.value;
  if (ref.kind == ImageRef::Kind::Base64) {
    j["media_type"] = ref.media_type;
  }
  return j;
}

template <typename Fn>
auto load_jsonl(const std::string &path, Fn per_line) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError(0, "<file>", "cannot open " + path);
  }
  using Record = decltype(per_line(json{}, std::size_t{0}));
  std::vector<Record> records;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() ||
        line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    Record rec = per_line(parse_line(line, line_no), line_no);
    if (!seen_ids.insert(rec.id).second) {
      throw DuplicateId("duplicate record id '" + rec.id + "' at line " +
                        std::to_string(line_no));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

} // namespace

std::vector<OcrRecord> load_ocr_benchmark(const std::string &path) {
  return load_jsonl(path, [](const json &j, std::size_t line_no) {
    OcrRecord rec;
    rec.id = require_string(j, "id", line_no);
    rec.gold_smiles = require_string(j, "gold_smiles", line_no);
    if (auto v = validate(rec.gold_smiles); !v) {
      throw SchemaError(line_no, "gold_smiles", v.reason);
    }
    if (!j.contains("image")) {
      throw SchemaError(line_no, "image", "missing");
    }
    rec.image = parse_image(j["image"], line_no);
    rec.lang = optional_lang(j, line_no);
    return rec;
  });
}

std::vector<ExamRecord> load_exam_benchmark(const std::string &path) {
  return load_jsonl(path, [](const json &j, std::size_t line_no) {
    ExamRecord rec;
    rec.id = require_string(j, "id", line_no);
    rec.question = require_string(j, "question", line_no);
    try {
      rec.qtype = question_type_from_string(require_string(j, "qtype", line_no));
    } catch (const ConfigError &e) {
      throw SchemaError(line_no, "qtype", e.what());
    }
    rec.lang = optional_lang(j, line_no);
    if (j.contains("images")) {
      if (!j["images"].is_array()) {
        throw SchemaError(line_no, "images", "expected an array");
      }
      for (const json &img : j["images"]) {
        rec.images.push_back(parse_image(img, line_no));
      }
    }
    if (!j.contains("gold") || !j["gold"].is_object()) {
      throw SchemaError(line_no, "gold", "missing or not an object");
    }
    const json &gold = j["gold"];

    const bool is_choice = rec.qtype == QuestionType::SingleChoice ||
                           rec.qtype == QuestionType::MultiChoice;
    if (is_choice) {
      if (!j.contains("choices") || !j["choices"].is_object()) {
        throw SchemaError(line_no, "choices",
                          "required for choice questions");
      }
      for (auto &[key, text] : j["choices"].items()) {
        if (key.size() != 1 || key[0] < 'A' || key[0] > 'H') {
          throw SchemaError(line_no, "choices", "letters must be A..H");
        }
        rec.choices[key[0]] = text.get<std::string>();
      }
      if (!gold.contains("choices") || !gold["choices"].is_array() ||
          gold["choices"].empty()) {
        throw SchemaError(line_no, "gold.choices", "missing or empty");
      }
      for (const json &c : gold["choices"]) {
        const std::string letter = c.get<std::string>();
        if (letter.size() != 1 || !rec.choices.count(letter[0])) {
          throw SchemaError(line_no, "gold.choices",
                            "gold letter '" + letter +
                                "' is not an offered choice");
        }
        rec.gold_choices.insert(letter[0]);
      }
      if (rec.qtype == QuestionType::SingleChoice &&
          rec.gold_choices.size() != 1) {
        throw SchemaError(line_no, "gold.choices",
                          "single_choice must have exactly one gold letter");
      }
    } else if (rec.qtype == QuestionType::FillBlank) {
      if (!gold.contains("blanks") || !gold["blanks"].is_array() ||
          gold["blanks"].empty()) {
        throw SchemaError(line_no, "gold.blanks", "missing or empty");
      }
      for (const json &b : gold["blanks"]) {
        rec.gold_blanks.push_back(b.get<std::string>());
      }
    } else { // short_answer
      if (!gold.contains("text") || !gold["text"].is_string()) {
        throw SchemaError(line_no, "gold.text", "missing or not a string");
      }
      rec.gold_text = gold["text"].get<std::string>();
    }
    return rec;
  });
}

std::vector<QaTemplate> load_templates(const std::string &path) {
  return load_jsonl(path, [](const json &j, std::size_t line_no) {
    QaTemplate tpl;
    tpl.id = require_string(j, "id", line_no);
    tpl.task = require_string(j, "task", line_no);
    tpl.human = require_string(j, "human", line_no);
    tpl.assistant = require_string(j, "assistant", line_no);
    tpl.lang = optional_lang(j, line_no);
    // every placeholder in the assistant text must be a declared name
    std::size_t pos = 0;
    while ((pos = tpl.assistant.find('{', pos)) != std::string::npos) {
      std::size_t end = tpl.assistant.find('}', pos);
      if (end == std::string::npos) {
        break;
      }
      const std::string name = tpl.assistant.substr(pos + 1, end - pos - 1);
      if (!declared_placeholders().count(name)) {
        throw SchemaError(line_no, "assistant",
                          "unknown placeholder {" + name + "}");
      }
      pos = end + 1;
    }
    return tpl;
  });
}

std::string to_jsonl_line(const OcrRecord &record) {
  json j;
  j["id"] = record.id;
  j["image"] = image_to_json(record.image);
  j["gold_smiles"] = record.gold_smiles;
  j["lang"] = to_string(record.lang);
  return j.dump();
}

std::string to_jsonl_line(const ExamRecord &record) {
  json j;
  j["id"] = record.id;
  j["question"] = record.question;
  j["qtype"] = to_string(record.qtype);
  j["lang"] = to_string(record.lang);
  if (!record.images.empty()) {
    j["images"] = json::array();
    for (const ImageRef &img : record.images) {
      j["images"].push_back(image_to_json(img));
    }
  }
  json gold;
  if (!record.gold_choices.empty()) {
    json choices;
    for (auto &[letter, text] : record.choices) {
      choices[std::string(1, letter)] = text;
    }
    j["choices"] = choices;
    gold["choices"] = json::array();
    for (char c : record.gold_choices) {
      gold["choices"].push_back(std::string(1, c));
    }
  } else if (!record.gold_blanks.empty()) {
    gold["blanks"] = record.gold_blanks;
  } else {
    gold["text"] = record.gold_text;
  }
  j["gold"] = gold;
  return j.dump();
}

QaPair expand_template(const QaTemplate &tpl, const Bindings &bindings) {
  auto expand = [&](const std::string &text) {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t open = text.find('{', pos);
      if (open == std::string::npos) {
        out.append(text, pos, std::string::npos);
        break;
      }
      std::size_t close = text.find('}', open);
      std::string name = close == std::string::npos
                             ? std::string()
                             : text.substr(open + 1, close - open - 1);
      if (close == std::string::npos ||
          !declared_placeholders().count(name)) {
        out.append(text, pos, open - pos + 1);
        pos = open + 1;
        continue;
      }
      out.append(text, pos, open - pos);
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw MissingBinding(name);
      }
      out += it->second;
      pos = close + 1;
    }
    return out;
  };
  return QaPair{expand(tpl.human), expand(tpl.assistant)};
}

std::vector<QaSource> load_qa_sources(const std::string &path) {
  return load_jsonl(path, [](const json &j, std::size_t line_no) {
    QaSource src;
    src.id = require_string(j, "id", line_no);
    src.task = require_string(j, "task", line_no);
    src.lang = optional_lang(j, line_no);
    if (j.contains("bindings")) {
      if (!j["bindings"].is_object()) {
        throw SchemaError(line_no, "bindings", "expected an object");
      }
      for (auto &[key, value] : j["bindings"].items()) {
        src.bindings[key] = value.get<std::string>();
      }
    }
    return src;
  });
}

namespace detail {

std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

} // namespace detail

std::vector<QaPair> build_qa_pairs(const std::vector<QaSource> &records,
                                   const std::vector<QaTemplate> &templates,
                                   std::uint64_t seed) {
  std::vector<QaPair> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const QaSource &rec = records[i];
    std::vector<const QaTemplate *> matching;
    for (const QaTemplate &tpl : templates) {
      if (tpl.task == rec.task && tpl.lang == rec.lang) {
        matching.push_back(&tpl);
      }
    }
    if (matching.empty()) {
      throw NoTemplateForTask("no template for task '" + rec.task +
                              "' lang '" + to_string(rec.lang) + "'");
    }
    const std::size_t pick = detail::mix64(seed, i) % matching.size();
    out.push_back(expand_template(*matching[pick], rec.bindings));
  }
  return out;
}

} // namespace chemeval

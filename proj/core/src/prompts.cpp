// SPDX-License-Identifier: Apache-2.0

#include "chemeval/prompts.hpp"

#include <fstream>
#include <sstream>

#include "chemeval/errors.hpp"

namespace chemeval {

Lang lang_from_string(const std::string &s) {
  if (s == "en") {
    return Lang::En;
  }
  if (s == "zh") {
    return Lang::Zh;
  }
  throw ConfigError("unknown language: " + s + " (expected 'en' or 'zh')");
}

std::string to_string(Lang lang) { return lang == Lang::En ? "en" : "zh"; }

namespace prompts {

const std::string &smiles_extraction(Lang lang) {
  static const std::string en =
      "You will be given the answer of a model describing a molecule.\n"
      "Extract the SMILES string of the molecule from the answer.\n"
      "Reply with the SMILES string only, no explanation. If the answer\n"
      "contains no SMILES string, reply with N/A.\n"
      "\n"
      "Answer:\n"
      "{}\n";
  static const std::string zh =
      "下面是一个模型对分子结构的回答。\n"
      "请从回答中提取分子的SMILES字符串。\n"
      "只回复SMILES字符串，不要任何解释。如果回答中没有SMILES，回复N/A。\n"
      "\n"
      "回答：\n"
      "{}\n";
  return lang == Lang::En ? en : zh;
}

const std::string &blank_scoring(Lang lang) {
  static const std::string en =
      "You are grading a fill-in-the-blank chemistry question.\n"
      "Compare the student answer with the reference answer for each blank.\n"
      "A blank is correct only if the student answer states the same fact as\n"
      "the reference for that blank.\n"
      "Reply with exactly one line: 1 or 0 for each blank in order,\n"
      "separated by commas. No other text.\n"
      "\n"
      "Question:\n"
      "{question}\n"
      "\n"
      "Reference answers (one per blank):\n"
      "{blanks}\n"
      "\n"
      "Student answer:\n"
      "{response}\n";
  static const std::string zh =
      "你正在批改一道化学填空题。\n"
      "请将学生答案与每个空的参考答案逐一比较。\n"
      "只有当学生答案与该空的参考答案表述相同事实时，该空才算正确。\n"
      "只回复一行：按顺序为每个空输出1或0，用英文逗号分隔，不要其他文字。\n"
      "\n"
      "Question:\n"
      "{question}\n"
      "\n"
      "Reference answers (one per blank):\n"
      "{blanks}\n"
      "\n"
      "Student answer:\n"
      "{response}\n";
  return lang == Lang::En ? en : zh;
}

std::string fill(const std::string &tpl, const std::string &value) {
  std::string out;
  out.reserve(tpl.size() + value.size());
  std::size_t pos = 0;
  while (true) {
    std::size_t found = tpl.find("{}", pos);
    if (found == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    out.append(tpl, pos, found - pos);
    out += value;
    pos = found + 2;
  }
  return out;
}

std::string load_template_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open template file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace prompts

} // namespace chemeval

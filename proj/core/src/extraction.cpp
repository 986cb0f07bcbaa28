// SPDX-License-Identifier: Apache-2.0

#include "chemeval/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "chemeval/smiles.hpp"

namespace chemeval {

namespace {

bool smiles_alphabet(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) {
    return true;
  }
  return std::string("[]()=#+-%/\\.@*:").find(c) != std::string::npos;
}

// Sentence punctuation that commonly sticks to a SMILES candidate.
bool strippable(char c) {
  return std::string(".,;:!?-").find(c) != std::string::npos;
}

std::string strip_punctuation(std::string s) {
  while (!s.empty() && strippable(s.back())) {
    s.pop_back();
  }
  while (!s.empty() && strippable(s.front())) {
    s.erase(s.begin());
  }
  return s;
}

// Single characters like "I" or "C" validate as molecules but are almost
// always prose; require at least two characters.
bool plausible(const std::string &candidate) { return candidate.size() >= 2; }

std::optional<std::string> best_smiles_candidate(const std::string &text) {
  std::optional<std::string> best;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!smiles_alphabet(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && smiles_alphabet(text[j])) {
      ++j;
    }
    const std::string run = text.substr(i, j - i);
    i = j;
    for (const std::string &candidate : {strip_punctuation(run), run}) {
      if (plausible(candidate) && validate(candidate)) {
        // ties go to the last occurrence: >= keeps later equal-length hits
        if (!best || candidate.size() >= best->size()) {
          best = candidate;
        }
        break;
      }
    }
  }
  return best;
}

std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string replace_all(std::string s, const std::string &from,
                        const std::string &to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

} // namespace

ExtractedAnswer extract_smiles_heuristic(const std::string &response) {
  ExtractedAnswer out;
  out.raw = response;
  out.method = ExtractionMethod::Heuristic;
  if (auto best = best_smiles_candidate(response)) {
    out.kind = AnswerKind::Smiles;
    out.smiles = *best;
  }
  return out;
}

ExtractedAnswer extract_smiles_judge(const std::string &response,
                                     JudgeClient &judge, Lang lang) {
  const std::string prompt =
      prompts::fill(prompts::smiles_extraction(lang), response);
  const std::string reply = trim(judge.query(prompt));
  std::string candidate = reply;
  // judges sometimes quote or backtick the string
  while (candidate.size() >= 2 &&
         ((candidate.front() == '"' && candidate.back() == '"') ||
          (candidate.front() == '`' && candidate.back() == '`') ||
          (candidate.front() == '\'' && candidate.back() == '\''))) {
    candidate = candidate.substr(1, candidate.size() - 2);
  }
  if (!candidate.empty() && candidate != "N/A" && validate(candidate)) {
    ExtractedAnswer out;
    out.raw = response;
    out.kind = AnswerKind::Smiles;
    out.method = ExtractionMethod::Judge;
    out.smiles = candidate;
    return out;
  }
  return extract_smiles_heuristic(response);
}

ExtractedAnswer extract_choices(const std::string &response) {
  ExtractedAnswer out;
  out.raw = response;
  out.method = ExtractionMethod::Heuristic;

  auto is_choice_letter = [](char c) { return c >= 'A' && c <= 'H'; };
  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  };

  // A standalone run is a maximal sequence of A..H capitals whose flanking
  // characters are not alphanumeric (CJK bytes are > 127 and do not count).
  auto letters_in_line = [&](const std::string &line) {
    std::set<char> found;
    std::size_t i = 0;
    while (i < line.size()) {
      if (!is_choice_letter(line[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && is_choice_letter(line[j])) {
        ++j;
      }
      const bool left_ok = i == 0 || !is_word_char(line[i - 1]);
      const bool right_ok = j == line.size() || !is_word_char(line[j]);
      if (left_ok && right_ok) {
        for (std::size_t k = i; k < j; ++k) {
          found.insert(line[k]);
        }
      }
      i = j;
    }
    return found;
  };

  std::vector<std::string> lines;
  std::istringstream in(response);
  for (std::string line; std::getline(in, line);) {
    lines.push_back(line);
  }
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    std::set<char> found = letters_in_line(*it);
    if (!found.empty()) {
      out.kind = AnswerKind::Choices;
      out.choices = std::move(found);
      return out;
    }
  }
  return out;
}

namespace detail {

std::vector<bool> parse_blank_bits(const std::string &reply, std::size_t n,
                                   bool &ok) {
  ok = false;
  std::istringstream in(reply);
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    std::vector<bool> bits;
    bool valid = true;
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == '0' || line[i] == '1') {
        bits.push_back(line[i] == '1');
        ++i;
      } else {
        valid = false;
        break;
      }
      while (i < line.size() &&
             (line[i] == ',' || line[i] == ' ' || line[i] == '\t')) {
        ++i;
      }
    }
    if (valid && bits.size() == n) {
      ok = true;
      return bits;
    }
  }
  return std::vector<bool>(n, false);
}

} // namespace detail

BlankJudgement judge_blanks(const std::string &question,
                            const std::vector<std::string> &gold_blanks,
                            const std::string &response, JudgeClient &judge,
                            Lang lang) {
  if (gold_blanks.empty()) {
    throw InvalidParameter("judge_blanks requires at least one gold blank");
  }
  std::string blank_list;
  for (std::size_t i = 0; i < gold_blanks.size(); ++i) {
    blank_list += std::to_string(i + 1) + ". " + gold_blanks[i] + "\n";
  }
  std::string prompt = prompts::blank_scoring(lang);
  prompt = replace_all(prompt, "{question}", question);
  prompt = replace_all(prompt, "{blanks}", blank_list);
  prompt = replace_all(prompt, "{response}", response);

  BlankJudgement out;
  out.judge_reply = judge.query(prompt);
  bool ok = false;
  out.correct =
      detail::parse_blank_bits(out.judge_reply, gold_blanks.size(), ok);
  out.malformed_reply = !ok;
  return out;
}

} // namespace chemeval

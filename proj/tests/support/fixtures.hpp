// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_TESTS_FIXTURES_HPP
#define CHEMEVAL_TESTS_FIXTURES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chemeval/metrics.hpp"

namespace chemeval::tests {

/// Frozen 10-pair OCR fixture. The expected aggregates below were computed
/// once with the independent set-based Tanimoto enumerator and hand-checked;
/// they are regression constants, not derived from the code under test.
inline std::vector<OcrPair> ocr_fixture_pairs() {
  return {
      {"f01", std::string("OCC"), "CCO"},            // canonical identity
      {"f02", std::string("CCN"), "CCO"},            // 3/15 shared ids
      {"f03", std::nullopt, "c1ccccc1"},             // no prediction
      {"f04", std::string("Cc1ccccc1"), "c1ccccc1"},
      {"f05", std::string("CC(=O)OC"), "CC(=O)O"},
      {"f06", std::string("C1CCCCC1"), "c1ccccc1"},
      {"f07", std::string("CCCCCC"), "CCCCCC"},      // exact
      {"f08", std::string("CC(C)O"), "CCCO"},
      {"f09", std::string("not a smiles $$"), "CCO"},
      {"f10", std::string("OC1CCCCC1"), "NC1CCCCC1"},
  };
}

// Aggregates for ocr_fixture_pairs() at radius 2, width 2048 (4 decimals).
inline constexpr double kOcrFixtureAvgPct = 31.3254;
inline constexpr double kOcrFixtureTaniPct = 20.0;

// Frozen splitmix64 outputs; the first matches the published reference
// sequence for seed 0.
inline constexpr std::uint64_t kMix64_0_0 = 0xe220a8397b1dcdafULL;
inline constexpr std::uint64_t kMix64_42_7 = 0xccf635ee9e9e2fa4ULL;

/// Seven pairs with exactly three canonical-identity hits: the exact-hit rate
/// is the rational 3/7, which must print as 42.9 at one decimal.
inline std::vector<OcrPair> seven_pair_fixture() {
  return {
      {"s1", std::string("CCO"), "OCC"},      // exact
      {"s2", std::string("c1ccccc1"), "c1ccccc1"}, // exact
      {"s3", std::string("C(C)O"), "CCO"},    // exact
      {"s4", std::string("CCN"), "CCO"},
      {"s5", std::nullopt, "CCO"},
      {"s6", std::string("CCCC"), "CCCCC"},
      {"s7", std::string("CCCO"), "CCCN"},
  };
}

/// Ten-question exam: six choice questions with four correct answers, four
/// blank/short questions of which two grade fully correct under the
/// exact-match judge. Expected total: 6/10 = 60.0.
inline std::string exam_fixture_jsonl() {
  return
      R"({"id":"e01","question":"Which gas turns limewater milky?","qtype":"single_choice","choices":{"A":"H2","B":"CO2","C":"N2","D":"O2"},"gold":{"choices":["B"]}})"
      "\n"
      R"({"id":"e02","question":"Which metal is liquid at room temperature?","qtype":"single_choice","choices":{"A":"Hg","B":"Fe","C":"Cu","D":"Al"},"gold":{"choices":["A"]}})"
      "\n"
      R"({"id":"e03","question":"Which of these are halogens?","qtype":"multi_choice","choices":{"A":"F2","B":"Ne","C":"Cl2","D":"Ar"},"gold":{"choices":["A","C"]}})"
      "\n"
      R"({"id":"e04","question":"Which indicator turns red in acid?","qtype":"single_choice","choices":{"A":"phenolphthalein","B":"starch","C":"none","D":"litmus"},"gold":{"choices":["D"]}})"
      "\n"
      R"({"id":"e05","question":"Which are noble gases?","qtype":"multi_choice","choices":{"A":"O2","B":"He","C":"H2","D":"Ar"},"gold":{"choices":["B","D"]}})"
      "\n"
      R"({"id":"e06","question":"Which particle carries no charge?","qtype":"single_choice","choices":{"A":"neutron","B":"proton","C":"electron","D":"ion"},"gold":{"choices":["A"]}})"
      "\n"
      R"({"id":"e07","question":"Water is made of ___ and ___.","qtype":"fill_blank","gold":{"blanks":["oxygen","hydrogen"]}})"
      "\n"
      R"({"id":"e08","question":"A reaction that releases heat is called ___.","qtype":"fill_blank","gold":{"blanks":["exothermic"]}})"
      "\n"
      R"({"id":"e09","question":"Name the elements in NaCl plus the noble gas in air: ___, ___, ___.","qtype":"fill_blank","gold":{"blanks":["sodium","chlorine","argon"]}})"
      "\n"
      R"({"id":"e10","question":"State the principle governing equilibrium shifts.","qtype":"short_answer","gold":{"text":"Le Chatelier's principle"}})"
      "\n";
}

/// Model responses for the exam fixture, keyed by record id.
inline std::map<std::string, std::string> exam_fixture_responses() {
  return {
      {"e01", "Limewater turns milky with carbon dioxide.\nAnswer: B"},
      {"e02", "I choose C"}, // wrong
      {"e03", "Answer: AC"},
      {"e04", "The answer is D."},
      {"e05", "Answer: B"}, // incomplete set, wrong
      {"e06", "The answer is A"},
      {"e07", "The blanks are oxygen and hydrogen."},
      {"e08", "It is exothermic."},
      {"e09", "sodium, chlorine, neon"}, // third blank wrong
      {"e10", "conservation of mass"},   // wrong
  };
}

/// predictions.jsonl matching exam_fixture_responses(), for offline scoring.
inline std::string exam_fixture_predictions_jsonl() {
  std::string out;
  for (const auto &[id, response] : exam_fixture_responses()) {
    nlohmann::json j;
    j["id"] = id;
    j["response"] = response;
    out += j.dump();
    out += "\n";
  }
  return out;
}

} // namespace chemeval::tests

#endif

// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_PROMPTS_HPP
#define CHEMEVAL_PROMPTS_HPP

#include <string>

namespace chemeval {

enum class Lang { En, Zh };

Lang lang_from_string(const std::string &s);
std::string to_string(Lang lang);

namespace prompts {

/// Judge prompt asking for the SMILES contained in a model answer.
/// `{}` is the placeholder for the answer text.
const std::string &smiles_extraction(Lang lang);

/// Judge prompt grading fill-in-the-blank answers. Placeholders:
/// {question}, {blanks} (numbered reference list), {response}.
/// The judge must reply with one line of comma-separated 1/0, one per blank.
const std::string &blank_scoring(Lang lang);

/// Fills every occurrence of `{}` in tpl with value.
std::string fill(const std::string &tpl, const std::string &value);

/// Loads a template file (UTF-8) verbatim.
std::string load_template_file(const std::string &path);

} // namespace prompts

} // namespace chemeval

#endif // CHEMEVAL_PROMPTS_HPP

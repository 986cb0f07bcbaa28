// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_REPORT_HPP
#define CHEMEVAL_REPORT_HPP

#include <string>

#include "chemeval/metrics.hpp"

namespace chemeval {

/// Deterministic JSON rendering (sorted keys, no timestamps); identical
/// inputs produce identical bytes across runs and platforms.
std::string report_json(const EvalReport &report);

/// Markdown summary table, percentages at one decimal.
std::string report_markdown(const EvalReport &report);

/// Verifies integrity, then writes report.json and report.md into dir.
void write_report_files(const EvalReport &report, const std::string &dir);

} // namespace chemeval

#endif // CHEMEVAL_REPORT_HPP

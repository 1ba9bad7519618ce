// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "citeneed/corpus/types.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/reason_model.hpp"

namespace citeneed::analysis {

struct AttentionEntry {
  std::string group;  // predicted label or reason
  double score = 0.0;  // probability of that prediction
  std::vector<std::string> tokens;
  std::vector<double> weights;  // one per token
};

/// Entries grouped by predicted reason, in taxonomy order, input order within a group.
/// Throws VariantError for a model without attention.
std::vector<AttentionEntry> reason_attention_entries(const models::ReasonModel& model,
                                                     const std::vector<corpus::Statement>& statements);
/// Same for the citation-need model; groups "positive" (p >= 0.5) then "negative".
std::vector<AttentionEntry> need_attention_entries(const models::NeedModel& model,
                                                   const std::vector<corpus::Statement>& statements);

struct RenderedReport {
  std::string html;
  std::string text;
};

/// Self-contained HTML where each token's background alpha is its weight
/// over the statement's largest weight, with a per-statement legend of the
/// weights; the text form lists `token:weight` pairs. Numbers use fixed
/// printf formats, so output bytes depend only on the entries.
RenderedReport render_attention_report(const std::vector<AttentionEntry>& entries, const std::string& title);

/// Writes `path` (HTML) and `path` with extension ".txt" (text).
void write_attention_report(const RenderedReport& report, const std::filesystem::path& path);

}  // namespace citeneed::analysis

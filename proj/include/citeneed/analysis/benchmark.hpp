// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "citeneed/analysis/metrics.hpp"
#include "citeneed/corpus/types.hpp"

namespace citeneed::analysis {

// Published full-scale results. They need the complete featured-article
// dump, the crowdsourced reason corpus and 100-dim pretrained vectors, so
// they are reference points for the benchmark tool, not test thresholds.

/// F1 of RNNa_wS on FA: no citation, citation, average.
struct NeedTarget {
  double negative_f1, positive_f1, average_f1;
};
inline constexpr NeedTarget kFaNeedTarget{0.902, 0.905, 0.904};

/// Point-biserial r of the lead-section indicator on FA.
inline constexpr double kFaSectionCorrelation = -0.621;

struct ReasonTarget {
  corpus::Reason reason;
  double pre_p, pre_r, pre_f1;          // fine-tuned from the FA model
  double scratch_p, scratch_r, scratch_f1;  // reason data only
};
inline constexpr std::array<ReasonTarget, corpus::kReasonCount> kReasonTargets{{
    {corpus::Reason::quotation, 0.44, 0.65, 0.52, 0.43, 0.46, 0.45},
    {corpus::Reason::statistics, 0.20, 0.20, 0.20, 0.28, 0.15, 0.19},
    {corpus::Reason::controversial, 0.12, 0.02, 0.04, 0.04, 0.01, 0.02},
    {corpus::Reason::opinion, 0.20, 0.12, 0.15, 0.19, 0.12, 0.15},
    {corpus::Reason::life, 0.13, 0.06, 0.09, 0.30, 0.06, 0.10},
    {corpus::Reason::scientific, 0.62, 0.56, 0.59, 0.54, 0.58, 0.56},
    {corpus::Reason::historical, 0.56, 0.67, 0.61, 0.54, 0.74, 0.62},
    {corpus::Reason::other, 0.13, 0.05, 0.07, 0.14, 0.08, 0.10},
}};
inline constexpr std::array<double, 6> kReasonAverageTarget{0.30, 0.29, 0.28, 0.31, 0.28, 0.27};

/// Label counts, most frequent first; ties keep taxonomy order. Labels with
/// no instance are left out.
std::vector<std::pair<corpus::Reason, std::size_t>> reason_frequencies(
    std::span<const corpus::ReasonInstance> instances);

/// True when the three most frequent labels are historical, quotation and
/// scientific in any order. A tie across the third place counts as a
/// failure since the top three are then not determined by the data.
bool top_reasons_match_reference(const std::vector<std::pair<corpus::Reason, std::size_t>>& frequencies);

/// Rows "no citation | citation | average" for the reference and for the
/// measured binary report (classes named negative and positive).
std::string need_table(const EvaluationReport& measured, const std::string& model_name);

/// Per-reason P/R/F1 for the fine-tuned and from-scratch models next to the
/// reference values, closing with the macro "avg." row. Either report may be
/// null when that model was not trained.
std::string reason_table(const EvaluationReport* pretrained, const EvaluationReport* scratch);

}  // namespace citeneed::analysis

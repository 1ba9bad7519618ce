// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/benchmark.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "citeneed/error.hpp"

namespace citeneed::analysis {

namespace {

std::string cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%-8.3f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

const ClassMetrics& find_class(const EvaluationReport& r, std::string_view name) {
  for (const auto& c : r.per_class) {
    if (c.name == name) return c;
  }
  throw Error("benchmark: report has no class \"" + std::string(name) + "\"");
}

std::string prf(const EvaluationReport* r, std::string_view name) {
  if (!r) return pad("-", 9) + pad("-", 9) + pad("-", 9);
  for (const auto& c : r->per_class) {
    if (c.name == name) return cell(c.precision) + " " + cell(c.recall) + " " + cell(c.f1) + " ";
  }
  return pad("-", 9) + pad("-", 9) + pad("-", 9);
}

std::string rstrip_lines(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      while (!out.empty() && out.back() == ' ') out.pop_back();
    }
    out += c;
  }
  return out;
}

}  // namespace

std::vector<std::pair<corpus::Reason, std::size_t>> reason_frequencies(
    std::span<const corpus::ReasonInstance> instances) {
  std::array<std::size_t, corpus::kReasonCount> counts{};
  for (const auto& inst : instances) ++counts[static_cast<std::size_t>(inst.reason)];
  std::vector<std::pair<corpus::Reason, std::size_t>> out;
  for (corpus::Reason r : corpus::kAllReasons) {
    if (counts[static_cast<std::size_t>(r)]) out.emplace_back(r, counts[static_cast<std::size_t>(r)]);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

bool top_reasons_match_reference(const std::vector<std::pair<corpus::Reason, std::size_t>>& frequencies) {
  if (frequencies.size() < 3) return false;
  if (frequencies.size() > 3 && frequencies[3].second == frequencies[2].second) return false;
  const std::set<corpus::Reason> top{frequencies[0].first, frequencies[1].first, frequencies[2].first};
  return top == std::set<corpus::Reason>{corpus::Reason::historical, corpus::Reason::quotation,
                                         corpus::Reason::scientific};
}

std::string need_table(const EvaluationReport& measured, const std::string& model_name) {
  const auto& neg = find_class(measured, "negative");
  const auto& pos = find_class(measured, "positive");
  std::string s = pad("", 22) + pad("no citation", 13) + pad("citation", 10) + "average\n";
  s += pad("reference RNNa_wS", 22) + pad(cell(kFaNeedTarget.negative_f1), 13) +
       pad(cell(kFaNeedTarget.positive_f1), 10) + cell(kFaNeedTarget.average_f1) + "\n";
  s += pad(model_name, 22) + pad(cell(neg.f1), 13) + pad(cell(pos.f1), 10) + cell(measured.macro_f1) + "\n";
  return rstrip_lines(s);
}

std::string reason_table(const EvaluationReport* pretrained, const EvaluationReport* scratch) {
  std::string s = pad("", 15) + pad("pre-trained", 27) + pad("no pre-training", 27) + pad("reference pre-trained", 27) +
                  "reference no pre-training\n";
  const std::string prf_head = pad("P", 9) + pad("R", 9) + pad("F1", 9);
  s += pad("", 15) + prf_head + prf_head + prf_head + prf_head + "\n";
  for (const auto& t : kReasonTargets) {
    const std::string name(corpus::to_string(t.reason));
    s += pad(name, 15) + prf(pretrained, name) + prf(scratch, name) + cell(t.pre_p) + " " + cell(t.pre_r) + " " +
         cell(t.pre_f1) + " " + cell(t.scratch_p) + " " + cell(t.scratch_r) + " " + cell(t.scratch_f1) + "\n";
  }
  auto avg = [](const EvaluationReport* r) {
    if (!r) return pad("-", 9) + pad("-", 9) + pad("-", 9);
    return cell(r->macro_precision) + " " + cell(r->macro_recall) + " " + cell(r->macro_f1) + " ";
  };
  s += pad("avg.", 15) + avg(pretrained) + avg(scratch);
  for (double v : kReasonAverageTarget) s += cell(v) + " ";
  return rstrip_lines(s + "\n");
}

}  // namespace citeneed::analysis

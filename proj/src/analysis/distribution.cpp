// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/distribution.hpp"

#include <algorithm>
#include <map>

#include "citeneed/util/csv.hpp"

namespace citeneed::analysis {

std::optional<GroupBy> parse_group_by(std::string_view s) {
  if (s == "section") return GroupBy::section;
  if (s == "topic") return GroupBy::topic;
  return std::nullopt;
}

std::vector<DistributionRow> reason_distribution(const std::vector<corpus::ReasonInstance>& instances,
                                                 GroupBy group_by, std::size_t top_n) {
  std::array<std::map<std::string, std::size_t>, corpus::kReasonCount> counts;
  std::array<std::size_t, corpus::kReasonCount> totals{};
  for (const auto& inst : instances) {
    std::string group;
    if (group_by == GroupBy::section) {
      group = inst.statement.is_lead ? "LEAD" : inst.statement.section_heading;
    } else {
      group = inst.topic.empty() ? "(none)" : inst.topic;
    }
    const auto r = static_cast<std::size_t>(inst.reason);
    ++counts[r][group];
    ++totals[r];
  }
  std::vector<DistributionRow> rows;
  for (corpus::Reason reason : corpus::kAllReasons) {
    const auto r = static_cast<std::size_t>(reason);
    std::vector<std::pair<std::string, std::size_t>> groups(counts[r].begin(), counts[r].end());
    std::stable_sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (top_n && groups.size() > top_n) groups.resize(top_n);
    for (auto& [group, count] : groups) {
      rows.push_back({reason, group, count, static_cast<double>(count) / static_cast<double>(totals[r])});
    }
  }
  return rows;
}

std::string distribution_csv(const std::vector<DistributionRow>& rows) {
  std::string out = "reason,group,count,fraction\n";
  for (const auto& row : rows) {
    out += std::string(corpus::to_string(row.reason)) + "," + util::csv_field(row.group) + "," +
           std::to_string(row.count) + "," + util::fixed(row.fraction, 6) + "\n";
  }
  return out;
}

}  // namespace citeneed::analysis

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citeneed/corpus/types.hpp"

namespace citeneed::analysis {

enum class GroupBy { section, topic };

std::optional<GroupBy> parse_group_by(std::string_view s);

struct DistributionRow {
  corpus::Reason reason = corpus::Reason::other;
  std::string group;
  std::size_t count = 0;
  double fraction = 0.0;  // of this reason's instances
};

/// Groups are the section heading ("LEAD" for the lead) or the topic
/// ("(none)" when empty). Rows follow taxonomy order, then count descending,
/// then group name; at most `top_n` rows per reason (0 = all). Reasons with
/// no instance produce no row.
std::vector<DistributionRow> reason_distribution(const std::vector<corpus::ReasonInstance>& instances,
                                                 GroupBy group_by, std::size_t top_n = 0);

/// `reason,group,count,fraction`.
std::string distribution_csv(const std::vector<DistributionRow>& rows);

}  // namespace citeneed::analysis

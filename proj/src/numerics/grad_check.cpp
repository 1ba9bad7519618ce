// SPDX-License-Identifier: Apache-2.0
#include "citeneed/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "citeneed/error.hpp"

namespace citeneed::numerics {

GradCheckReport grad_check(const std::function<double()>& loss, std::span<ParamSlot* const> slots,
                           const GradCheckOptions& options) {
  GradCheckReport report;
  const double h = options.step;
  for (ParamSlot* slot : slots) {
    auto value = slot->value.data();
    auto grad = slot->grad.data();
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double saved = value[j];
      value[j] = saved + h;
      const double up = loss();
      value[j] = saved - h;
      const double down = loss();
      value[j] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw NumericError("grad_check: loss is non-finite at " + slot->name + "[" +
                           std::to_string(j) + "]");
      }
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = grad[j];
      const double scale = std::max({std::abs(analytic), std::abs(numeric), options.magnitude_floor});
      const double rel = std::abs(analytic - numeric) / scale;
      ++report.coordinates_checked;
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_slot = slot->name;
        report.worst_index = j;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  report.passed = report.max_relative_error <= options.tolerance;
  return report;
}

}  // namespace citeneed::numerics

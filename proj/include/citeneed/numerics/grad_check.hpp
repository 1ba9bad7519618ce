// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "citeneed/numerics/adam.hpp"

namespace citeneed::numerics {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Denominator floor of the relative error, so coordinates whose true
  /// gradient is ~0 are judged on absolute error instead.
  double magnitude_floor = 1e-6;
};

struct GradCheckReport {
  bool passed = true;
  double max_relative_error = 0.0;
  std::string worst_slot;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

/// Compares each slot's `grad` (already populated with the analytic gradient
/// of `loss`) against central differences (f(x+h) - f(x-h)) / 2h.
/// relative error = |analytic - numeric| / max(|analytic|, |numeric|, floor).
/// Parameter values are restored after every probe.
GradCheckReport grad_check(const std::function<double()>& loss, std::span<ParamSlot* const> slots,
                           const GradCheckOptions& options = {});

}  // namespace citeneed::numerics

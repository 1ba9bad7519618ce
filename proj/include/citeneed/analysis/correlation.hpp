// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citeneed/error.hpp"

namespace citeneed::analysis {

class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

/// r = ((M1 - M0) / s) * sqrt(p * q) with s the population standard
/// deviation of all values, M1/M0 the group means and p/q the group shares.
/// Throws UndefinedCorrelation for single-class labels or constant values.
double point_biserial(std::span<const std::uint8_t> labels, std::span<const double> values);

struct FeatureCorrelation {
  std::string feature;
  double r = 0.0;
};

struct CorrelationReport {
  std::vector<FeatureCorrelation> entries;  // by |r| descending, then column order
  std::vector<std::string> omitted;         // columns where r is undefined
};

/// Column-wise point_biserial over a row-major table.
CorrelationReport correlate_features(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& rows,
                                     std::span<const std::uint8_t> labels);

/// `feature,r_pb` rows; omitted columns follow as `feature,undefined`.
std::string correlation_csv(const CorrelationReport& report);

}  // namespace citeneed::analysis

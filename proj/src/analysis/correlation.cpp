// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citeneed/util/csv.hpp"

namespace citeneed::analysis {

double point_biserial(std::span<const std::uint8_t> labels, std::span<const double> values) {
  if (labels.size() != values.size()) throw ShapeError("point_biserial: labels and values differ in length");
  const std::size_t n = values.size();
  double sum1 = 0, sum0 = 0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i]) {
      sum1 += values[i];
      ++n1;
    } else {
      sum0 += values[i];
    }
  }
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw UndefinedCorrelation("point_biserial: labels contain a single class");
  const double mean = (sum1 + sum0) / static_cast<double>(n);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (sd == 0.0 || std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    throw UndefinedCorrelation("point_biserial: values are constant");
  }
  const double p = static_cast<double>(n1) / static_cast<double>(n);
  const double m1 = sum1 / static_cast<double>(n1), m0 = sum0 / static_cast<double>(n0);
  return std::clamp((m1 - m0) / sd * std::sqrt(p * (1.0 - p)), -1.0, 1.0);
}

CorrelationReport correlate_features(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& rows,
                                     std::span<const std::uint8_t> labels) {
  if (rows.size() != labels.size()) throw ShapeError("correlate_features: row and label counts differ");
  CorrelationReport report;
  std::vector<double> column(rows.size());
  for (std::size_t f = 0; f < names.size(); ++f) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != names.size()) throw ShapeError("correlate_features: ragged rows");
      column[i] = rows[i][f];
    }
    try {
      report.entries.push_back({names[f], point_biserial(labels, column)});
    } catch (const UndefinedCorrelation&) {
      report.omitted.push_back(names[f]);
    }
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.r) > std::abs(b.r); });
  return report;
}

std::string correlation_csv(const CorrelationReport& report) {
  std::string out = "feature,r_pb\n";
  for (const auto& e : report.entries) out += util::csv_field(e.feature) + "," + util::fixed(e.r, 6) + "\n";
  for (const auto& name : report.omitted) out += util::csv_field(name) + ",undefined\n";
  return out;
}

}  // namespace citeneed::analysis

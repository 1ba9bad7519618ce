// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace citeneed::analysis {

/// counts[true_class][predicted_class].
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> classes);

  void add(std::size_t truth, std::size_t predicted, std::size_t count = 1);

  const std::vector<std::string>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth][predicted]; }
  std::size_t row_sum(std::size_t truth) const;
  std::size_t column_sum(std::size_t predicted) const;
  std::size_t total() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> classes_;
  std::vector<std::vector<std::size_t>> counts_;
};

struct ClassMetrics {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // true instances
  std::size_t predicted = 0;  // predicted instances
  // A zero denominator yields metric 0 and sets the flag.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct EvaluationReport {
  std::vector<ClassMetrics> per_class;
  // Unweighted means over the classes that occur in the truth or the
  // predictions; classes absent from both are listed in `excluded`.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<std::string> excluded;
  ConfusionMatrix confusion;
  std::size_t n_instances = 0;
};

EvaluationReport precision_recall_f1(const ConfusionMatrix& confusion);

/// `class,precision,recall,f1,support` rows, then a `macro` row.
std::string report_csv(const EvaluationReport& report);

/// Fixed-width P / R / F1 table with the confusion matrix underneath.
std::string format_report(const EvaluationReport& report);

}  // namespace citeneed::analysis

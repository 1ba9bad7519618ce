// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "citeneed/error.hpp"

namespace citeneed::analysis {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)), counts_(classes_.size(), std::vector<std::size_t>(classes_.size(), 0)) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::size_t count) {
  if (truth >= size() || predicted >= size()) throw Error("confusion matrix: class index out of range");
  counts_[truth][predicted] += count;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t s = 0;
  for (std::size_t v : counts_[truth]) s += v;
  return s;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::size_t s = 0;
  for (const auto& row : counts_) s += row[predicted];
  return s;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += row_sum(i);
  return s;
}

EvaluationReport precision_recall_f1(const ConfusionMatrix& confusion) {
  EvaluationReport report;
  report.confusion = confusion;
  report.n_instances = confusion.total();
  std::size_t correct = 0, included = 0;
  for (std::size_t c = 0; c < confusion.size(); ++c) {
    ClassMetrics m;
    m.name = confusion.classes()[c];
    const std::size_t tp = confusion.at(c, c);
    correct += tp;
    m.support = confusion.row_sum(c);
    m.predicted = confusion.column_sum(c);
    if (m.predicted == 0) {
      m.precision_undefined = true;
    } else {
      m.precision = static_cast<double>(tp) / static_cast<double>(m.predicted);
    }
    if (m.support == 0) {
      m.recall_undefined = true;
    } else {
      m.recall = static_cast<double>(tp) / static_cast<double>(m.support);
    }
    if (m.precision + m.recall == 0.0) {
      m.f1_undefined = true;
    } else {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    if (m.support == 0 && m.predicted == 0) {
      report.excluded.push_back(m.name);
    } else {
      report.macro_precision += m.precision;
      report.macro_recall += m.recall;
      report.macro_f1 += m.f1;
      ++included;
    }
    report.per_class.push_back(std::move(m));
  }
  if (included > 0) {
    report.macro_precision /= static_cast<double>(included);
    report.macro_recall /= static_cast<double>(included);
    report.macro_f1 /= static_cast<double>(included);
  }
  if (report.n_instances > 0) report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n_instances);
  return report;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string report_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (const auto& m : report.per_class) {
    out << m.name << ',' << fixed(m.precision, 6) << ',' << fixed(m.recall, 6) << ',' << fixed(m.f1, 6) << ','
        << m.support << '\n';
  }
  out << "macro," << fixed(report.macro_precision, 6) << ',' << fixed(report.macro_recall, 6) << ','
      << fixed(report.macro_f1, 6) << ',' << report.n_instances << '\n';
  return out.str();
}

std::string format_report(const EvaluationReport& report) {
  std::size_t width = 5;
  for (const auto& m : report.per_class) width = std::max(width, m.name.size());
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  std::ostringstream out;
  out << pad("class") << "P       R       F1      support\n";
  for (const auto& m : report.per_class) {
    out << pad(m.name) << fixed(m.precision) << "  " << fixed(m.recall) << "  " << fixed(m.f1) << "  " << m.support;
    if (m.precision_undefined || m.recall_undefined) out << "  (undefined set to 0)";
    out << '\n';
  }
  out << pad("macro") << fixed(report.macro_precision) << "  " << fixed(report.macro_recall) << "  "
      << fixed(report.macro_f1) << "  " << report.n_instances << '\n';
  out << "accuracy " << fixed(report.accuracy) << '\n';
  if (!report.excluded.empty()) {
    out << "excluded from macro (no instances):";
    for (const auto& e : report.excluded) out << ' ' << e;
    out << '\n';
  }
  out << "confusion (rows = true, columns = predicted)\n" << pad("");
  for (const auto& c : report.confusion.classes()) out << c << ' ';
  out << '\n';
  for (std::size_t r = 0; r < report.confusion.size(); ++r) {
    out << pad(report.confusion.classes()[r]);
    for (std::size_t c = 0; c < report.confusion.size(); ++c) {
      const std::string v = std::to_string(report.confusion.at(r, c));
      out << v << std::string(report.confusion.classes()[c].size() + 1 > v.size()
                                  ? report.confusion.classes()[c].size() + 1 - v.size()
                                  : 1,
                              ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace citeneed::analysis

// SPDX-License-Identifier: Apache-2.0
#include "citeneed/corpus/types.hpp"

namespace citeneed::corpus {

namespace {

constexpr std::array<std::string_view, kReasonCount> kReasonNames = {
    "quotation", "statistics", "controversial", "opinion",
    "life",      "scientific", "historical",    "other"};

}  // namespace

std::string_view to_string(QualityClass q) { return q == QualityClass::featured ? "featured" : "other"; }

std::string_view to_string(Label l) { return l == Label::positive ? "positive" : "negative"; }

std::string_view to_string(DatasetKind d) {
  switch (d) {
    case DatasetKind::FA: return "FA";
    case DatasetKind::LQN: return "LQN";
    case DatasetKind::RND: return "RND";
  }
  return "FA";
}

std::string_view to_string(Reason r) { return kReasonNames[static_cast<std::size_t>(r)]; }

std::optional<QualityClass> parse_quality(std::string_view s) {
  if (s == "featured") return QualityClass::featured;
  if (s == "other") return QualityClass::other;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "positive") return Label::positive;
  if (s == "negative") return Label::negative;
  return std::nullopt;
}

std::optional<DatasetKind> parse_dataset(std::string_view s) {
  if (s == "FA") return DatasetKind::FA;
  if (s == "LQN") return DatasetKind::LQN;
  if (s == "RND") return DatasetKind::RND;
  return std::nullopt;
}

std::optional<Reason> parse_reason(std::string_view s) {
  for (std::size_t i = 0; i < kReasonCount; ++i) {
    if (kReasonNames[i] == s) return static_cast<Reason>(i);
  }
  return std::nullopt;
}

}  // namespace citeneed::corpus

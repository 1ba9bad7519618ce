// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citeneed::corpus {

enum class QualityClass { featured, other };

/// One extracted sentence. `text` has every citation marker removed; the
/// markers survive only as the two flags.
struct Statement {
  std::string article_id;
  std::string section_heading;  // empty for the lead section
  bool is_lead = false;
  std::string text;
  std::vector<std::string> tokens;
  bool has_inline_citation = false;
  bool has_citation_needed_tag = false;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Paragraph {
  std::vector<Statement> statements;
  bool has_any_citation = false;  // any member has_inline_citation

  friend bool operator==(const Paragraph&, const Paragraph&) = default;
};

struct Section {
  std::string heading;  // empty = lead
  std::vector<Paragraph> paragraphs;

  friend bool operator==(const Section&, const Section&) = default;
};

struct RawArticle {
  std::string article_id;
  std::string title;
  QualityClass quality_class = QualityClass::other;
  std::vector<Section> sections;  // sections[0] is always the lead
  std::string topic;              // optional metadata, may be empty
};

enum class Label { positive, negative };
enum class DatasetKind { FA, LQN, RND };

struct LabeledInstance {
  Statement statement;
  Label label = Label::negative;
  DatasetKind dataset = DatasetKind::FA;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

/// The eight reasons a statement needs a citation, in taxonomy order.
enum class Reason { quotation, statistics, controversial, opinion, life, scientific, historical, other };
inline constexpr std::size_t kReasonCount = 8;
inline constexpr std::array<Reason, kReasonCount> kAllReasons = {
    Reason::quotation, Reason::statistics, Reason::controversial, Reason::opinion,
    Reason::life,      Reason::scientific, Reason::historical,    Reason::other};

struct ReasonInstance {
  Statement statement;
  Reason reason = Reason::other;
  DatasetKind dataset = DatasetKind::FA;
  std::string topic;  // optional per-article metadata

  friend bool operator==(const ReasonInstance&, const ReasonInstance&) = default;
};

std::string_view to_string(QualityClass q);
std::string_view to_string(Label l);
std::string_view to_string(DatasetKind d);
std::string_view to_string(Reason r);

std::optional<QualityClass> parse_quality(std::string_view s);
std::optional<Label> parse_label(std::string_view s);
std::optional<DatasetKind> parse_dataset(std::string_view s);
std::optional<Reason> parse_reason(std::string_view s);

/// Shortest accepted statement, in tokens. Shorter extracts never enter a dataset.
inline constexpr std::size_t kMinStatementTokens = 3;

}  // namespace citeneed::corpus

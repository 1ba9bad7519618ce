// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "citeneed/corpus/types.hpp"

namespace citeneed::corpus {

inline constexpr int kCorpusSchemaVersion = 1;

// Corpus files are JSONL, UTF-8, LF line endings, one instance per line:
//   {"schema_version":1,"article_id":..,"section":..,"is_lead":..,"text":..,
//    "tokens":[..],"label":"positive"|"negative","dataset":"FA"|"LQN"|"RND"}
// Reason corpora add "reason" and, when known, "topic".
//
// The citation flags of a Statement are not stored; on read they are
// restored from label and dataset (positive FA/RND -> inline citation,
// positive LQN -> citation-needed tag, negative -> neither).

void write_corpus(const std::vector<LabeledInstance>& instances, const std::filesystem::path& path);
std::vector<LabeledInstance> read_corpus(const std::filesystem::path& path);

void write_reason_corpus(const std::vector<ReasonInstance>& instances, const std::filesystem::path& path);
std::vector<ReasonInstance> read_reason_corpus(const std::filesystem::path& path);

/// Statements from any corpus file; label and reason are not required.
std::vector<Statement> read_statements(const std::filesystem::path& path);

/// One article of an article dump (JSONL):
///   {"article_id":..,"title":..,"quality":"featured"|"other","markup":..,"topic":..}
/// "title" and "topic" are optional.
struct ArticleSource {
  std::string article_id;
  std::string title;
  QualityClass quality = QualityClass::other;
  std::string markup;
  std::string topic;
};

std::vector<ArticleSource> read_article_dump(const std::filesystem::path& path);
void write_article_dump(const std::vector<ArticleSource>& articles, const std::filesystem::path& path);

/// Entire file as a string; DataError naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace citeneed::corpus

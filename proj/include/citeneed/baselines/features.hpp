// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "citeneed/baselines/lexicon.hpp"
#include "citeneed/corpus/types.hpp"
#include "citeneed/encoder/embeddings.hpp"

namespace citeneed::baselines {

struct FeatureConfig {
  bool dictionary = true;    // per-lemma counts and per-category totals
  bool pos = true;           // tag frequencies / token count
  bool section = true;       // is_lead as 0/1
  bool word_vectors = true;  // mean pretrained vector; needs embeddings
};

/// Fixed feature layout for one lexicon set and configuration. Columns:
///   dict:<category>            token count matching the category
///   dict:<category>:<lemma>    token count matching that lemma (lemmas sorted)
///   pos:<TAG>                  12 columns
///   section:is_lead
///   vec:<i>                    embedding dimension columns
class FeatureExtractor {
 public:
  FeatureExtractor(LexiconSet lexicons, const encoder::PretrainedVectors* embeddings, FeatureConfig config);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t dim() const { return names_.size(); }

  /// A token matches a lemma when any of its lemma_candidates equals it;
  /// it counts at most once per category (first matching candidate).
  std::vector<double> extract(const corpus::Statement& statement) const;

 private:
  LexiconSet lexicons_;
  const encoder::PretrainedVectors* embeddings_;
  FeatureConfig config_;
  std::vector<std::string> names_;
  std::array<std::vector<std::string>, 4> sorted_lemmas_;
};

struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
};

FeatureTable extract_all(const FeatureExtractor& extractor, const std::vector<const corpus::Statement*>& statements);

/// Header line of feature names, then one row per vector; an optional
/// trailing `label` column.
void write_features_csv(const FeatureTable& table, const std::vector<std::string>* labels,
                        const std::filesystem::path& path);
std::string features_csv(const FeatureTable& table, const std::vector<std::string>* labels);

}  // namespace citeneed::baselines

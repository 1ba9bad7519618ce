// SPDX-License-Identifier: Apache-2.0
#include "citeneed/baselines/features.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "citeneed/baselines/pos_tagger.hpp"
#include "citeneed/corpus/text.hpp"
#include "citeneed/error.hpp"
#include "citeneed/util/csv.hpp"

namespace citeneed::baselines {

FeatureExtractor::FeatureExtractor(LexiconSet lexicons, const encoder::PretrainedVectors* embeddings,
                                   FeatureConfig config)
    : lexicons_(std::move(lexicons)), embeddings_(embeddings), config_(config) {
  if (config_.word_vectors && !embeddings_) throw Error("word-vector features need embeddings");
  if (config_.dictionary) {
    for (VerbCategory c : kAllCategories) {
      const std::string cat(to_string(c));
      names_.push_back("dict:" + cat);
      auto& sorted = sorted_lemmas_[static_cast<std::size_t>(c)];
      sorted.assign(lexicons_[c].lemmas.begin(), lexicons_[c].lemmas.end());
      for (const std::string& lemma : sorted) names_.push_back("dict:" + cat + ":" + lemma);
    }
  }
  if (config_.pos) {
    for (PosTag t : kAllPosTags) names_.push_back("pos:" + std::string(to_string(t)));
  }
  if (config_.section) names_.push_back("section:is_lead");
  if (config_.word_vectors) {
    for (std::size_t i = 0; i < embeddings_->dim; ++i) names_.push_back("vec:" + std::to_string(i));
  }
}

std::vector<double> FeatureExtractor::extract(const corpus::Statement& statement) const {
  std::vector<double> out;
  out.reserve(names_.size());
  std::vector<std::string> lowered;
  lowered.reserve(statement.tokens.size());
  for (const std::string& t : statement.tokens) lowered.push_back(corpus::to_lower(t));

  if (config_.dictionary) {
    std::vector<std::vector<std::string>> candidates;
    candidates.reserve(lowered.size());
    for (const std::string& t : lowered) candidates.push_back(lemma_candidates(t));
    for (VerbCategory c : kAllCategories) {
      const auto& lemmas = lexicons_[c].lemmas;
      const auto& sorted = sorted_lemmas_[static_cast<std::size_t>(c)];
      std::vector<double> per_lemma(sorted.size(), 0.0);
      double total = 0.0;
      for (const auto& cands : candidates) {
        for (const std::string& cand : cands) {
          if (!lemmas.count(cand)) continue;
          const auto pos = std::lower_bound(sorted.begin(), sorted.end(), cand) - sorted.begin();
          per_lemma[static_cast<std::size_t>(pos)] += 1.0;
          total += 1.0;
          break;
        }
      }
      out.push_back(total);
      out.insert(out.end(), per_lemma.begin(), per_lemma.end());
    }
  }
  if (config_.pos) {
    std::array<double, kPosTagCount> freq{};
    for (PosTag t : pos_tag(statement.tokens)) freq[static_cast<std::size_t>(t)] += 1.0;
    const double n = static_cast<double>(statement.tokens.size());
    for (double f : freq) out.push_back(n > 0 ? f / n : 0.0);
  }
  if (config_.section) out.push_back(statement.is_lead ? 1.0 : 0.0);
  if (config_.word_vectors) {
    std::vector<double> mean(embeddings_->dim, 0.0);
    std::size_t known = 0;
    for (std::size_t i = 0; i < statement.tokens.size(); ++i) {
      auto it = embeddings_->vectors.find(statement.tokens[i]);
      if (it == embeddings_->vectors.end()) it = embeddings_->vectors.find(lowered[i]);
      if (it == embeddings_->vectors.end()) continue;
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += it->second[k];
      ++known;
    }
    if (known > 0)
      for (double& v : mean) v /= static_cast<double>(known);
    out.insert(out.end(), mean.begin(), mean.end());
  }
  return out;
}

FeatureTable extract_all(const FeatureExtractor& extractor, const std::vector<const corpus::Statement*>& statements) {
  FeatureTable table;
  table.names = extractor.names();
  table.rows.reserve(statements.size());
  for (const corpus::Statement* s : statements) table.rows.push_back(extractor.extract(*s));
  return table;
}

std::string features_csv(const FeatureTable& table, const std::vector<std::string>* labels) {
  using util::csv_field;
  if (labels && labels->size() != table.rows.size()) throw Error("features_csv: label count does not match rows");
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < table.names.size(); ++i) out << (i ? "," : "") << csv_field(table.names[i]);
  if (labels) out << (table.names.empty() ? "" : ",") << "label";
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t i = 0; i < table.rows[r].size(); ++i) out << (i ? "," : "") << table.rows[r][i];
    if (labels) out << (table.rows[r].empty() ? "" : ",") << csv_field((*labels)[r]);
    out << '\n';
  }
  return out.str();
}

void write_features_csv(const FeatureTable& table, const std::vector<std::string>* labels,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << features_csv(table, labels);
}

}  // namespace citeneed::baselines

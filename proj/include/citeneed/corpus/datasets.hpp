// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "citeneed/corpus/types.hpp"

namespace citeneed::corpus {

// Eligibility shared by every builder. A statement needs at least
// kMinStatementTokens tokens and must not carry both an inline citation and
// a citation-needed tag.
//   citation positive: inline citation.
//   tag positive:      citation-needed tag.
//   negative:          neither marker, in a paragraph without any citation.
bool eligible_citation_positive(const Statement& s);
bool eligible_tag_positive(const Statement& s);
bool eligible_negative(const Statement& s, const Paragraph& paragraph);

/// Featured-article dataset. Every article must be featured. Candidates are
/// enumerated in article_id order, sampled uniformly without replacement
/// from a seeded generator, and the combined list is shuffled.
std::vector<LabeledInstance> build_fa_dataset(std::span<const RawArticle> articles, std::size_t n_pos,
                                              std::size_t n_neg, std::uint64_t seed);

/// Citation-needed dataset. Only articles with at least one tagged
/// statement contribute; positives are tagged statements.
std::vector<LabeledInstance> build_lqn_dataset(std::span<const RawArticle> articles, std::size_t n_pos,
                                               std::size_t n_neg, std::uint64_t seed);

/// Random-article dataset, any quality, balanced n_total / 2 per class.
std::vector<LabeledInstance> build_rnd_dataset(std::span<const RawArticle> articles, std::size_t n_total,
                                               std::uint64_t seed);

inline constexpr std::size_t kDefaultFaPerClass = 10000;
inline constexpr std::size_t kDefaultRndTotal = 20000;

}  // namespace citeneed::corpus

// SPDX-License-Identifier: Apache-2.0
#include "citeneed/corpus/datasets.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include "citeneed/error.hpp"
#include "citeneed/numerics/rng.hpp"

namespace citeneed::corpus {

namespace {

bool usable(const Statement& s) {
  return s.tokens.size() >= kMinStatementTokens &&
         !(s.has_inline_citation && s.has_citation_needed_tag);
}

struct Pools {
  std::vector<const Statement*> positives;
  std::vector<const Statement*> negatives;
};

std::vector<const RawArticle*> sorted_articles(std::span<const RawArticle> articles) {
  std::vector<const RawArticle*> order;
  std::set<std::string> seen;
  for (const RawArticle& a : articles) {
    if (a.article_id.empty()) throw DataError("article with empty article_id");
    if (!seen.insert(a.article_id).second) throw DataError("duplicate article_id: " + a.article_id);
    order.push_back(&a);
  }
  std::sort(order.begin(), order.end(),
            [](const RawArticle* x, const RawArticle* y) { return x->article_id < y->article_id; });
  return order;
}

Pools collect(const std::vector<const RawArticle*>& articles,
              const std::function<bool(const Statement&)>& is_positive) {
  Pools pools;
  for (const RawArticle* a : articles) {
    for (const Section& section : a->sections) {
      for (const Paragraph& p : section.paragraphs) {
        for (const Statement& s : p.statements) {
          if (is_positive(s)) {
            pools.positives.push_back(&s);
          } else if (eligible_negative(s, p)) {
            pools.negatives.push_back(&s);
          }
        }
      }
    }
  }
  return pools;
}

std::vector<const Statement*> sample(std::vector<const Statement*> pool, std::size_t n,
                                     numerics::Rng& rng) {
  // Partial Fisher-Yates: the first n slots become a uniform sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(n);
  return pool;
}

std::vector<LabeledInstance> assemble(const Pools& pools, std::size_t n_pos, std::size_t n_neg,
                                      DatasetKind kind, std::uint64_t seed) {
  if (pools.positives.size() < n_pos) {
    throw DataError("insufficient eligible positives for " + std::string(to_string(kind)) +
                    ": requested " + std::to_string(n_pos) + ", available " +
                    std::to_string(pools.positives.size()));
  }
  if (pools.negatives.size() < n_neg) {
    throw DataError("insufficient eligible negatives for " + std::string(to_string(kind)) +
                    ": requested " + std::to_string(n_neg) + ", available " +
                    std::to_string(pools.negatives.size()));
  }
  numerics::Rng rng(seed);
  std::vector<LabeledInstance> out;
  out.reserve(n_pos + n_neg);
  for (const Statement* s : sample(pools.positives, n_pos, rng)) {
    out.push_back({*s, Label::positive, kind});
  }
  for (const Statement* s : sample(pools.negatives, n_neg, rng)) {
    out.push_back({*s, Label::negative, kind});
  }
  rng.shuffle(std::span<LabeledInstance>(out));
  return out;
}

}  // namespace

bool eligible_citation_positive(const Statement& s) { return usable(s) && s.has_inline_citation; }

bool eligible_tag_positive(const Statement& s) { return usable(s) && s.has_citation_needed_tag; }

bool eligible_negative(const Statement& s, const Paragraph& paragraph) {
  return usable(s) && !s.has_inline_citation && !s.has_citation_needed_tag && !paragraph.has_any_citation;
}

std::vector<LabeledInstance> build_fa_dataset(std::span<const RawArticle> articles, std::size_t n_pos,
                                              std::size_t n_neg, std::uint64_t seed) {
  const auto order = sorted_articles(articles);
  for (const RawArticle* a : order) {
    if (a->quality_class != QualityClass::featured) {
      throw DataError("FA dataset requires featured articles; " + a->article_id + " is not featured");
    }
  }
  return assemble(collect(order, eligible_citation_positive), n_pos, n_neg, DatasetKind::FA, seed);
}

std::vector<LabeledInstance> build_lqn_dataset(std::span<const RawArticle> articles, std::size_t n_pos,
                                               std::size_t n_neg, std::uint64_t seed) {
  auto order = sorted_articles(articles);
  std::erase_if(order, [](const RawArticle* a) {
    for (const Section& section : a->sections) {
      for (const Paragraph& p : section.paragraphs) {
        for (const Statement& s : p.statements) {
          if (s.has_citation_needed_tag) return false;
        }
      }
    }
    return true;
  });
  return assemble(collect(order, eligible_tag_positive), n_pos, n_neg, DatasetKind::LQN, seed);
}

std::vector<LabeledInstance> build_rnd_dataset(std::span<const RawArticle> articles, std::size_t n_total,
                                               std::uint64_t seed) {
  if (n_total % 2 != 0) throw DataError("n_total must be even");
  const auto order = sorted_articles(articles);
  return assemble(collect(order, eligible_citation_positive), n_total / 2, n_total / 2,
                  DatasetKind::RND, seed);
}

}  // namespace citeneed::corpus

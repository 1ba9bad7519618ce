// SPDX-License-Identifier: Apache-2.0
#include "synthetic.hpp"

#include <array>

#include "citeneed/numerics/rng.hpp"

namespace citeneed::testing {

namespace {

constexpr std::array<const char*, 6> kHeadings{"", "History", "Career", "Geography", "Reception", "Legacy"};

corpus::Statement make_statement(std::vector<std::string> tokens, numerics::Rng& rng, std::size_t id) {
  corpus::Statement s;
  s.article_id = "syn" + std::to_string(id % 97);
  const char* heading = kHeadings[rng.below(kHeadings.size())];
  s.section_heading = heading;
  s.is_lead = s.section_heading.empty();
  for (std::size_t i = 0; i < tokens.size(); ++i) s.text += (i ? " " : "") + tokens[i];
  s.tokens = std::move(tokens);
  return s;
}

std::vector<std::string> filler(const PlantedCueOptions& o, numerics::Rng& rng) {
  const std::size_t n_filler = o.vocab_size - o.n_cues;
  const std::size_t len = o.min_tokens + rng.below(o.max_tokens - o.min_tokens + 1);
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < len; ++i) tokens.push_back(filler_token(rng.below(n_filler)));
  return tokens;
}

void plant(std::vector<std::string>& tokens, std::size_t cue, numerics::Rng& rng) {
  tokens[rng.below(tokens.size())] = cue_token(cue);
}

}  // namespace

std::string cue_token(std::size_t k) { return "cue" + std::to_string(k); }
std::string filler_token(std::size_t k) { return "w" + std::to_string(k); }

std::vector<corpus::LabeledInstance> planted_cue_corpus(const PlantedCueOptions& o) {
  numerics::Rng rng(o.seed);
  std::vector<corpus::LabeledInstance> out;
  for (std::size_t i = 0; i < o.n_sentences; ++i) {
    const bool positive = i % 2 == 0;
    auto tokens = filler(o, rng);
    if (positive) plant(tokens, rng.below(o.n_cues), rng);
    corpus::LabeledInstance inst;
    inst.statement = make_statement(std::move(tokens), rng, i);
    inst.statement.has_inline_citation = positive;
    inst.label = positive ? corpus::Label::positive : corpus::Label::negative;
    inst.dataset = corpus::DatasetKind::FA;
    out.push_back(std::move(inst));
  }
  rng.shuffle(std::span<corpus::LabeledInstance>(out));
  return out;
}

std::vector<corpus::ReasonInstance> planted_reason_corpus(std::size_t per_class, std::size_t cues_per_class,
                                                          const PlantedCueOptions& o) {
  numerics::Rng rng(o.seed);
  std::vector<corpus::ReasonInstance> out;
  for (std::size_t i = 0; i < per_class * corpus::kReasonCount; ++i) {
    const std::size_t c = i % corpus::kReasonCount;
    auto tokens = filler(o, rng);
    plant(tokens, c * cues_per_class + rng.below(cues_per_class), rng);
    corpus::ReasonInstance inst;
    inst.statement = make_statement(std::move(tokens), rng, i);
    inst.statement.has_inline_citation = true;
    inst.reason = corpus::kAllReasons[c];
    inst.dataset = corpus::DatasetKind::FA;
    out.push_back(std::move(inst));
  }
  rng.shuffle(std::span<corpus::ReasonInstance>(out));
  return out;
}

}  // namespace citeneed::testing

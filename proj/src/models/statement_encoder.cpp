// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/statement_encoder.hpp"

#include <algorithm>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::models {

namespace kernels = numerics::kernels;
using encoder::Direction;

std::optional<SectionInput> section_of(const corpus::Statement& s) {
  if (!s.is_lead && s.section_heading.empty()) return std::nullopt;
  return SectionInput{s.section_heading, s.is_lead};
}

std::size_t StatementEncoder::output_dim() const {
  const std::size_t h = hidden_dim();
  std::size_t d = has_attention(variant) ? 2 * h : h;
  if (has_section(variant)) d += section_gru.hidden_dim();
  return d;
}

std::vector<ParamSlot*> StatementEncoder::slots() {
  std::vector<ParamSlot*> out{&words.matrix};
  if (has_section(variant)) {
    out.push_back(&sections.matrix);
    for (ParamSlot* s : section_gru.slots()) out.push_back(s);
  }
  for (ParamSlot* s : forward_gru.slots()) out.push_back(s);
  if (has_attention(variant)) {
    for (ParamSlot* s : backward_gru.slots()) out.push_back(s);
    for (ParamSlot* s : attention.slots()) out.push_back(s);
  }
  return out;
}

std::vector<const ParamSlot*> StatementEncoder::slots() const {
  auto mutable_slots = const_cast<StatementEncoder*>(this)->slots();
  return {mutable_slots.begin(), mutable_slots.end()};
}

void StatementEncoder::validate() const {
  forward_gru.validate();
  if (forward_gru.input_dim() != embed_dim()) throw ShapeError("encoder: GRU input dim does not match embeddings");
  if (words.trainable.size() != words.matrix.value.rows() || words.vocab.size() != words.matrix.value.rows()) {
    throw ShapeError("encoder: vocabulary and embedding rows disagree");
  }
  if (max_len == 0) throw Error("encoder: max_len must be positive");
  if (has_section(variant)) {
    section_gru.validate();
    if (section_gru.input_dim() != sections.dim()) throw ShapeError("encoder: section GRU input dim mismatch");
    if (sections.matrix.value.rows() != sections.index.size() + 1) {
      throw ShapeError("encoder: section map and embedding rows disagree");
    }
  }
  if (has_attention(variant)) {
    backward_gru.validate();
    attention.validate();
    if (backward_gru.input_dim() != embed_dim() || backward_gru.hidden_dim() != hidden_dim()) {
      throw ShapeError("encoder: backward GRU dims differ from forward GRU");
    }
    if (attention.state_dim() != 2 * hidden_dim()) throw ShapeError("encoder: attention dim mismatch");
  }
}

StatementEncoder make_statement_encoder(Variant variant, const ModelDims& dims,
                                        const std::vector<const corpus::Statement*>& training,
                                        const encoder::PretrainedVectors* pretrained, bool train_pretrained,
                                        numerics::Rng& rng) {
  if (dims.embed_dim == 0 || dims.hidden_dim == 0 || dims.max_len == 0) {
    throw Error("model dimensions must be positive");
  }
  StatementEncoder enc;
  enc.variant = variant;
  enc.max_len = dims.max_len;
  enc.words = encoder::make_word_embeddings(encoder::Vocabulary::from_statements(training), dims.embed_dim,
                                            pretrained, rng, train_pretrained);
  if (has_section(variant)) {
    enc.sections = encoder::make_section_embeddings(training, dims.embed_dim, rng);
    enc.section_gru = GruParams::glorot(dims.embed_dim, dims.hidden_dim, rng, "section_gru");
  }
  enc.forward_gru = GruParams::glorot(dims.embed_dim, dims.hidden_dim, rng, "gru_fwd");
  if (has_attention(variant)) {
    enc.backward_gru = GruParams::glorot(dims.embed_dim, dims.hidden_dim, rng, "gru_bwd");
    enc.attention = encoder::AttentionParams::glorot(2 * dims.hidden_dim, 2 * dims.hidden_dim, rng, "attention");
  }
  return enc;
}

EncoderPass encode_statement(const StatementEncoder& enc, const std::vector<std::string>& tokens,
                             const std::optional<SectionInput>& section) {
  if (tokens.empty()) throw DataError("statement has no tokens");
  if (has_section(enc.variant) && !section) {
    throw VariantError(std::string(variant_name(enc.variant)) + " needs a section for every statement");
  }
  EncoderPass pass;
  pass.input = encoder::embed_tokens(tokens, enc.words, enc.max_len);
  const std::size_t n = enc.max_len, h = enc.hidden_dim();
  if (has_attention(enc.variant)) {
    pass.forward = encoder::run_gru_traced(pass.input.values, pass.input.mask, enc.forward_gru, Direction::forward);
    pass.backward =
        encoder::run_gru_traced(pass.input.values, pass.input.mask, enc.backward_gru, Direction::backward);
    pass.states = Tensor({n, 2 * h});
    for (std::size_t t = 0; t < n; ++t) {
      auto row = pass.states.row(t);
      std::copy_n(pass.forward.states.row(t).begin(), h, row.begin());
      std::copy_n(pass.backward.states.row(t).begin(), h, row.begin() + static_cast<std::ptrdiff_t>(h));
    }
    pass.attention = encoder::global_attention_traced(pass.states, pass.input.mask, enc.attention);
    const auto c = pass.attention.result.context.data();
    pass.representation.assign(c.begin(), c.end());
  } else {
    pass.forward = encoder::run_gru_traced(pass.input.values, pass.input.mask, enc.forward_gru, Direction::forward);
    const auto last = pass.forward.states.row(n - 1);
    pass.representation.assign(last.begin(), last.end());
  }
  if (has_section(enc.variant)) {
    pass.section =
        encoder::encode_section_traced(enc.sections.row(section->heading, section->is_lead), enc.sections,
                                       enc.section_gru);
    const auto v = pass.section.vector.data();
    pass.representation.insert(pass.representation.end(), v.begin(), v.end());
  }
  return pass;
}

void backward_statement(StatementEncoder& enc, const EncoderPass& pass, std::span<const double> d_representation) {
  const std::size_t n = enc.max_len, h = enc.hidden_dim();
  std::size_t offset = 0;
  Tensor d_seq({n, enc.embed_dim()});
  if (has_attention(enc.variant)) {
    Tensor d_states({n, 2 * h});
    encoder::backward_attention(pass.attention, pass.states, pass.input.mask, d_representation.subspan(0, 2 * h),
                                enc.attention, d_states);
    Tensor d_fwd({n, h}), d_bwd({n, h});
    for (std::size_t t = 0; t < n; ++t) {
      const auto row = d_states.row(t);
      std::copy_n(row.begin(), h, d_fwd.row(t).begin());
      std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(h), h, d_bwd.row(t).begin());
    }
    encoder::backward_gru(pass.forward, pass.input.values, d_fwd, enc.forward_gru, &d_seq);
    encoder::backward_gru(pass.backward, pass.input.values, d_bwd, enc.backward_gru, &d_seq);
    offset = 2 * h;
  } else {
    Tensor d_states({n, h});
    std::copy_n(d_representation.begin(), h, d_states.row(n - 1).begin());
    encoder::backward_gru(pass.forward, pass.input.values, d_states, enc.forward_gru, &d_seq);
    offset = h;
  }
  if (has_section(enc.variant)) {
    encoder::backward_section(pass.section, d_representation.subspan(offset), enc.sections, enc.section_gru);
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (!pass.input.mask[t]) continue;
    const std::size_t row = pass.input.rows[t];
    if (!enc.words.trainable[row]) continue;
    kernels::add(d_seq.row(t), enc.words.matrix.grad.row(row));
  }
}

}  // namespace citeneed::models

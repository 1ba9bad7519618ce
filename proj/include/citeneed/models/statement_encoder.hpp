// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "citeneed/corpus/types.hpp"
#include "citeneed/encoder/attention.hpp"
#include "citeneed/encoder/embeddings.hpp"
#include "citeneed/encoder/gru.hpp"
#include "citeneed/encoder/section.hpp"
#include "citeneed/models/variant.hpp"

namespace citeneed::models {

using encoder::GruParams;
using numerics::ParamSlot;
using numerics::Tensor;

struct ModelDims {
  std::size_t embed_dim = encoder::kDefaultEmbeddingDim;
  std::size_t hidden_dim = 100;
  std::size_t max_len = encoder::kDefaultMaxLen;
};

struct SectionInput {
  std::string heading;
  bool is_lead = false;
};

/// Section context of a statement. A non-lead statement with an empty
/// heading has no section.
std::optional<SectionInput> section_of(const corpus::Statement& s);

/// Everything between the tokens and the dense layer.
struct StatementEncoder {
  Variant variant = Variant::rnna_ws;
  std::size_t max_len = encoder::kDefaultMaxLen;
  encoder::WordEmbeddings words;
  encoder::SectionEmbeddings sections;  // "+S" variants only
  GruParams section_gru;                // "+S" variants only
  GruParams forward_gru;
  GruParams backward_gru;              // attention variants only
  encoder::AttentionParams attention;  // attention variants only

  std::size_t embed_dim() const { return words.dim(); }
  std::size_t hidden_dim() const { return forward_gru.hidden_dim(); }
  /// Length of the representation fed to the dense layer.
  std::size_t output_dim() const;

  /// Parameters present for the variant, in a fixed order: word embeddings,
  /// section embeddings, section GRU, forward GRU, backward GRU, attention.
  std::vector<ParamSlot*> slots();
  std::vector<const ParamSlot*> slots() const;

  void validate() const;
};

/// Builds an encoder with seeded initialization. Vocabulary and section
/// keys come from `training`. Draw order: word rows, section rows, section
/// GRU, forward GRU, backward GRU, attention.
StatementEncoder make_statement_encoder(Variant variant, const ModelDims& dims,
                                        const std::vector<const corpus::Statement*>& training,
                                        const encoder::PretrainedVectors* pretrained, bool train_pretrained,
                                        numerics::Rng& rng);

/// Forward intermediates of one statement.
struct EncoderPass {
  encoder::EmbeddedSequence input;
  encoder::GruTrace forward;
  encoder::GruTrace backward;
  Tensor states;  // n x 2*hidden, attention variants
  encoder::AttentionTrace attention;
  encoder::SectionTrace section;
  std::vector<double> representation;
};

/// Throws DataError on a statement without tokens and VariantError when a
/// "+S" variant gets no section.
EncoderPass encode_statement(const StatementEncoder& enc, const std::vector<std::string>& tokens,
                             const std::optional<SectionInput>& section);

/// Accumulates grads for d loss / d representation. Frozen embedding rows
/// receive no gradient.
void backward_statement(StatementEncoder& enc, const EncoderPass& pass, std::span<const double> d_representation);

}  // namespace citeneed::models

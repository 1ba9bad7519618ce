// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>

#include "citeneed/encoder/embeddings.hpp"
#include "citeneed/encoder/gru.hpp"

namespace citeneed::encoder {

struct SectionTrace {
  std::size_t row = SectionEmbeddings::kUnk;
  GruStepCache step;
  Tensor vector;  // hidden
};

/// Looks up the section row and runs one GRU step on it from h_0 = 0.
Tensor encode_section(const std::string& heading, bool is_lead, const SectionEmbeddings& s, const GruParams& p);
SectionTrace encode_section_traced(std::size_t row, const SectionEmbeddings& s, const GruParams& p);

/// Accumulates into the GRU grads and the looked-up embedding row's grad.
void backward_section(const SectionTrace& trace, std::span<const double> d_vector, SectionEmbeddings& s,
                      GruParams& p);

}  // namespace citeneed::encoder

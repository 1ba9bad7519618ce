// SPDX-License-Identifier: Apache-2.0
#include "citeneed/encoder/section.hpp"

#include "citeneed/error.hpp"

namespace citeneed::encoder {

SectionTrace encode_section_traced(std::size_t row, const SectionEmbeddings& s, const GruParams& p) {
  p.validate();
  if (s.dim() != p.input_dim()) {
    throw ShapeError("encode_section: section dim " + std::to_string(s.dim()) + " does not match GRU input " +
                     std::to_string(p.input_dim()));
  }
  if (row >= s.matrix.value.rows()) throw ShapeError("encode_section: row out of range");
  SectionTrace trace;
  trace.row = row;
  trace.vector = Tensor({p.hidden_dim()});
  const std::vector<double> h0(p.hidden_dim(), 0.0);
  gru_step_forward(s.matrix.value.row(row), h0, p, trace.step, trace.vector.data());
  return trace;
}

Tensor encode_section(const std::string& heading, bool is_lead, const SectionEmbeddings& s, const GruParams& p) {
  return encode_section_traced(s.row(heading, is_lead), s, p).vector;
}

void backward_section(const SectionTrace& trace, std::span<const double> d_vector, SectionEmbeddings& s,
                      GruParams& p) {
  std::vector<double> d_h0(p.hidden_dim(), 0.0);
  gru_step_backward(trace.step, s.matrix.value.row(trace.row), d_vector, p, s.matrix.grad.row(trace.row), d_h0);
}

}  // namespace citeneed::encoder

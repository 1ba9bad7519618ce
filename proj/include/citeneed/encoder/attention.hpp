// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "citeneed/numerics/adam.hpp"
#include "citeneed/numerics/rng.hpp"
#include "citeneed/numerics/tensor.hpp"

namespace citeneed::encoder {

using numerics::Mask;
using numerics::ParamSlot;
using numerics::Tensor;

/// Additive scoring: e_t = v_a . tanh(W_a h_t).
/// W_a: d_a x h_enc, v_a: d_a.
struct AttentionParams {
  ParamSlot w_a, v_a;

  std::size_t state_dim() const { return w_a.value.cols(); }
  std::size_t score_dim() const { return w_a.value.rows(); }
  std::array<ParamSlot*, 2> slots() { return {&w_a, &v_a}; }
  std::array<const ParamSlot*, 2> slots() const { return {&w_a, &v_a}; }

  void validate() const;

  static AttentionParams zeros(std::size_t state_dim, std::size_t score_dim, const std::string& prefix = "attention");
  /// Draw order: W_a, then v_a.
  static AttentionParams glorot(std::size_t state_dim, std::size_t score_dim, numerics::Rng& rng,
                                const std::string& prefix = "attention");
};

struct AttentionResult {
  Tensor weights;  // n, zero on masked positions
  Tensor context;  // h_enc
};

struct AttentionTrace {
  AttentionResult result;
  Tensor projected;  // n x d_a, tanh(W_a h_t); zero rows where masked
};

/// Throws Error when every position is masked.
AttentionResult global_attention(const Tensor& states, const Mask& mask, const AttentionParams& a);
AttentionTrace global_attention_traced(const Tensor& states, const Mask& mask, const AttentionParams& a);

/// Given d loss / d context, accumulates into the parameter grads of `a` and
/// adds d loss / d states into `d_states` (n x h_enc).
void backward_attention(const AttentionTrace& trace, const Tensor& states, const Mask& mask,
                        std::span<const double> d_context, AttentionParams& a, Tensor& d_states);

}  // namespace citeneed::encoder

// SPDX-License-Identifier: Apache-2.0
#include "citeneed/encoder/attention.hpp"

#include <cmath>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::encoder {

namespace kernels = numerics::kernels;
using numerics::shape_string;

void AttentionParams::validate() const {
  if (w_a.value.rank() != 2 || v_a.value.rank() != 1 || v_a.value.size() != w_a.value.rows()) {
    throw ShapeError("attention: W_a " + shape_string(w_a.value.shape()) + " and v_a " +
                     shape_string(v_a.value.shape()) + " disagree");
  }
}

AttentionParams AttentionParams::zeros(std::size_t state_dim, std::size_t score_dim, const std::string& prefix) {
  AttentionParams a;
  a.w_a = ParamSlot(prefix + ".w_a", Tensor({score_dim, state_dim}));
  a.v_a = ParamSlot(prefix + ".v_a", Tensor({score_dim}));
  return a;
}

AttentionParams AttentionParams::glorot(std::size_t state_dim, std::size_t score_dim, numerics::Rng& rng,
                                        const std::string& prefix) {
  AttentionParams a = zeros(state_dim, score_dim, prefix);
  const double w_bound = std::sqrt(6.0 / static_cast<double>(state_dim + score_dim));
  const double v_bound = std::sqrt(6.0 / static_cast<double>(score_dim + 1));
  for (double& v : a.w_a.value.data()) v = rng.uniform(-w_bound, w_bound);
  for (double& v : a.v_a.value.data()) v = rng.uniform(-v_bound, v_bound);
  return a;
}

AttentionTrace global_attention_traced(const Tensor& states, const Mask& mask, const AttentionParams& a) {
  a.validate();
  if (states.rank() != 2 || states.cols() != a.state_dim()) {
    throw ShapeError("global_attention: states " + shape_string(states.shape()) + " do not fit W_a " +
                     shape_string(a.w_a.value.shape()));
  }
  const std::size_t n = states.rows(), d_a = a.score_dim();
  if (mask.size() != n) throw ShapeError("global_attention: mask length does not match states");
  bool any = false;
  for (auto m : mask) any = any || m;
  if (!any) throw Error("global_attention: every position is masked");

  AttentionTrace trace;
  trace.projected = Tensor({n, d_a});
  Tensor scores({n});
  for (std::size_t t = 0; t < n; ++t) {
    if (!mask[t]) continue;
    auto u = trace.projected.row(t);
    kernels::matvec_add(a.w_a.value, states.row(t), u);
    for (double& x : u) x = std::tanh(x);
    scores[t] = kernels::dot(a.v_a.value.data(), u);
  }
  trace.result.weights = numerics::softmax(scores, std::span<const std::uint8_t>(mask));
  trace.result.context = Tensor({states.cols()});
  for (std::size_t t = 0; t < n; ++t) {
    const double w = trace.result.weights[t];
    if (w == 0.0) continue;
    auto c = trace.result.context.data();
    const auto h = states.row(t);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += w * h[j];
  }
  return trace;
}

AttentionResult global_attention(const Tensor& states, const Mask& mask, const AttentionParams& a) {
  return global_attention_traced(states, mask, a).result;
}

void backward_attention(const AttentionTrace& trace, const Tensor& states, const Mask& mask,
                        std::span<const double> d_context, AttentionParams& a, Tensor& d_states) {
  const std::size_t n = states.rows(), d_a = a.score_dim();
  const Tensor& alpha = trace.result.weights;
  std::vector<double> d_alpha(n, 0.0);
  double weighted = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (!mask[t]) continue;
    d_alpha[t] = kernels::dot(d_context, states.row(t));
    weighted += alpha[t] * d_alpha[t];
    auto dh = d_states.row(t);
    for (std::size_t j = 0; j < dh.size(); ++j) dh[j] += alpha[t] * d_context[j];
  }
  std::vector<double> d_pre(d_a);
  for (std::size_t t = 0; t < n; ++t) {
    if (!mask[t]) continue;
    const double de = alpha[t] * (d_alpha[t] - weighted);
    const auto u = trace.projected.row(t);
    auto dv = a.v_a.grad.data();
    for (std::size_t k = 0; k < d_a; ++k) {
      dv[k] += de * u[k];
      d_pre[k] = de * a.v_a.value[k] * (1.0 - u[k] * u[k]);
    }
    kernels::outer_add(d_pre, states.row(t), a.w_a.grad);
    kernels::matvec_transposed_add(a.w_a.value, d_pre, d_states.row(t));
  }
}

}  // namespace citeneed::encoder

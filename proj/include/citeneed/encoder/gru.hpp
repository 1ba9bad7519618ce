// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <cstddef>
#include <string>
#include <vector>

#include "citeneed/numerics/adam.hpp"
#include "citeneed/numerics/rng.hpp"
#include "citeneed/numerics/tensor.hpp"

namespace citeneed::encoder {

using numerics::Mask;
using numerics::ParamSlot;
using numerics::Tensor;

/// Gated recurrent unit parameters.
///
///   z_t = sigmoid(W_z x_t + U_z h_{t-1} + b_z)
///   r_t = sigmoid(W_r x_t + U_r h_{t-1} + b_r)
///   g_t = tanh(W_h x_t + r_t * (U_h h_{t-1} + b_h))
///   h_t = (1 - z_t) * h_{t-1} + z_t * g_t
///
/// W_*: hidden x input, U_*: hidden x hidden, b_*: hidden.
struct GruParams {
  ParamSlot w_z, u_z, b_z;
  ParamSlot w_r, u_r, b_r;
  ParamSlot w_h, u_h, b_h;

  std::size_t input_dim() const { return w_z.value.cols(); }
  std::size_t hidden_dim() const { return w_z.value.rows(); }

  std::array<ParamSlot*, 9> slots();
  std::array<const ParamSlot*, 9> slots() const;

  /// Throws ShapeError unless all nine tensors agree on input/hidden dims.
  void validate() const;

  static GruParams zeros(std::size_t input, std::size_t hidden, const std::string& prefix = "gru");
  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero. Draw
  /// order: W_z, U_z, W_r, U_r, W_h, U_h.
  static GruParams glorot(std::size_t input, std::size_t hidden, numerics::Rng& rng,
                          const std::string& prefix = "gru");
};

enum class Direction { forward, backward };

/// One step of the recurrence. Shapes are checked; inputs must be finite.
Tensor gru_cell_step(const Tensor& input, const Tensor& h_prev, const GruParams& p);

/// Intermediate values of one step, kept for backpropagation.
struct GruStepCache {
  bool active = false;
  std::vector<double> h_prev, z, r, g, u;  // u = U_h h_prev + b_h
};

struct GruTrace {
  Direction direction = Direction::forward;
  Tensor states;                    // n x hidden, in position order
  std::vector<GruStepCache> steps;  // in position order
};

/// Runs the recurrence over an n x input sequence from h_0 = 0. The
/// backward direction walks positions n-1..0 and writes each state back at
/// its own position. A masked position copies the previous state.
Tensor run_gru(const Tensor& seq, const Mask& mask, const GruParams& p, Direction direction);
GruTrace run_gru_traced(const Tensor& seq, const Mask& mask, const GruParams& p, Direction direction);

/// Accumulates parameter gradients into `p` and, when `d_seq` is non-null,
/// input gradients into it (n x input), given d loss / d states.
void backward_gru(const GruTrace& trace, const Tensor& seq, const Tensor& d_states, GruParams& p,
                  Tensor* d_seq);

/// Per-position concatenation [forward_t ; backward_t], n x 2*hidden.
Tensor bidirectional_encode(const Tensor& seq, const Mask& mask, const GruParams& p_fwd,
                            const GruParams& p_bwd);

// Single-step kernels shared by the sequence runner and the section encoder.
void gru_step_forward(std::span<const double> x, std::span<const double> h_prev, const GruParams& p,
                      GruStepCache& cache, std::span<double> h_out);
void gru_step_backward(const GruStepCache& cache, std::span<const double> x, std::span<const double> d_h,
                       GruParams& p, std::span<double> d_x, std::span<double> d_h_prev);

}  // namespace citeneed::encoder

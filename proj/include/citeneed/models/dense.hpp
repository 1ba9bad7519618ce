// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "citeneed/numerics/adam.hpp"
#include "citeneed/numerics/rng.hpp"

namespace citeneed::models {

using numerics::ParamSlot;
using numerics::Tensor;

/// y = W x + b; W: out x in.
struct DenseLayer {
  ParamSlot w, b;

  std::size_t input_dim() const { return w.value.cols(); }
  std::size_t output_dim() const { return w.value.rows(); }
  std::array<ParamSlot*, 2> slots() { return {&w, &b}; }
  std::array<const ParamSlot*, 2> slots() const { return {&w, &b}; }

  std::vector<double> forward(std::span<const double> x) const;
  /// Accumulates W and b grads; adds W^T d_y into d_x when non-empty.
  void backward(std::span<const double> x, std::span<const double> d_y, std::span<double> d_x);

  static DenseLayer zeros(std::size_t in, std::size_t out, const std::string& prefix);
  /// W uniform in +-sqrt(6 / (in + out)), b zero.
  static DenseLayer glorot(std::size_t in, std::size_t out, numerics::Rng& rng, const std::string& prefix);
};

}  // namespace citeneed::models

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citeneed/numerics/tensor.hpp"

namespace citeneed::numerics {

/// A trainable tensor with its gradient accumulator.
struct ParamSlot {
  std::string name;
  Tensor value;
  Tensor grad;

  ParamSlot() = default;
  ParamSlot(std::string name, Tensor value);

  void zero_grad() { grad.fill(0.0); }
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment estimates for a fixed, ordered list of slots.
class AdamState {
 public:
  AdamState(AdamConfig config, std::span<ParamSlot* const> slots);

  const AdamConfig& config() const { return config_; }
  std::uint64_t step_count() const { return t_; }
  const Tensor& first_moment(std::size_t i) const { return m_[i]; }
  const Tensor& second_moment(std::size_t i) const { return v_[i]; }

  friend void adam_step(AdamState& state, std::span<ParamSlot* const> slots);

 private:
  AdamConfig config_;
  std::uint64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

/// One bias-corrected Adam update over `slots` (same order as at
/// construction), then zeroes every gradient.
void adam_step(AdamState& state, std::span<ParamSlot* const> slots);

}  // namespace citeneed::numerics

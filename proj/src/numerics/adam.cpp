// SPDX-License-Identifier: Apache-2.0
#include "citeneed/numerics/adam.hpp"

#include <cmath>
#include <limits>

#include "citeneed/error.hpp"

namespace citeneed::numerics {

ParamSlot::ParamSlot(std::string n, Tensor v)
    : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}

AdamState::AdamState(AdamConfig config, std::span<ParamSlot* const> slots) : config_(config) {
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0) || !(config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw Error("adam: betas must lie in [0, 1)");
  }
  if (!(config.learning_rate > 0.0) || !(config.epsilon > 0.0)) {
    throw Error("adam: learning rate and epsilon must be positive");
  }
  m_.reserve(slots.size());
  v_.reserve(slots.size());
  for (const ParamSlot* slot : slots) {
    m_.emplace_back(slot->value.shape());
    v_.emplace_back(slot->value.shape());
  }
}

void adam_step(AdamState& state, std::span<ParamSlot* const> slots) {
  if (slots.size() != state.m_.size()) {
    throw ShapeError("adam_step: state tracks " + std::to_string(state.m_.size()) +
                     " slots, got " + std::to_string(slots.size()));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const ParamSlot& s = *slots[i];
    if (!s.grad.same_shape(s.value) || !state.m_[i].same_shape(s.value)) {
      throw ShapeError("adam_step: shape mismatch in slot " + s.name);
    }
    require_finite(s.grad, "adam_step");
  }
  if (state.t_ == std::numeric_limits<std::uint64_t>::max()) {
    throw Error("adam_step: step counter overflow");
  }
  ++state.t_;

  const AdamConfig& c = state.config_;
  const double t = static_cast<double>(state.t_);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t i = 0; i < slots.size(); ++i) {
    ParamSlot& s = *slots[i];
    auto value = s.value.data();
    auto grad = s.grad.data();
    auto m = state.m_[i].data();
    auto v = state.v_[i].data();
    for (std::size_t j = 0; j < value.size(); ++j) {
      const double g = grad[j];
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g;
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      value[j] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
    s.zero_grad();
  }
}

}  // namespace citeneed::numerics

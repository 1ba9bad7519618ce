// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/dense.hpp"

#include <cmath>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::models {

namespace kernels = numerics::kernels;

std::vector<double> DenseLayer::forward(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw ShapeError("dense: input of length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(input_dim()));
  }
  std::vector<double> y(b.value.data().begin(), b.value.data().end());
  kernels::matvec_add(w.value, x, y);
  return y;
}

void DenseLayer::backward(std::span<const double> x, std::span<const double> d_y, std::span<double> d_x) {
  kernels::outer_add(d_y, x, w.grad);
  kernels::add(d_y, b.grad.data());
  if (!d_x.empty()) kernels::matvec_transposed_add(w.value, d_y, d_x);
}

DenseLayer DenseLayer::zeros(std::size_t in, std::size_t out, const std::string& prefix) {
  DenseLayer d;
  d.w = ParamSlot(prefix + ".w", Tensor({out, in}));
  d.b = ParamSlot(prefix + ".b", Tensor({out}));
  return d;
}

DenseLayer DenseLayer::glorot(std::size_t in, std::size_t out, numerics::Rng& rng, const std::string& prefix) {
  DenseLayer d = zeros(in, out, prefix);
  const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
  for (double& v : d.w.value.data()) v = rng.uniform(-bound, bound);
  return d;
}

}  // namespace citeneed::models

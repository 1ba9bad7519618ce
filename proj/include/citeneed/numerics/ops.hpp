// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "citeneed/numerics/tensor.hpp"

namespace citeneed::numerics {

Tensor matmul(const Tensor& a, const Tensor& b);

Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);

double sigmoid(double x);

/// Max-subtracted softmax over a rank-1 tensor. Masked-out entries (mask
/// false) come back exactly 0. Throws if every entry is masked.
Tensor softmax(const Tensor& x, std::optional<std::span<const std::uint8_t>> mask = std::nullopt);

struct LossWithGradient {
  double loss = 0.0;
  Tensor gradient;  // d loss / d pred, same shape as pred
};

/// Probability below which -log is clamped.
inline constexpr double kProbabilityFloor = 1e-12;

/// -log pred[target] for a normalized probability vector.
LossWithGradient cross_entropy(const Tensor& pred, std::size_t target);

/// Binary form: pred is P(positive), target in {0, 1}. Gradient is rank 1,
/// length 1, with respect to pred.
LossWithGradient binary_cross_entropy(double pred, int target);

// Unchecked kernels for the hot loops of the encoder. Callers guarantee
// extents; nothing here validates shapes or finiteness.
namespace kernels {

/// out += W x, W is rows x cols.
void matvec_add(const Tensor& w, std::span<const double> x, std::span<double> out);

/// out += W^T y.
void matvec_transposed_add(const Tensor& w, std::span<const double> y, std::span<double> out);

/// G += y x^T.
void outer_add(std::span<const double> y, std::span<const double> x, Tensor& g);

void add(std::span<const double> x, std::span<double> out);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace kernels

}  // namespace citeneed::numerics

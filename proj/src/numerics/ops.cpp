// SPDX-License-Identifier: Apache-2.0
#include "citeneed/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "citeneed/error.hpp"

namespace citeneed::numerics {

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    throw ShapeError("matmul: cannot multiply " + shape_string(a.shape()) + " by " +
                     shape_string(b.shape()));
  }
  require_finite(a, "matmul");
  require_finite(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aip * b(p, j);
    }
  }
  return out;
}

double sigmoid(double x) {
  // Branching keeps exp() from overflowing for large |x|.
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& x) {
  require_finite(x, "sigmoid");
  Tensor out = x;
  for (double& v : out.data()) v = sigmoid(v);
  return out;
}

Tensor tanh(const Tensor& x) {
  require_finite(x, "tanh");
  Tensor out = x;
  for (double& v : out.data()) v = std::tanh(v);
  return out;
}

Tensor softmax(const Tensor& x, std::optional<std::span<const std::uint8_t>> mask) {
  require_finite(x, "softmax");
  if (x.rank() != 1) throw ShapeError("softmax: expects a rank-1 tensor");
  const std::size_t n = x.size();
  if (mask && mask->size() != n) {
    throw ShapeError("softmax: mask length " + std::to_string(mask->size()) +
                     " does not match input length " + std::to_string(n));
  }
  auto active = [&](std::size_t i) { return !mask || (*mask)[i] != 0; };

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (active(i)) peak = std::max(peak, x[i]);
  }
  if (!std::isfinite(peak)) throw Error("softmax: every entry is masked");

  Tensor out({n});
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active(i)) continue;
    out[i] = std::exp(x[i] - peak);
    total += out[i];
  }
  for (double& v : out.data()) v /= total;
  return out;
}

LossWithGradient cross_entropy(const Tensor& pred, std::size_t target) {
  require_finite(pred, "cross_entropy");
  if (pred.rank() != 1) throw ShapeError("cross_entropy: expects a rank-1 tensor");
  if (target >= pred.size()) {
    throw ShapeError("cross_entropy: target " + std::to_string(target) +
                     " out of range for " + std::to_string(pred.size()) + " classes");
  }
  double total = 0.0;
  for (double p : pred.data()) {
    if (p < 0.0) throw Error("cross_entropy: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("cross_entropy: prediction is not normalized (sum " + std::to_string(total) + ")");
  }
  LossWithGradient out{0.0, Tensor({pred.size()})};
  const double p = std::max(pred[target], kProbabilityFloor);
  out.loss = -std::log(p);
  if (pred[target] >= kProbabilityFloor) out.gradient[target] = -1.0 / p;
  return out;
}

LossWithGradient binary_cross_entropy(double pred, int target) {
  if (!std::isfinite(pred)) throw NumericError("binary_cross_entropy: non-finite input");
  if (pred < 0.0 || pred > 1.0) throw Error("binary_cross_entropy: probability outside [0, 1]");
  if (target != 0 && target != 1) throw Error("binary_cross_entropy: target must be 0 or 1");
  LossWithGradient out{0.0, Tensor({1})};
  const double q = target == 1 ? pred : 1.0 - pred;
  const double clamped = std::max(q, kProbabilityFloor);
  out.loss = -std::log(clamped);
  if (q >= kProbabilityFloor) out.gradient[0] = target == 1 ? -1.0 / clamped : 1.0 / clamped;
  return out;
}

namespace kernels {

void matvec_add(const Tensor& w, std::span<const double> x, std::span<double> out) {
  const std::size_t rows = w.rows(), cols = w.cols();
  const double* wp = w.data().data();
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    const double* wr = wp + i * cols;
    for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * x[j];
    out[i] += acc;
  }
}

void matvec_transposed_add(const Tensor& w, std::span<const double> y, std::span<double> out) {
  const std::size_t rows = w.rows(), cols = w.cols();
  const double* wp = w.data().data();
  for (std::size_t i = 0; i < rows; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    const double* wr = wp + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += wr[j] * yi;
  }
}

void outer_add(std::span<const double> y, std::span<const double> x, Tensor& g) {
  const std::size_t cols = g.cols();
  double* gp = g.data().data();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    double* gr = gp + i * cols;
    for (std::size_t j = 0; j < x.size(); ++j) gr[j] += yi * x[j];
  }
}

void add(std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace kernels

}  // namespace citeneed::numerics

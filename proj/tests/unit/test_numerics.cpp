// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "citeneed/error.hpp"
#include "citeneed/numerics/adam.hpp"
#include "citeneed/numerics/grad_check.hpp"
#include "citeneed/numerics/ops.hpp"
#include "citeneed/numerics/rng.hpp"

using namespace citeneed;
using namespace citeneed::numerics;

TEST_CASE("matmul") {
  const Tensor eye = Tensor::matrix({{1, 0}, {0, 1}});
  const Tensor m = Tensor::matrix({{1, 2}, {3, 4}});
  CHECK(matmul(eye, m) == m);
  const Tensor r = matmul(Tensor::matrix({{1, 2}}), Tensor::matrix({{3}, {4}}));
  CHECK(r.shape() == std::vector<std::size_t>{1, 1});
  CHECK(r[0] == 11.0);
  CHECK_THROWS_AS(matmul(Tensor({2, 3}), Tensor({2, 3})), ShapeError);
  Tensor bad({1, 1});
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matmul(bad, bad), NumericError);
}

TEST_CASE("tensor construction checks size") {
  CHECK_THROWS_AS(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  const Tensor t({2, 3}, 1.5);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(t.row(1).size() == 3);
}

TEST_CASE("activations") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(numerics::tanh(Tensor({1}))[0] == 0.0);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-40, 40);
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sigmoid(x) >= 0.0);
    CHECK(sigmoid(x) <= 1.0);
  }
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) >= 0.0);
  Tensor bad({2});
  bad[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(sigmoid(bad), NumericError);
}

TEST_CASE("softmax") {
  const Tensor half = softmax(Tensor({2}));
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);

  const std::vector<std::uint8_t> mask{1, 0};
  const Tensor forced = softmax(Tensor::vector(std::vector<double>{5, 9}), std::span<const std::uint8_t>(mask));
  CHECK(forced[0] == 1.0);
  CHECK(forced[1] == 0.0);

  const std::vector<std::uint8_t> none{0, 0};
  CHECK_THROWS(softmax(Tensor({2}), std::span<const std::uint8_t>(none)));
}

TEST_CASE("softmax sums to one and is shift invariant") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    Tensor x({n});
    for (double& v : x.data()) v = rng.uniform(-50, 50);
    const Tensor p = softmax(x);
    double sum = 0;
    for (double v : p.data()) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    const double c = rng.uniform(-20, 20);
    Tensor shifted = x;
    for (double& v : shifted.data()) v += c;
    const Tensor q = softmax(shifted);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(p[i] - q[i]) <= 1e-12);
  }
  const Tensor uniform = softmax(Tensor({3}, 712.0));
  for (double v : uniform.data()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("cross entropy") {
  CHECK(cross_entropy(Tensor::vector(std::vector<double>{1, 0}), 0).loss == 0.0);
  CHECK(cross_entropy(Tensor::vector(std::vector<double>{0.5, 0.5}), 1).loss ==
        doctest::Approx(0.6931471805599453));
  CHECK(cross_entropy(Tensor::vector(std::vector<double>{1, 0}), 1).loss == doctest::Approx(-std::log(1e-12)));
  CHECK_THROWS(cross_entropy(Tensor::vector(std::vector<double>{0.7, 0.7}), 0));
  CHECK_THROWS_AS(cross_entropy(Tensor::vector(std::vector<double>{0.5, 0.5}), 2), ShapeError);
}

TEST_CASE("cross entropy gradient agrees with central differences") {
  // Loss as a function of the unnormalized probabilities p: -log(p_t / sum p)
  // has the same gradient at a normalized point as -log p_t minus the
  // normalizer term; compare on the analytic -1/p_t entry directly.
  const std::vector<double> p{0.2, 0.5, 0.3};
  const auto lg = cross_entropy(Tensor::vector(p), 1);
  const double h = 1e-6;
  const double numeric = (-std::log(p[1] + h) + std::log(p[1] - h)) / (2 * h);
  CHECK(std::abs(lg.gradient[1] - numeric) / std::abs(numeric) <= 1e-6);
  CHECK(lg.gradient[0] == 0.0);
  CHECK(lg.gradient[2] == 0.0);

  for (int target : {0, 1}) {
    const double q = 0.37;
    const auto b = binary_cross_entropy(q, target);
    const auto f = [&](double x) { return binary_cross_entropy(x, target).loss; };
    const double num = (f(q + h) - f(q - h)) / (2 * h);
    CHECK(std::abs(b.gradient[0] - num) / std::abs(num) <= 1e-6);
  }
}

namespace {

// Scalar Adam written out independently of AdamState.
double scalar_adam(double x, double g, int steps, double alpha) {
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double m = 0, v = 0;
  for (int t = 1; t <= steps; ++t) {
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, t));
    const double vh = v / (1 - std::pow(b2, t));
    x -= alpha * mh / (std::sqrt(vh) + eps);
  }
  return x;
}

}  // namespace

TEST_CASE("adam first step moves by the learning rate against the gradient sign") {
  ParamSlot p("p", Tensor::vector(std::vector<double>{1.0, -2.0, 0.5}));
  std::vector<ParamSlot*> slots{&p};
  AdamState state(AdamConfig{}, slots);
  p.grad[0] = 3.0;
  p.grad[1] = -0.25;
  p.grad[2] = 40.0;
  adam_step(state, slots);
  CHECK(p.value[0] == doctest::Approx(1.0 - 1e-3).epsilon(1e-9));
  CHECK(p.value[1] == doctest::Approx(-2.0 + 1e-3).epsilon(1e-9));
  CHECK(p.value[2] == doctest::Approx(0.5 - 1e-3).epsilon(1e-9));
  for (double g : p.grad.data()) CHECK(g == 0.0);
  CHECK(state.step_count() == 1);
}

TEST_CASE("adam with zero gradient is the identity on values") {
  ParamSlot p("p", Tensor::vector(std::vector<double>{0.3, -7.0}));
  std::vector<ParamSlot*> slots{&p};
  AdamState state(AdamConfig{}, slots);
  const Tensor before = p.value;
  for (int i = 0; i < 3; ++i) adam_step(state, slots);
  CHECK(p.value == before);
  CHECK(state.step_count() == 3);
}

TEST_CASE("adam two steps against the scalar oracle") {
  ParamSlot p("p", Tensor::vector(std::vector<double>{1.0}));
  std::vector<ParamSlot*> slots{&p};
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  AdamState state(cfg, slots);
  for (int i = 0; i < 2; ++i) {
    p.grad[0] = 2.0;
    adam_step(state, slots);
  }
  const double oracle = scalar_adam(1.0, 2.0, 2, 0.1);
  CHECK(p.value[0] == doctest::Approx(oracle).epsilon(1e-14));
  // Frozen from the oracle: each step moves by alpha * g / (|g| + eps).
  CHECK(p.value[0] == doctest::Approx(0.8000000010000006).epsilon(1e-12));
}

TEST_CASE("adam rejects bad configuration and gradients") {
  ParamSlot p("p", Tensor({1}));
  std::vector<ParamSlot*> slots{&p};
  AdamConfig cfg;
  cfg.beta1 = 1.0;
  CHECK_THROWS(AdamState(cfg, slots));
  AdamState state(AdamConfig{}, slots);
  p.grad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(state, slots), NumericError);
}

TEST_CASE("grad_check") {
  ParamSlot x("x", Tensor::vector(std::vector<double>{3.0}));
  std::vector<ParamSlot*> slots{&x};
  x.grad[0] = 6.0;
  const auto report = grad_check([&] { return x.value[0] * x.value[0]; }, slots);
  CHECK(report.passed);
  CHECK(std::abs(report.worst_numeric - 6.0) <= 1e-7);
  CHECK(x.value[0] == 3.0);

  x.grad[0] = 0.0;
  const auto flat = grad_check([] { return 4.0; }, slots);
  CHECK(flat.passed);
  CHECK(flat.worst_numeric == 0.0);

  x.grad[0] = 5.0;
  CHECK_FALSE(grad_check([&] { return x.value[0] * x.value[0]; }, slots).passed);

  CHECK_THROWS_AS(grad_check([] { return std::numeric_limits<double>::infinity(); }, slots), NumericError);
}

TEST_CASE("rng is reproducible and shuffle is a permutation") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  // First output of mt19937_64 seeded with 5489 is fixed by the standard.
  Rng standard(5489);
  CHECK(standard.next() == 14514284786278117030ULL);

  std::vector<int> items{0, 1, 2, 3, 4, 5, 6, 7};
  Rng r(9);
  r.shuffle(std::span<int>(items));
  std::vector<int> sorted = items;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
}

// SPDX-License-Identifier: Apache-2.0
#include "citeneed/encoder/gru.hpp"

#include <cmath>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::encoder {

namespace kernels = numerics::kernels;
using numerics::shape_string;

std::array<ParamSlot*, 9> GruParams::slots() {
  return {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_h, &u_h, &b_h};
}

std::array<const ParamSlot*, 9> GruParams::slots() const {
  return {&w_z, &u_z, &b_z, &w_r, &u_r, &b_r, &w_h, &u_h, &b_h};
}

void GruParams::validate() const {
  const std::size_t in = input_dim(), hid = hidden_dim();
  const std::vector<std::size_t> w_shape{hid, in}, u_shape{hid, hid}, b_shape{hid};
  for (const ParamSlot* s : {&w_z, &w_r, &w_h}) {
    if (s->value.shape() != w_shape) throw ShapeError("gru: " + s->name + " has shape " + shape_string(s->value.shape()));
  }
  for (const ParamSlot* s : {&u_z, &u_r, &u_h}) {
    if (s->value.shape() != u_shape) throw ShapeError("gru: " + s->name + " has shape " + shape_string(s->value.shape()));
  }
  for (const ParamSlot* s : {&b_z, &b_r, &b_h}) {
    if (s->value.shape() != b_shape) throw ShapeError("gru: " + s->name + " has shape " + shape_string(s->value.shape()));
  }
}

GruParams GruParams::zeros(std::size_t input, std::size_t hidden, const std::string& prefix) {
  GruParams p;
  p.w_z = ParamSlot(prefix + ".w_z", Tensor({hidden, input}));
  p.u_z = ParamSlot(prefix + ".u_z", Tensor({hidden, hidden}));
  p.b_z = ParamSlot(prefix + ".b_z", Tensor({hidden}));
  p.w_r = ParamSlot(prefix + ".w_r", Tensor({hidden, input}));
  p.u_r = ParamSlot(prefix + ".u_r", Tensor({hidden, hidden}));
  p.b_r = ParamSlot(prefix + ".b_r", Tensor({hidden}));
  p.w_h = ParamSlot(prefix + ".w_h", Tensor({hidden, input}));
  p.u_h = ParamSlot(prefix + ".u_h", Tensor({hidden, hidden}));
  p.b_h = ParamSlot(prefix + ".b_h", Tensor({hidden}));
  return p;
}

GruParams GruParams::glorot(std::size_t input, std::size_t hidden, numerics::Rng& rng, const std::string& prefix) {
  GruParams p = zeros(input, hidden, prefix);
  const double w_bound = std::sqrt(6.0 / static_cast<double>(input + hidden));
  const double u_bound = std::sqrt(6.0 / static_cast<double>(2 * hidden));
  for (auto [w, u] : {std::pair{&p.w_z, &p.u_z}, std::pair{&p.w_r, &p.u_r}, std::pair{&p.w_h, &p.u_h}}) {
    for (double& v : w->value.data()) v = rng.uniform(-w_bound, w_bound);
    for (double& v : u->value.data()) v = rng.uniform(-u_bound, u_bound);
  }
  return p;
}

void gru_step_forward(std::span<const double> x, std::span<const double> h_prev, const GruParams& p,
                      GruStepCache& cache, std::span<double> h_out) {
  const std::size_t hid = p.hidden_dim();
  cache.active = true;
  cache.h_prev.assign(h_prev.begin(), h_prev.end());
  cache.z.assign(p.b_z.value.data().begin(), p.b_z.value.data().end());
  cache.r.assign(p.b_r.value.data().begin(), p.b_r.value.data().end());
  cache.u.assign(p.b_h.value.data().begin(), p.b_h.value.data().end());
  cache.g.assign(hid, 0.0);

  kernels::matvec_add(p.w_z.value, x, cache.z);
  kernels::matvec_add(p.u_z.value, h_prev, cache.z);
  kernels::matvec_add(p.w_r.value, x, cache.r);
  kernels::matvec_add(p.u_r.value, h_prev, cache.r);
  kernels::matvec_add(p.u_h.value, h_prev, cache.u);
  kernels::matvec_add(p.w_h.value, x, cache.g);
  for (std::size_t i = 0; i < hid; ++i) {
    cache.z[i] = numerics::sigmoid(cache.z[i]);
    cache.r[i] = numerics::sigmoid(cache.r[i]);
    cache.g[i] = std::tanh(cache.g[i] + cache.r[i] * cache.u[i]);
    h_out[i] = (1.0 - cache.z[i]) * h_prev[i] + cache.z[i] * cache.g[i];
  }
}

void gru_step_backward(const GruStepCache& cache, std::span<const double> x, std::span<const double> d_h,
                       GruParams& p, std::span<double> d_x, std::span<double> d_h_prev) {
  const std::size_t hid = cache.z.size();
  std::vector<double> da_z(hid), da_r(hid), da_g(hid), d_u(hid);
  for (std::size_t i = 0; i < hid; ++i) {
    const double z = cache.z[i], r = cache.r[i], g = cache.g[i];
    const double dz = d_h[i] * (g - cache.h_prev[i]);
    const double dg = d_h[i] * z;
    d_h_prev[i] += d_h[i] * (1.0 - z);
    da_g[i] = dg * (1.0 - g * g);
    const double dr = da_g[i] * cache.u[i];
    d_u[i] = da_g[i] * r;
    da_r[i] = dr * r * (1.0 - r);
    da_z[i] = dz * z * (1.0 - z);
  }

  kernels::outer_add(da_g, x, p.w_h.grad);
  kernels::outer_add(d_u, cache.h_prev, p.u_h.grad);
  kernels::add(d_u, p.b_h.grad.data());
  kernels::outer_add(da_r, x, p.w_r.grad);
  kernels::outer_add(da_r, cache.h_prev, p.u_r.grad);
  kernels::add(da_r, p.b_r.grad.data());
  kernels::outer_add(da_z, x, p.w_z.grad);
  kernels::outer_add(da_z, cache.h_prev, p.u_z.grad);
  kernels::add(da_z, p.b_z.grad.data());

  kernels::matvec_transposed_add(p.u_h.value, d_u, d_h_prev);
  kernels::matvec_transposed_add(p.u_r.value, da_r, d_h_prev);
  kernels::matvec_transposed_add(p.u_z.value, da_z, d_h_prev);
  if (!d_x.empty()) {
    kernels::matvec_transposed_add(p.w_h.value, da_g, d_x);
    kernels::matvec_transposed_add(p.w_r.value, da_r, d_x);
    kernels::matvec_transposed_add(p.w_z.value, da_z, d_x);
  }
}

Tensor gru_cell_step(const Tensor& input, const Tensor& h_prev, const GruParams& p) {
  p.validate();
  if (input.size() != p.input_dim() || h_prev.size() != p.hidden_dim()) {
    throw ShapeError("gru_cell_step: input " + shape_string(input.shape()) + " / state " +
                     shape_string(h_prev.shape()) + " do not fit a " + std::to_string(p.input_dim()) +
                     " -> " + std::to_string(p.hidden_dim()) + " cell");
  }
  numerics::require_finite(input, "gru_cell_step");
  numerics::require_finite(h_prev, "gru_cell_step");
  Tensor out({p.hidden_dim()});
  GruStepCache cache;
  gru_step_forward(input.data(), h_prev.data(), p, cache, out.data());
  return out;
}

namespace {

void check_sequence(const Tensor& seq, const Mask& mask, const GruParams& p, const char* op) {
  p.validate();
  if (seq.rank() != 2 || seq.cols() != p.input_dim()) {
    throw ShapeError(std::string(op) + ": sequence " + shape_string(seq.shape()) + " does not fit input dim " +
                     std::to_string(p.input_dim()));
  }
  if (mask.size() != seq.rows()) {
    throw ShapeError(std::string(op) + ": mask length " + std::to_string(mask.size()) +
                     " does not match sequence length " + std::to_string(seq.rows()));
  }
}

}  // namespace

GruTrace run_gru_traced(const Tensor& seq, const Mask& mask, const GruParams& p, Direction direction) {
  check_sequence(seq, mask, p, "run_gru");
  const std::size_t n = seq.rows(), hid = p.hidden_dim();
  GruTrace trace;
  trace.direction = direction;
  trace.states = Tensor({n, hid});
  trace.steps.resize(n);
  std::vector<double> h(hid, 0.0), next(hid);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pos = direction == Direction::forward ? k : n - 1 - k;
    if (mask[pos]) {
      gru_step_forward(seq.row(pos), h, p, trace.steps[pos], next);
      h.swap(next);
    }
    std::copy(h.begin(), h.end(), trace.states.row(pos).begin());
  }
  return trace;
}

Tensor run_gru(const Tensor& seq, const Mask& mask, const GruParams& p, Direction direction) {
  return run_gru_traced(seq, mask, p, direction).states;
}

void backward_gru(const GruTrace& trace, const Tensor& seq, const Tensor& d_states, GruParams& p, Tensor* d_seq) {
  const std::size_t n = seq.rows(), hid = p.hidden_dim();
  std::vector<double> d_h(hid, 0.0), d_prev(hid);
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t pos = trace.direction == Direction::forward ? k : n - 1 - k;
    kernels::add(d_states.row(pos), d_h);
    const GruStepCache& cache = trace.steps[pos];
    if (!cache.active) continue;
    std::fill(d_prev.begin(), d_prev.end(), 0.0);
    std::span<double> d_x = d_seq ? d_seq->row(pos) : std::span<double>();
    gru_step_backward(cache, seq.row(pos), d_h, p, d_x, d_prev);
    d_h.swap(d_prev);
  }
}

Tensor bidirectional_encode(const Tensor& seq, const Mask& mask, const GruParams& p_fwd, const GruParams& p_bwd) {
  if (p_fwd.hidden_dim() != p_bwd.hidden_dim()) {
    throw ShapeError("bidirectional_encode: hidden dims differ (" + std::to_string(p_fwd.hidden_dim()) + " vs " +
                     std::to_string(p_bwd.hidden_dim()) + ")");
  }
  const Tensor f = run_gru(seq, mask, p_fwd, Direction::forward);
  const Tensor b = run_gru(seq, mask, p_bwd, Direction::backward);
  const std::size_t n = seq.rows(), hid = p_fwd.hidden_dim();
  Tensor out({n, 2 * hid});
  for (std::size_t t = 0; t < n; ++t) {
    std::copy(f.row(t).begin(), f.row(t).end(), out.row(t).begin());
    std::copy(b.row(t).begin(), b.row(t).end(), out.row(t).begin() + static_cast<std::ptrdiff_t>(hid));
  }
  return out;
}

}  // namespace citeneed::encoder

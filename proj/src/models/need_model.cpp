// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/need_model.hpp"

#include <algorithm>
#include <cmath>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::models {

using corpus::Label;
using corpus::LabeledInstance;

std::vector<ParamSlot*> NeedModel::slots() {
  auto out = encoder.slots();
  out.push_back(&dense.w);
  out.push_back(&dense.b);
  return out;
}

std::vector<const ParamSlot*> NeedModel::slots() const {
  auto s = const_cast<NeedModel*>(this)->slots();
  return {s.begin(), s.end()};
}

void NeedModel::validate() const {
  encoder.validate();
  if (dense.output_dim() != 1 || dense.input_dim() != encoder.output_dim()) {
    throw ShapeError("need model: dense layer " + numerics::shape_string(dense.w.value.shape()) +
                     " does not fit representation of length " + std::to_string(encoder.output_dim()));
  }
}

NeedModel make_need_model(Variant variant, const ModelDims& dims,
                          const std::vector<const corpus::Statement*>& training,
                          const encoder::PretrainedVectors* pretrained, bool train_pretrained, numerics::Rng& rng) {
  NeedModel m;
  m.encoder = make_statement_encoder(variant, dims, training, pretrained, train_pretrained, rng);
  m.dense = DenseLayer::glorot(m.encoder.output_dim(), 1, rng, "need_dense");
  return m;
}

double forward_need(const NeedModel& model, const std::vector<std::string>& tokens,
                    const std::optional<SectionInput>& section) {
  const EncoderPass pass = encode_statement(model.encoder, tokens, section);
  return numerics::sigmoid(model.dense.forward(pass.representation)[0]);
}

double forward_need(const NeedModel& model, const corpus::Statement& statement) {
  return forward_need(model, statement.tokens, section_of(statement));
}

AttentionPrediction predict_with_attention(const NeedModel& model, const corpus::Statement& statement) {
  if (!has_attention(model.variant())) {
    throw VariantError(std::string(variant_name(model.variant())) + " has no attention weights");
  }
  const EncoderPass pass = encode_statement(model.encoder, statement.tokens, section_of(statement));
  AttentionPrediction out;
  out.probability = numerics::sigmoid(model.dense.forward(pass.representation)[0]);
  const std::size_t n = pass.input.length;
  out.tokens.assign(statement.tokens.begin(), statement.tokens.begin() + static_cast<std::ptrdiff_t>(n));
  const auto w = pass.attention.result.weights.data();
  out.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

namespace {

// -log sigmoid(a) for y = 1, -log(1 - sigmoid(a)) for y = 0.
double logistic_loss(double logit, bool positive) {
  const double x = positive ? -logit : logit;
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

double need_batch_loss(const NeedModel& model, std::span<const LabeledInstance* const> batch) {
  if (batch.empty()) throw Error("empty batch");
  double total = 0.0;
  for (const LabeledInstance* inst : batch) {
    const EncoderPass pass = encode_statement(model.encoder, inst->statement.tokens, section_of(inst->statement));
    total += logistic_loss(model.dense.forward(pass.representation)[0], inst->label == Label::positive);
  }
  return total / static_cast<double>(batch.size());
}

double need_batch_gradient(NeedModel& model, std::span<const LabeledInstance* const> batch) {
  if (batch.empty()) throw Error("empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  std::vector<double> d_rep(model.encoder.output_dim());
  for (const LabeledInstance* inst : batch) {
    const EncoderPass pass = encode_statement(model.encoder, inst->statement.tokens, section_of(inst->statement));
    const double logit = model.dense.forward(pass.representation)[0];
    const bool positive = inst->label == Label::positive;
    total += logistic_loss(logit, positive);
    const double d_logit[1] = {(numerics::sigmoid(logit) - (positive ? 1.0 : 0.0)) * scale};
    std::fill(d_rep.begin(), d_rep.end(), 0.0);
    model.dense.backward(pass.representation, d_logit, d_rep);
    backward_statement(model.encoder, pass, d_rep);
  }
  return total * scale;
}

analysis::EvaluationReport evaluate_need(const NeedModel& model, std::span<const LabeledInstance> instances) {
  if (instances.empty()) throw DataError("cannot evaluate on an empty instance list");
  analysis::ConfusionMatrix cm({"negative", "positive"});
  for (const LabeledInstance& inst : instances) {
    const bool predicted = forward_need(model, inst.statement) >= 0.5;
    cm.add(inst.label == Label::positive ? 1 : 0, predicted ? 1 : 0);
  }
  return analysis::precision_recall_f1(cm);
}

namespace {

std::vector<LabeledInstance> gather(std::span<const LabeledInstance> all, const std::vector<std::size_t>& idx) {
  std::vector<LabeledInstance> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

NeedTrainResult train_need(std::span<const LabeledInstance> instances, const TrainConfig& cfg, Variant variant,
                           const encoder::PretrainedVectors* pretrained) {
  cfg.validate();
  if (instances.empty()) throw DataError("cannot train on an empty corpus");
  const bool any_pos = std::any_of(instances.begin(), instances.end(),
                                   [](const LabeledInstance& i) { return i.label == Label::positive; });
  const bool any_neg = std::any_of(instances.begin(), instances.end(),
                                   [](const LabeledInstance& i) { return i.label == Label::negative; });
  if (!any_pos || !any_neg) {
    throw DataError(std::string("corpus has only ") + (any_pos ? "positive" : "negative") + " instances");
  }

  NeedTrainResult result;
  result.split = make_split(instances.size(), cfg.split, cfg.seed);
  if (result.split.train.empty() || result.split.eval.empty()) throw DataError("corpus too small to split");
  std::vector<const corpus::Statement*> training;
  for (std::size_t i : result.split.train) training.push_back(&instances[i].statement);

  numerics::Rng init_rng(numerics::derive_seed(cfg.seed, 1));
  result.model = make_need_model(variant, cfg.dims, training, pretrained, cfg.train_pretrained, init_rng);
  NeedModel& model = result.model;
  const auto slots = model.slots();
  numerics::AdamState adam(cfg.adam, slots);

  const std::vector<LabeledInstance> eval_part = gather(instances, result.split.eval);
  numerics::Rng order_rng(numerics::derive_seed(cfg.seed, 2));
  std::vector<std::size_t> order = result.split.train;
  std::vector<const LabeledInstance*> batch;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(&instances[order[k]]);
      loss_sum += need_batch_gradient(model, batch) * static_cast<double>(batch.size());
      numerics::adam_step(adam, slots);
    }
    const auto report = evaluate_need(model, eval_part);
    result.history.push_back({epoch, loss_sum / static_cast<double>(order.size()), report.accuracy, report.macro_f1});
  }
  result.eval_report = evaluate_need(model, eval_part);
  if (!result.split.validation.empty()) {
    result.validation_report = evaluate_need(model, gather(instances, result.split.validation));
  }
  return result;
}

}  // namespace citeneed::models

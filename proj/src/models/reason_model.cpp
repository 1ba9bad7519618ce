// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/reason_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "citeneed/error.hpp"
#include "citeneed/numerics/ops.hpp"

namespace citeneed::models {

using corpus::kReasonCount;
using corpus::ReasonInstance;

std::vector<ParamSlot*> ReasonModel::slots() {
  auto out = encoder.slots();
  out.push_back(&dense.w);
  out.push_back(&dense.b);
  return out;
}

std::vector<const ParamSlot*> ReasonModel::slots() const {
  auto s = const_cast<ReasonModel*>(this)->slots();
  return {s.begin(), s.end()};
}

void ReasonModel::validate() const {
  encoder.validate();
  if (dense.output_dim() != kReasonCount || dense.input_dim() != encoder.output_dim()) {
    throw ShapeError("reason model: dense layer " + numerics::shape_string(dense.w.value.shape()) +
                     " does not fit " + std::to_string(kReasonCount) + " classes over a representation of " +
                     std::to_string(encoder.output_dim()));
  }
}

namespace {

std::size_t reason_index(corpus::Reason r) { return static_cast<std::size_t>(r); }

Tensor softmax_logits(const std::vector<double>& logits) { return numerics::softmax(Tensor::vector(logits)); }

}  // namespace

Tensor reason_probabilities(const ReasonModel& model, const corpus::Statement& statement) {
  const EncoderPass pass = encode_statement(model.encoder, statement.tokens, section_of(statement));
  return softmax_logits(model.dense.forward(pass.representation));
}

corpus::Reason predict_reason(const ReasonModel& model, const corpus::Statement& statement) {
  const Tensor p = reason_probabilities(model, statement);
  const auto d = p.data();
  return corpus::kAllReasons[static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin())];
}

AttentionPrediction reason_attention(const ReasonModel& model, const corpus::Statement& statement) {
  if (!has_attention(model.variant())) {
    throw VariantError(std::string(variant_name(model.variant())) + " has no attention weights");
  }
  const EncoderPass pass = encode_statement(model.encoder, statement.tokens, section_of(statement));
  AttentionPrediction out;
  const Tensor p = softmax_logits(model.dense.forward(pass.representation));
  out.probability = *std::max_element(p.data().begin(), p.data().end());
  const std::size_t n = pass.input.length;
  out.tokens.assign(statement.tokens.begin(), statement.tokens.begin() + static_cast<std::ptrdiff_t>(n));
  const auto w = pass.attention.result.weights.data();
  out.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

std::array<double, kReasonCount> reason_class_weights(std::span<const ReasonInstance* const> data,
                                                      std::vector<std::string>* warnings) {
  std::array<std::size_t, kReasonCount> counts{};
  for (const ReasonInstance* r : data) ++counts[reason_index(r->reason)];
  std::size_t present = 0;
  for (std::size_t c : counts) present += c > 0;
  std::array<double, kReasonCount> weights{};
  if (present == 0) return weights;
  std::string missing;
  for (std::size_t c = 0; c < kReasonCount; ++c) {
    if (counts[c] == 0) {
      missing += (missing.empty() ? "" : ", ") + std::string(corpus::to_string(corpus::kAllReasons[c]));
      continue;
    }
    weights[c] = static_cast<double>(data.size()) / (static_cast<double>(present) * static_cast<double>(counts[c]));
  }
  if (!missing.empty() && warnings) {
    warnings->push_back("reason classes absent from training data: " + missing +
                        "; weights computed over the present classes");
  }
  return weights;
}

namespace {

double weighted_ce(const Tensor& p, std::size_t target, double weight) {
  return -weight * std::log(std::max(p[target], numerics::kProbabilityFloor));
}

}  // namespace

double reason_batch_loss(const ReasonModel& model, std::span<const ReasonInstance* const> batch) {
  if (batch.empty()) throw Error("empty batch");
  double total = 0.0;
  for (const ReasonInstance* inst : batch) {
    const std::size_t c = reason_index(inst->reason);
    total += weighted_ce(reason_probabilities(model, inst->statement), c, model.class_weights[c]);
  }
  return total / static_cast<double>(batch.size());
}

double reason_batch_gradient(ReasonModel& model, std::span<const ReasonInstance* const> batch) {
  if (batch.empty()) throw Error("empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  std::vector<double> d_rep(model.encoder.output_dim()), d_logits(kReasonCount);
  for (const ReasonInstance* inst : batch) {
    const EncoderPass pass = encode_statement(model.encoder, inst->statement.tokens, section_of(inst->statement));
    const Tensor p = softmax_logits(model.dense.forward(pass.representation));
    const std::size_t c = reason_index(inst->reason);
    const double w = model.class_weights[c];
    total += weighted_ce(p, c, w);
    for (std::size_t k = 0; k < kReasonCount; ++k) d_logits[k] = w * scale * (p[k] - (k == c ? 1.0 : 0.0));
    std::fill(d_rep.begin(), d_rep.end(), 0.0);
    model.dense.backward(pass.representation, d_logits, d_rep);
    backward_statement(model.encoder, pass, d_rep);
  }
  return total * scale;
}

analysis::EvaluationReport evaluate_reason(const ReasonModel& model, std::span<const ReasonInstance> instances) {
  if (instances.empty()) throw DataError("cannot evaluate on an empty instance list");
  std::vector<std::string> names;
  for (corpus::Reason r : corpus::kAllReasons) names.emplace_back(corpus::to_string(r));
  analysis::ConfusionMatrix cm(names);
  for (const ReasonInstance& inst : instances) {
    cm.add(reason_index(inst.reason), reason_index(predict_reason(model, inst.statement)));
  }
  return analysis::precision_recall_f1(cm);
}

ReasonModel init_reason_model(const NeedModel* pretrained, std::span<const ReasonInstance* const> training,
                              const TrainConfig& cfg, Variant scratch_variant, std::vector<std::string>* warnings,
                              const encoder::PretrainedVectors* vectors) {
  std::vector<const corpus::Statement*> statements;
  for (const ReasonInstance* r : training) statements.push_back(&r->statement);
  ReasonModel model;
  if (pretrained) {
    pretrained->validate();
    const StatementEncoder& src = pretrained->encoder;
    if (src.embed_dim() != cfg.dims.embed_dim || src.hidden_dim() != cfg.dims.hidden_dim) {
      throw ShapeError("checkpoint dims (embed " + std::to_string(src.embed_dim()) + ", hidden " +
                       std::to_string(src.hidden_dim()) + ") do not match the configuration (embed " +
                       std::to_string(cfg.dims.embed_dim) + ", hidden " + std::to_string(cfg.dims.hidden_dim) +
                       ")");
    }
    model.encoder = src;
    numerics::Rng extend_rng(numerics::derive_seed(cfg.seed, 1));
    std::set<std::string> tokens, keys;
    for (const corpus::Statement* s : statements) {
      tokens.insert(s->tokens.begin(), s->tokens.end());
      if (has_section(src.variant)) keys.insert(encoder::section_key(s->section_heading, s->is_lead));
    }
    encoder::extend_word_embeddings(model.encoder.words, {tokens.begin(), tokens.end()}, extend_rng, vectors,
                                    cfg.train_pretrained);
    if (has_section(src.variant)) {
      encoder::extend_section_embeddings(model.encoder.sections, {keys.begin(), keys.end()}, extend_rng);
    }
  } else {
    numerics::Rng init_rng(numerics::derive_seed(cfg.seed, 1));
    model.encoder = make_statement_encoder(scratch_variant, cfg.dims, statements, vectors, cfg.train_pretrained,
                                           init_rng);
  }
  for (ParamSlot* s : model.encoder.slots()) s->zero_grad();
  numerics::Rng head_rng(numerics::derive_seed(cfg.seed, 3));
  model.dense = DenseLayer::glorot(model.encoder.output_dim(), kReasonCount, head_rng, "reason_dense");
  model.class_weights = reason_class_weights(training, warnings);
  return model;
}

namespace {

std::vector<ReasonInstance> gather(std::span<const ReasonInstance> all, const std::vector<std::size_t>& idx) {
  std::vector<ReasonInstance> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

ReasonTrainResult fine_tune_reason(const NeedModel* pretrained, std::span<const ReasonInstance> reasons,
                                   const TrainConfig& cfg, Variant scratch_variant,
                                   const encoder::PretrainedVectors* vectors) {
  cfg.validate();
  if (reasons.empty()) throw DataError("cannot train on an empty reason corpus");
  ReasonTrainResult result;
  result.split = make_split(reasons.size(), cfg.split, cfg.seed);
  if (result.split.train.empty() || result.split.eval.empty()) throw DataError("reason corpus too small to split");
  std::vector<const ReasonInstance*> training;
  for (std::size_t i : result.split.train) training.push_back(&reasons[i]);
  result.model = init_reason_model(pretrained, training, cfg, scratch_variant, &result.warnings, vectors);
  ReasonModel& model = result.model;
  const auto slots = model.slots();
  numerics::AdamState adam(cfg.adam, slots);

  const std::vector<ReasonInstance> eval_part = gather(reasons, result.split.eval);
  numerics::Rng order_rng(numerics::derive_seed(cfg.seed, 2));
  std::vector<std::size_t> order = result.split.train;
  std::vector<const ReasonInstance*> batch;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(&reasons[order[k]]);
      loss_sum += reason_batch_gradient(model, batch) * static_cast<double>(batch.size());
      numerics::adam_step(adam, slots);
    }
    const auto report = evaluate_reason(model, eval_part);
    result.history.push_back({epoch, loss_sum / static_cast<double>(order.size()), report.accuracy, report.macro_f1});
  }
  result.eval_report = evaluate_reason(model, eval_part);
  if (!result.split.validation.empty()) {
    result.validation_report = evaluate_reason(model, gather(reasons, result.split.validation));
  }
  return result;
}

}  // namespace citeneed::models

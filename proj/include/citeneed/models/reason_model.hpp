// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeneed/analysis/metrics.hpp"
#include "citeneed/corpus/types.hpp"
#include "citeneed/models/config.hpp"
#include "citeneed/models/dense.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/statement_encoder.hpp"

namespace citeneed::models {

/// Eight-way citation-reason classifier on top of a need-model encoder.
struct ReasonModel {
  StatementEncoder encoder;
  DenseLayer dense;  // 8 x encoder.output_dim()
  std::array<double, corpus::kReasonCount> class_weights{};

  Variant variant() const { return encoder.variant; }
  std::vector<ParamSlot*> slots();
  std::vector<const ParamSlot*> slots() const;
  void validate() const;
};

/// Softmax over the eight reasons, in taxonomy order.
Tensor reason_probabilities(const ReasonModel& model, const corpus::Statement& statement);
corpus::Reason predict_reason(const ReasonModel& model, const corpus::Statement& statement);

/// Per-token attention weights of the reason model's encoder.
AttentionPrediction reason_attention(const ReasonModel& model, const corpus::Statement& statement);

/// weight_c = N / (K * N_c) over the K classes present; absent classes get 0
/// and a warning naming them.
std::array<double, corpus::kReasonCount> reason_class_weights(std::span<const corpus::ReasonInstance* const> data,
                                                              std::vector<std::string>* warnings);

/// Mean class-weighted cross-entropy.
double reason_batch_loss(const ReasonModel& model, std::span<const corpus::ReasonInstance* const> batch);
double reason_batch_gradient(ReasonModel& model, std::span<const corpus::ReasonInstance* const> batch);

analysis::EvaluationReport evaluate_reason(const ReasonModel& model,
                                           std::span<const corpus::ReasonInstance> instances);

/// Reason model before any training step. With `pretrained`, the encoder is
/// a copy of the checkpoint's, extended with rows for unseen tokens and
/// section keys of `training`; otherwise a fresh `scratch_variant` encoder
/// is built from the same seed. The dense layer and class weights do not
/// depend on that choice. Throws ShapeError when cfg dims disagree with the
/// checkpoint. `vectors` seeds the rows of tokens that are new to the
/// encoder in either case.
ReasonModel init_reason_model(const NeedModel* pretrained, std::span<const corpus::ReasonInstance* const> training,
                              const TrainConfig& cfg, Variant scratch_variant,
                              std::vector<std::string>* warnings,
                              const encoder::PretrainedVectors* vectors = nullptr);

struct ReasonTrainResult {
  ReasonModel model;
  std::vector<EpochStats> history;
  DataSplit split;
  analysis::EvaluationReport eval_report;
  std::optional<analysis::EvaluationReport> validation_report;
  std::vector<std::string> warnings;
};

/// Trains every parameter with class-weighted cross-entropy and Adam.
ReasonTrainResult fine_tune_reason(const NeedModel* pretrained, std::span<const corpus::ReasonInstance> reasons,
                                   const TrainConfig& cfg, Variant scratch_variant = Variant::rnna_ws,
                                   const encoder::PretrainedVectors* vectors = nullptr);

}  // namespace citeneed::models

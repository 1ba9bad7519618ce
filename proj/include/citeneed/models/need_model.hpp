// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeneed/analysis/metrics.hpp"
#include "citeneed/corpus/types.hpp"
#include "citeneed/models/config.hpp"
#include "citeneed/models/dense.hpp"
#include "citeneed/models/statement_encoder.hpp"

namespace citeneed::models {

/// Citation-need classifier: encoder, then a dense layer to one logit and a
/// sigmoid.
struct NeedModel {
  StatementEncoder encoder;
  DenseLayer dense;  // 1 x encoder.output_dim()

  Variant variant() const { return encoder.variant; }
  std::vector<ParamSlot*> slots();
  std::vector<const ParamSlot*> slots() const;
  void validate() const;
};

/// Fresh model with seeded initialization (dense layer last).
NeedModel make_need_model(Variant variant, const ModelDims& dims,
                          const std::vector<const corpus::Statement*>& training,
                          const encoder::PretrainedVectors* pretrained, bool train_pretrained, numerics::Rng& rng);

/// P(citation needed).
double forward_need(const NeedModel& model, const corpus::Statement& statement);
double forward_need(const NeedModel& model, const std::vector<std::string>& tokens,
                    const std::optional<SectionInput>& section);

struct AttentionPrediction {
  double probability = 0.0;
  std::vector<std::string> tokens;  // after truncation to max_len
  std::vector<double> weights;      // one per token, summing to 1
};

/// Throws VariantError for the vanilla variants.
AttentionPrediction predict_with_attention(const NeedModel& model, const corpus::Statement& statement);

/// Mean binary cross-entropy over the batch.
double need_batch_loss(const NeedModel& model, std::span<const corpus::LabeledInstance* const> batch);
/// Same loss; accumulates d loss / d params into the model's grads.
double need_batch_gradient(NeedModel& model, std::span<const corpus::LabeledInstance* const> batch);

/// Binary report with classes ordered {negative, positive}, threshold 0.5.
/// Throws DataError on an empty list.
analysis::EvaluationReport evaluate_need(const NeedModel& model, std::span<const corpus::LabeledInstance> instances);

struct NeedTrainResult {
  NeedModel model;
  std::vector<EpochStats> history;
  DataSplit split;
  analysis::EvaluationReport eval_report;                       // eval (test) part
  std::optional<analysis::EvaluationReport> validation_report;  // 50/30/20 only
};

/// Mini-batch Adam on the training part of the split. Vocabulary and
/// section keys come from the training part only. Throws DataError on an
/// empty or single-label corpus.
NeedTrainResult train_need(std::span<const corpus::LabeledInstance> instances, const TrainConfig& cfg,
                           Variant variant, const encoder::PretrainedVectors* pretrained = nullptr);

}  // namespace citeneed::models

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citeneed/models/statement_encoder.hpp"
#include "citeneed/numerics/adam.hpp"

namespace citeneed::models {

/// 50/50: train / eval. 50/30/20: train / test / validation; per-epoch
/// monitoring uses test and the final report uses validation.
enum class SplitMode { half, three_way };

std::string_view split_flag(SplitMode m);  // "50/50" or "50/30/20"
std::optional<SplitMode> parse_split_flag(std::string_view s);

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 100;
  ModelDims dims;
  numerics::AdamConfig adam;
  std::uint64_t seed = kDefaultSeed;
  SplitMode split = SplitMode::half;
  bool train_pretrained = false;

  /// Throws Error naming the first invalid field.
  void validate() const;
};

/// Instance positions of each part, each part in shuffled order.
struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
  std::vector<std::size_t> validation;  // empty for 50/50
};

/// Seeded shuffle of 0..n-1 cut at 50% (and 80% for 50/30/20), rounding the
/// training share down.
DataSplit make_split(std::size_t n, SplitMode mode, std::uint64_t seed);

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean per-instance loss over the epoch's batches
  double eval_accuracy = 0.0;
  double eval_f1 = 0.0;  // macro
};

}  // namespace citeneed::models

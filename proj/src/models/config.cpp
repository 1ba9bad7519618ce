// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/config.hpp"

#include <numeric>

#include "citeneed/error.hpp"
#include "citeneed/numerics/rng.hpp"

namespace citeneed::models {

std::string_view split_flag(SplitMode m) { return m == SplitMode::half ? "50/50" : "50/30/20"; }

std::optional<SplitMode> parse_split_flag(std::string_view s) {
  if (s == "50/50") return SplitMode::half;
  if (s == "50/30/20") return SplitMode::three_way;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (epochs == 0) throw Error("epochs must be positive");
  if (batch_size == 0) throw Error("batch size must be positive");
  if (dims.hidden_dim == 0) throw Error("hidden dim must be positive");
  if (dims.embed_dim == 0) throw Error("embedding dim must be positive");
  if (dims.max_len == 0) throw Error("max_len must be positive");
  if (!(adam.learning_rate > 0.0)) throw Error("learning rate must be positive");
}

DataSplit make_split(std::size_t n, SplitMode mode, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  numerics::Rng rng(numerics::derive_seed(seed, 0));
  rng.shuffle(std::span<std::size_t>(order));
  DataSplit split;
  const std::size_t n_train = n / 2;
  const std::size_t n_eval = mode == SplitMode::half ? n - n_train : (n * 8) / 10 - n_train;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.eval.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                    order.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval));
  split.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval), order.end());
  return split;
}

}  // namespace citeneed::models

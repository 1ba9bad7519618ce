// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "citeneed/baselines/features.hpp"
#include "citeneed/baselines/forest.hpp"
#include "citeneed/corpus/types.hpp"

namespace citeneed::baselines {

struct BaselineResult {
  FeatureTable features;
  TunedForest tuned;
};

/// Features for every instance, then tune_forest with classes
/// {negative, positive}.
BaselineResult run_need_baseline(const std::vector<corpus::LabeledInstance>& instances,
                                 const FeatureExtractor& extractor, std::uint64_t seed,
                                 const std::vector<std::size_t>& tree_grid = kTreeGrid,
                                 const std::vector<std::size_t>& depth_grid = kDepthGrid,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace citeneed::baselines

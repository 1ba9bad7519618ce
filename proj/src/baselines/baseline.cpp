// SPDX-License-Identifier: Apache-2.0
#include "citeneed/baselines/baseline.hpp"

namespace citeneed::baselines {

BaselineResult run_need_baseline(const std::vector<corpus::LabeledInstance>& instances,
                                 const FeatureExtractor& extractor, std::uint64_t seed,
                                 const std::vector<std::size_t>& tree_grid,
                                 const std::vector<std::size_t>& depth_grid, std::vector<std::string>* warnings) {
  std::vector<const corpus::Statement*> statements;
  std::vector<std::size_t> labels;
  for (const auto& inst : instances) {
    statements.push_back(&inst.statement);
    labels.push_back(inst.label == corpus::Label::positive ? 1 : 0);
  }
  BaselineResult out;
  out.features = extract_all(extractor, statements);
  out.tuned = tune_forest(out.features.rows, labels, {"negative", "positive"}, seed, tree_grid, depth_grid, warnings);
  return out;
}

}  // namespace citeneed::baselines

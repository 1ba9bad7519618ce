// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "citeneed/analysis/metrics.hpp"
#include "citeneed/numerics/rng.hpp"

namespace citeneed::baselines {

using FeatureMatrix = std::vector<std::vector<double>>;

/// 1 - sum p_c^2. Throws Error when every count is zero.
double gini(std::span<const std::size_t> counts);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  std::size_t left = 0, right = 0;
  std::vector<double> distribution;  // leaves only, sums to 1

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 8;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(d))

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  ForestParams params;
  std::uint64_t seed = 0;

  friend bool operator==(const RandomForest&, const RandomForest&) = default;
};

/// Grows one tree on `rows` (repeats allowed). At each node a subset of
/// `features_per_split` features is drawn from `rng` and searched in
/// ascending index order. Splits maximize Gini gain; ties go to the lower
/// feature index, then the lower threshold (midpoints of adjacent distinct
/// values). A node becomes a leaf at max_depth, when pure, or when no split
/// has positive gain.
DecisionTree build_tree(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                        std::vector<std::size_t> rows, std::size_t n_classes, std::size_t max_depth,
                        std::size_t features_per_split, numerics::Rng& rng);

/// Tree t draws a bootstrap sample of n rows from Rng(seed + t), then grows
/// with build_tree on the same generator. Labels are 0..n_classes-1 and must cover at least two
/// classes. If every feature is constant, a warning is appended and each
/// tree is a single majority leaf.
RandomForest train_forest(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                          std::size_t n_classes, const ForestParams& params, std::uint64_t seed,
                          std::vector<std::string>* warnings = nullptr);

const std::vector<double>& predict_tree(const DecisionTree& tree, std::span<const double> x);
/// Mean of the trees' leaf distributions.
std::vector<double> predict_forest(const RandomForest& forest, std::span<const double> x);
/// Argmax of predict_forest, lowest class on ties.
std::size_t predict_class(const RandomForest& forest, std::span<const double> x);

analysis::EvaluationReport evaluate_forest(const RandomForest& forest, const FeatureMatrix& features,
                                           const std::vector<std::size_t>& labels,
                                           const std::vector<std::string>& class_names,
                                           const std::vector<std::size_t>& rows);

struct GridPoint {
  std::size_t n_trees = 0, max_depth = 0;
  double test_macro_f1 = 0.0;
};

struct TunedForest {
  RandomForest forest;  // trained on the train part with the chosen point
  std::vector<GridPoint> grid;
  std::size_t best = 0;  // index into grid
  analysis::EvaluationReport validation;
};

inline const std::vector<std::size_t> kTreeGrid = {50, 100, 200};
inline const std::vector<std::size_t> kDepthGrid = {4, 8, 16};

/// Shuffled 50/30/20 train/test/validation split from derive_seed(seed, 0);
/// every grid point is trained on train with seed derive_seed(seed, 1) and
/// scored by macro-F1 on test (first best in grid order wins). The winner
/// is scored on validation.
TunedForest tune_forest(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                        const std::vector<std::string>& class_names, std::uint64_t seed,
                        const std::vector<std::size_t>& tree_grid = kTreeGrid,
                        const std::vector<std::size_t>& depth_grid = kDepthGrid,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace citeneed::baselines

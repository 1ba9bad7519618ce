// SPDX-License-Identifier: Apache-2.0
#include "citeneed/baselines/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "citeneed/error.hpp"
#include "citeneed/models/config.hpp"

namespace citeneed::baselines {

double gini(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw Error("gini: all class counts are zero");
  double sum = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

namespace {

constexpr double kGainTieEps = 1e-12;

struct TreeBuilder {
  const FeatureMatrix& x;
  const std::vector<std::size_t>& y;
  std::size_t n_classes, max_depth, per_split;
  numerics::Rng& rng;
  DecisionTree tree;

  std::vector<std::size_t> counts(std::span<const std::size_t> rows) const {
    std::vector<std::size_t> c(n_classes, 0);
    for (std::size_t r : rows) ++c[y[r]];
    return c;
  }

  std::size_t leaf(const std::vector<std::size_t>& c) {
    TreeNode node;
    const double total = static_cast<double>(std::accumulate(c.begin(), c.end(), std::size_t{0}));
    node.distribution.resize(n_classes);
    for (std::size_t k = 0; k < n_classes; ++k) node.distribution[k] = static_cast<double>(c[k]) / total;
    tree.nodes.push_back(std::move(node));
    return tree.nodes.size() - 1;
  }

  std::vector<std::size_t> feature_subset() {
    const std::size_t d = x.front().size();
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t k = std::min(per_split, d);
    for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(d - i)]);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
  }

  std::size_t build(std::vector<std::size_t>& rows, std::size_t depth) {
    const auto c = counts(rows);
    const std::size_t nonzero = static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](auto v) { return v > 0; }));
    if (depth >= max_depth || nonzero <= 1 || rows.size() < 2) return leaf(c);

    const double parent = gini(c);
    const double n = static_cast<double>(rows.size());
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    std::vector<std::size_t> left(n_classes), right(n_classes);
    for (std::size_t f : feature_subset()) {
      for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {x[rows[i]][f], y[rows[i]]};
      std::sort(sorted.begin(), sorted.end());
      std::fill(left.begin(), left.end(), 0);
      right = c;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left[sorted[i].second];
        --right[sorted[i].second];
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1), nr = n - nl;
        const double gain = parent - (nl / n) * gini(left) - (nr / n) * gini(right);
        // Features ascend and thresholds ascend, so only a strictly better
        // gain replaces the incumbent.
        if (gain > best_gain + kGainTieEps) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        }
      }
    }
    if (best_feature < 0) return leaf(c);

    std::vector<std::size_t> lrows, rrows;
    for (std::size_t r : rows) {
      (x[r][static_cast<std::size_t>(best_feature)] <= best_threshold ? lrows : rrows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const std::size_t self = tree.nodes.size();
    tree.nodes.push_back(TreeNode{best_feature, best_threshold, 0, 0, {}});
    const std::size_t l = build(lrows, depth + 1);
    const std::size_t r = build(rrows, depth + 1);
    tree.nodes[self].left = l;
    tree.nodes[self].right = r;
    return self;
  }
};

}  // namespace

DecisionTree build_tree(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                        std::vector<std::size_t> rows, std::size_t n_classes, std::size_t max_depth,
                        std::size_t features_per_split, numerics::Rng& rng) {
  if (rows.empty()) throw DataError("build_tree: no rows");
  TreeBuilder b{features, labels, n_classes, max_depth, std::max<std::size_t>(features_per_split, 1), rng, {}};
  b.build(rows, 0);
  return std::move(b.tree);
}

RandomForest train_forest(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                          std::size_t n_classes, const ForestParams& params, std::uint64_t seed,
                          std::vector<std::string>* warnings) {
  if (features.empty()) throw DataError("train_forest: no training rows");
  if (features.size() != labels.size()) throw ShapeError("train_forest: feature and label counts differ");
  if (params.n_trees == 0) throw Error("train_forest: n_trees must be positive");
  const std::size_t d = features.front().size();
  for (const auto& row : features) {
    if (row.size() != d) throw ShapeError("train_forest: ragged feature rows");
  }
  std::vector<std::size_t> present(n_classes, 0);
  for (std::size_t l : labels) {
    if (l >= n_classes) throw DataError("train_forest: label out of range");
    ++present[l];
  }
  if (std::count_if(present.begin(), present.end(), [](auto v) { return v > 0; }) < 2) {
    throw DataError("train_forest: training labels contain a single class");
  }
  bool all_constant = true;
  for (std::size_t f = 0; f < d && all_constant; ++f) {
    for (const auto& row : features) {
      if (row[f] != features.front()[f]) {
        all_constant = false;
        break;
      }
    }
  }
  if (all_constant && warnings) {
    warnings->push_back("train_forest: every feature is constant; trees are single majority leaves");
  }

  RandomForest forest;
  forest.n_classes = n_classes;
  forest.n_features = d;
  forest.params = params;
  forest.seed = seed;
  const std::size_t per_split =
      params.features_per_split ? params.features_per_split
                                : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)))));
  forest.params.features_per_split = per_split;
  forest.trees.resize(params.n_trees);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < params.n_trees; t = next++) {
      numerics::Rng rng(seed + t);
      std::vector<std::size_t> rows(features.size());
      for (std::size_t& r : rows) r = rng.below(features.size());
      forest.trees[t] = build_tree(features, labels, std::move(rows), n_classes, params.max_depth, per_split, rng);
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(params.n_trees, 16));
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  return forest;
}

const std::vector<double>& predict_tree(const DecisionTree& tree, std::span<const double> x) {
  const TreeNode* node = &tree.nodes.at(0);
  while (node->feature >= 0) {
    node = &tree.nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return node->distribution;
}

std::vector<double> predict_forest(const RandomForest& forest, std::span<const double> x) {
  if (x.size() != forest.n_features) {
    throw ShapeError("predict_forest: expected " + std::to_string(forest.n_features) + " features, got " +
                     std::to_string(x.size()));
  }
  std::vector<double> mean(forest.n_classes, 0.0);
  for (const DecisionTree& tree : forest.trees) {
    const auto& dist = predict_tree(tree, x);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += dist[k];
  }
  for (double& v : mean) v /= static_cast<double>(forest.trees.size());
  return mean;
}

std::size_t predict_class(const RandomForest& forest, std::span<const double> x) {
  const auto dist = predict_forest(forest, x);
  return static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

analysis::EvaluationReport evaluate_forest(const RandomForest& forest, const FeatureMatrix& features,
                                           const std::vector<std::size_t>& labels,
                                           const std::vector<std::string>& class_names,
                                           const std::vector<std::size_t>& rows) {
  analysis::ConfusionMatrix confusion(class_names);
  for (std::size_t r : rows) confusion.add(labels[r], predict_class(forest, features[r]));
  return analysis::precision_recall_f1(confusion);
}

TunedForest tune_forest(const FeatureMatrix& features, const std::vector<std::size_t>& labels,
                        const std::vector<std::string>& class_names, std::uint64_t seed,
                        const std::vector<std::size_t>& tree_grid, const std::vector<std::size_t>& depth_grid,
                        std::vector<std::string>* warnings) {
  if (tree_grid.empty() || depth_grid.empty()) throw Error("tune_forest: empty grid");
  const auto split = models::make_split(features.size(), models::SplitMode::three_way, seed);
  if (split.eval.empty() || split.validation.empty()) throw DataError("tune_forest: too few rows to split");
  FeatureMatrix train_x;
  std::vector<std::size_t> train_y;
  for (std::size_t r : split.train) {
    train_x.push_back(features[r]);
    train_y.push_back(labels[r]);
  }
  const std::uint64_t forest_seed = numerics::derive_seed(seed, 1);

  TunedForest out;
  double best_f1 = -1.0;
  for (std::size_t trees : tree_grid) {
    for (std::size_t depth : depth_grid) {
      ForestParams params{trees, depth, 0};
      std::vector<std::string> local;
      RandomForest forest = train_forest(train_x, train_y, class_names.size(), params, forest_seed, &local);
      if (warnings && out.grid.empty()) warnings->insert(warnings->end(), local.begin(), local.end());
      const double f1 = evaluate_forest(forest, features, labels, class_names, split.eval).macro_f1;
      out.grid.push_back(GridPoint{trees, depth, f1});
      if (f1 > best_f1) {
        best_f1 = f1;
        out.best = out.grid.size() - 1;
        out.forest = std::move(forest);
      }
    }
  }
  out.validation = evaluate_forest(out.forest, features, labels, class_names, split.validation);
  return out;
}

}  // namespace citeneed::baselines

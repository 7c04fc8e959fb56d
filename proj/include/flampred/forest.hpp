// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// CART random forest for regression (variance impurity) and classification
// (Gini impurity), with impurity-decrease feature importance and seeded
// k-fold hyperparameter search.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flampred {

enum class Task { kRegression, kClassification };

struct MaxFeatures {
  enum class Kind { kAll, kSqrt, kFraction };
  Kind kind = Kind::kAll;
  double fraction = 1.0;

  static MaxFeatures all() { return {Kind::kAll, 1.0}; }
  static MaxFeatures sqrt() { return {Kind::kSqrt, 0.0}; }
  static MaxFeatures of(double f) { return {Kind::kFraction, f}; }

  // Number of candidate features per node, at least 1.
  std::size_t resolve(std::size_t n_features) const;
  bool operator==(const MaxFeatures&) const = default;
};

struct Hyperparams {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // nullopt: unlimited
  std::size_t min_samples_split = 2;
  MaxFeatures max_features = MaxFeatures::all();
  bool bootstrap = true;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

std::string describe(const Hyperparams& hp);

// Conventional search grid: n_trees {100, 300} x max_depth {unlimited, 10, 20}
// x min_samples_split {2, 5}; max_features 1/3 (regression) or sqrt
// (classification); bootstrap on.
std::vector<Hyperparams> default_grid(Task task, std::uint64_t seed = 0);

// Internal nodes have feature >= 0 and both children; leaves have
// feature == -1 and `leaf` indexing Tree::leaf_values. Samples with
// x[feature] <= threshold go left.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t leaf = -1;
};

// Regression leaves hold one mean each; classification leaves hold a class
// probability vector of width class_count.
struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<double> leaf_values;

  const double* leaf_for(std::span<const double> x, std::size_t width) const;
};

struct ClassPrediction {
  int label = 0;
  std::vector<double> probabilities;  // aligned with ForestModel::class_labels
};

struct ForestModel {
  Task task = Task::kRegression;
  std::size_t feature_count = 0;
  std::vector<int> class_labels;  // ascending; classification only
  Hyperparams hyperparams;
  std::vector<Tree> trees;
  std::vector<double> importance;  // sums to 1, or all zero without splits

  // Mean of leaf means. Throws std::invalid_argument on dimension mismatch.
  double predict(std::span<const double> x) const;
  std::vector<double> predict(std::span<const std::vector<double>> rows) const;

  // Argmax of averaged leaf probabilities; ties go to the lowest label.
  ClassPrediction predict_class(std::span<const double> x) const;
};

// Tree t draws from derive_seed(hp.seed, Stream::kTree, t), so results are
// independent of how trees are scheduled. For classification, y holds
// integral class labels. Throws FitError on empty or mismatched data.
ForestModel fit_forest(std::span<const std::vector<double>> X, std::span<const double> y, Task task,
                       const Hyperparams& hp);

struct CvResult {
  std::size_t best_index = 0;
  Hyperparams best;
  std::vector<std::vector<double>> fold_scores;  // [grid entry][fold]
  std::vector<double> mean_scores;
};

// Seeded shuffle, k contiguous folds (the first n % k folds get one extra
// row); score is held-out R2 or accuracy. Highest mean wins, earliest grid
// entry on ties.
CvResult cross_validate(std::span<const std::vector<double>> X, std::span<const double> y,
                        Task task, const std::vector<Hyperparams>& grid, std::size_t k,
                        std::uint64_t seed);

}  // namespace flampred

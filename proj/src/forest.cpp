// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/forest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flampred/error.hpp"
#include "flampred/metrics.hpp"
#include "flampred/parallel.hpp"
#include "flampred/random.hpp"

namespace flampred {

std::size_t MaxFeatures::resolve(std::size_t n_features) const {
  std::size_t k = n_features;
  switch (kind) {
    case Kind::kAll: break;
    case Kind::kSqrt: k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features))); break;
    case Kind::kFraction: k = static_cast<std::size_t>(fraction * static_cast<double>(n_features)); break;
  }
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n_features, 1));
}

void Hyperparams::validate() const {
  if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (max_depth && *max_depth < 1) throw ConfigError("max_depth must be >= 1 or unlimited");
  if (min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (max_features.kind == MaxFeatures::Kind::kFraction &&
      !(max_features.fraction > 0.0 && max_features.fraction <= 1.0))
    throw ConfigError("max_features fraction must lie in (0, 1]");
}

std::string describe(const Hyperparams& hp) {
  std::ostringstream out;
  out << "trees=" << hp.n_trees << " depth=";
  if (hp.max_depth) out << *hp.max_depth; else out << "none";
  out << " split=" << hp.min_samples_split << " features=";
  switch (hp.max_features.kind) {
    case MaxFeatures::Kind::kAll: out << "all"; break;
    case MaxFeatures::Kind::kSqrt: out << "sqrt"; break;
    case MaxFeatures::Kind::kFraction: out << hp.max_features.fraction; break;
  }
  out << " bootstrap=" << (hp.bootstrap ? "on" : "off") << " seed=" << hp.seed;
  return out.str();
}

std::vector<Hyperparams> default_grid(Task task, std::uint64_t seed) {
  std::vector<Hyperparams> grid;
  for (std::size_t trees : {100, 300}) {
    for (std::optional<std::size_t> depth :
         {std::optional<std::size_t>{}, std::optional<std::size_t>{10}, std::optional<std::size_t>{20}}) {
      for (std::size_t split : {2, 5}) {
        Hyperparams hp;
        hp.n_trees = trees;
        hp.max_depth = depth;
        hp.min_samples_split = split;
        hp.max_features =
            task == Task::kRegression ? MaxFeatures::of(1.0 / 3.0) : MaxFeatures::sqrt();
        hp.bootstrap = true;
        hp.seed = seed;
        grid.push_back(hp);
      }
    }
  }
  return grid;
}

const double* Tree::leaf_for(std::span<const double> x, std::size_t width) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                        : n.right);
  }
  return leaf_values.data() + static_cast<std::size_t>(nodes[i].leaf) * width;
}

namespace {

// Training data in column-major layout, shared read-only by all trees.
struct TrainingData {
  std::size_t rows = 0;
  std::size_t features = 0;
  std::vector<double> columns;  // features x rows
  std::vector<double> y;        // regression target
  std::vector<int> cls;         // classification: index into class_labels
  std::size_t classes = 0;
  Task task = Task::kRegression;
  // Features that vary over the training rows. Constant columns never enter
  // the candidate draw, so adding one leaves every tree unchanged.
  std::vector<std::size_t> active;

  double x(std::size_t feature, std::uint32_t row) const { return columns[feature * rows + row]; }
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingData& data, const Hyperparams& hp, std::uint64_t seed)
      : data_(data), hp_(hp), rng_(seed), importance_(data.features, 0.0) {}

  Tree build() {
    const std::size_t n = data_.rows;
    samples_.resize(n);
    if (hp_.bootstrap) {
      for (auto& s : samples_) s = static_cast<std::uint32_t>(rng_.uniform_index(n));
    } else {
      for (std::size_t i = 0; i < n; ++i) samples_[i] = static_cast<std::uint32_t>(i);
    }
    total_ = static_cast<double>(n);
    feature_order_.resize(data_.active.size());
    scratch_.resize(n);
    width_ = data_.task == Task::kRegression ? 1 : data_.classes;

    struct Work {
      std::size_t node, begin, end, depth;
    };
    tree_.nodes.emplace_back();
    std::vector<Work> stack{{0, 0, n, 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      const auto children = split_node(w.node, w.begin, w.end, w.depth);
      if (children) {
        const auto [mid, left, right] = *children;
        stack.push_back({right, mid, w.end, w.depth + 1});
        stack.push_back({left, w.begin, mid, w.depth + 1});
      }
    }
    return std::move(tree_);
  }

  const std::vector<double>& importance() const { return importance_; }

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0;
    double score = -1;
  };

  // Sum of squared deviations (regression) or n * Gini (classification).
  double impurity_sum(std::size_t begin, std::size_t end) const {
    const double n = static_cast<double>(end - begin);
    if (data_.task == Task::kRegression) {
      double mean = 0;
      for (std::size_t i = begin; i < end; ++i) mean += data_.y[samples_[i]];
      mean /= n;
      double sse = 0;
      for (std::size_t i = begin; i < end; ++i) {
        const double d = data_.y[samples_[i]] - mean;
        sse += d * d;
      }
      return sse;
    }
    std::vector<double> counts(data_.classes, 0.0);
    for (std::size_t i = begin; i < end; ++i) counts[static_cast<std::size_t>(data_.cls[samples_[i]])] += 1;
    double sq = 0;
    for (double c : counts) sq += c * c;
    return n - sq / n;
  }

  bool is_pure(std::size_t begin, std::size_t end) const {
    for (std::size_t i = begin + 1; i < end; ++i) {
      if (data_.task == Task::kRegression) {
        if (data_.y[samples_[i]] != data_.y[samples_[begin]]) return false;
      } else if (data_.cls[samples_[i]] != data_.cls[samples_[begin]]) {
        return false;
      }
    }
    return true;
  }

  void make_leaf(std::size_t node, std::size_t begin, std::size_t end) {
    TreeNode& nd = tree_.nodes[node];
    nd.feature = -1;
    nd.leaf = static_cast<std::int32_t>(tree_.leaf_values.size() / width_);
    const double n = static_cast<double>(end - begin);
    if (data_.task == Task::kRegression) {
      double sum = 0, lo = data_.y[samples_[begin]], hi = lo;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = data_.y[samples_[i]];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      tree_.leaf_values.push_back(std::clamp(sum / n, lo, hi));
    } else {
      std::vector<double> counts(data_.classes, 0.0);
      for (std::size_t i = begin; i < end; ++i) counts[static_cast<std::size_t>(data_.cls[samples_[i]])] += 1;
      for (double c : counts) tree_.leaf_values.push_back(c / n);
    }
  }

  // Scores every boundary between distinct sorted values of one feature.
  // Larger is better: sum_l^2/n_l + sum_r^2/n_r for variance, and
  // sum_c cl_c^2/n_l + sum_c cr_c^2/n_r for Gini.
  void scan_feature(std::size_t feature, std::size_t begin, std::size_t end, Split& best) {
    const std::size_t n = end - begin;
    auto& buf = buffer_;
    buf.resize(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = {data_.x(feature, samples_[begin + i]), samples_[begin + i]};
    std::sort(buf.begin(), buf.end());

    if (data_.task == Task::kRegression) {
      double total = 0;
      for (const auto& [v, s] : buf) total += data_.y[s];
      double left = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left += data_.y[buf[i].second];
        if (!(buf[i].first < buf[i + 1].first)) continue;
        const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
        const double right = total - left;
        const double score = left * left / nl + right * right / nr;
        if (score > best.score) best = {feature, midpoint(buf[i].first, buf[i + 1].first), score};
      }
    } else {
      std::vector<double> cl(data_.classes, 0.0), cr(data_.classes, 0.0);
      for (const auto& [v, s] : buf) cr[static_cast<std::size_t>(data_.cls[s])] += 1;
      double sq_l = 0, sq_r = 0;
      for (double c : cr) sq_r += c * c;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto c = static_cast<std::size_t>(data_.cls[buf[i].second]);
        sq_l += 2 * cl[c] + 1;
        cl[c] += 1;
        sq_r -= 2 * cr[c] - 1;
        cr[c] -= 1;
        if (!(buf[i].first < buf[i + 1].first)) continue;
        const double nl = static_cast<double>(i + 1), nr = static_cast<double>(n - i - 1);
        const double score = sq_l / nl + sq_r / nr;
        if (score > best.score) best = {feature, midpoint(buf[i].first, buf[i + 1].first), score};
      }
    }
  }

  static double midpoint(double a, double b) {
    const double m = a + (b - a) / 2;
    return m < b ? m : a;
  }

  bool is_constant(std::size_t feature, std::size_t begin, std::size_t end) const {
    const double first = data_.x(feature, samples_[begin]);
    for (std::size_t i = begin + 1; i < end; ++i)
      if (data_.x(feature, samples_[i]) != first) return false;
    return true;
  }

  // Returns (mid, left node, right node) when the node was split.
  std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> split_node(std::size_t node,
                                                                               std::size_t begin,
                                                                               std::size_t end,
                                                                               std::size_t depth) {
    const std::size_t n = end - begin;
    if (n < hp_.min_samples_split || (hp_.max_depth && depth >= *hp_.max_depth) ||
        is_pure(begin, end)) {
      make_leaf(node, begin, end);
      return std::nullopt;
    }

    // Features are drawn in random order; ones constant within the node do
    // not count toward the max_features budget.
    const std::size_t n_active = data_.active.size();
    const std::size_t budget = hp_.max_features.resolve(n_active);
    std::copy(data_.active.begin(), data_.active.end(), feature_order_.begin());
    Split best;
    std::size_t scanned = 0;
    for (std::size_t i = 0; i < n_active && scanned < budget; ++i) {
      const std::size_t j = i + rng_.uniform_index(n_active - i);
      std::swap(feature_order_[i], feature_order_[j]);
      const std::size_t f = feature_order_[i];
      if (is_constant(f, begin, end)) continue;
      ++scanned;
      scan_feature(f, begin, end, best);
    }
    if (best.score < 0) {
      make_leaf(node, begin, end);
      return std::nullopt;
    }

    // Stable partition keeps child sample order platform independent.
    std::size_t mid = begin;
    std::size_t right_count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint32_t s = samples_[i];
      if (data_.x(best.feature, s) <= best.threshold)
        samples_[mid++] = s;
      else
        scratch_[right_count++] = s;
    }
    std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(right_count),
              samples_.begin() + static_cast<std::ptrdiff_t>(mid));

    const double decrease = impurity_sum(begin, end) - impurity_sum(begin, mid) - impurity_sum(mid, end);
    importance_[best.feature] += std::max(decrease, 0.0) / total_;

    const std::size_t left = tree_.nodes.size();
    tree_.nodes.emplace_back();
    const std::size_t right = tree_.nodes.size();
    tree_.nodes.emplace_back();
    TreeNode& nd = tree_.nodes[node];
    nd.feature = static_cast<std::int32_t>(best.feature);
    nd.threshold = best.threshold;
    nd.left = static_cast<std::int32_t>(left);
    nd.right = static_cast<std::int32_t>(right);
    return std::make_tuple(mid, left, right);
  }

  const TrainingData& data_;
  const Hyperparams& hp_;
  Rng rng_;
  Tree tree_;
  std::vector<double> importance_;
  std::vector<std::uint32_t> samples_;
  std::vector<std::uint32_t> scratch_;
  std::vector<std::size_t> feature_order_;
  std::vector<std::pair<double, std::uint32_t>> buffer_;
  double total_ = 1;
  std::size_t width_ = 1;
};

void check_dimension(const ForestModel& m, std::span<const double> x) {
  if (x.size() != m.feature_count)
    throw std::invalid_argument("expected " + std::to_string(m.feature_count) + " features, got " +
                                std::to_string(x.size()));
}

}  // namespace

double ForestModel::predict(std::span<const double> x) const {
  if (task != Task::kRegression) throw std::logic_error("predict() on a classification forest");
  check_dimension(*this, x);
  double sum = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Tree& t : trees) {
    const double v = *t.leaf_for(x, 1);
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::clamp(sum / static_cast<double>(trees.size()), lo, hi);
}

std::vector<double> ForestModel::predict(std::span<const std::vector<double>> rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict(r));
  return out;
}

ClassPrediction ForestModel::predict_class(std::span<const double> x) const {
  if (task != Task::kClassification)
    throw std::logic_error("predict_class() on a regression forest");
  check_dimension(*this, x);
  const std::size_t width = class_labels.size();
  ClassPrediction out;
  out.probabilities.assign(width, 0.0);
  for (const Tree& t : trees) {
    const double* p = t.leaf_for(x, width);
    for (std::size_t c = 0; c < width; ++c) out.probabilities[c] += p[c];
  }
  std::size_t best = 0;
  for (std::size_t c = 0; c < width; ++c) {
    out.probabilities[c] /= static_cast<double>(trees.size());
    if (out.probabilities[c] > out.probabilities[best]) best = c;
  }
  out.label = class_labels[best];
  return out;
}

ForestModel fit_forest(std::span<const std::vector<double>> X, std::span<const double> y, Task task,
                       const Hyperparams& hp) {
  hp.validate();
  if (X.empty()) throw FitError("cannot fit a forest on zero rows");
  if (X.size() != y.size())
    throw FitError("feature rows (" + std::to_string(X.size()) + ") and targets (" +
                   std::to_string(y.size()) + ") differ in length");
  const std::size_t features = X[0].size();
  if (features == 0) throw FitError("no features");

  TrainingData data;
  data.rows = X.size();
  data.features = features;
  data.task = task;
  data.columns.resize(features * data.rows);
  for (std::size_t r = 0; r < data.rows; ++r) {
    if (X[r].size() != features) throw FitError("ragged feature rows");
    for (std::size_t f = 0; f < features; ++f) {
      if (!std::isfinite(X[r][f])) throw FitError("non-finite feature value");
      data.columns[f * data.rows + r] = X[r][f];
    }
    if (!std::isfinite(y[r])) throw FitError("non-finite target value");
  }
  for (std::size_t f = 0; f < features; ++f) {
    const double* col = &data.columns[f * data.rows];
    if (std::any_of(col + 1, col + data.rows, [&](double v) { return v != col[0]; }))
      data.active.push_back(f);
  }

  ForestModel model;
  model.task = task;
  model.feature_count = features;
  model.hyperparams = hp;
  if (task == Task::kRegression) {
    data.y.assign(y.begin(), y.end());
  } else {
    for (double v : y) {
      if (v != std::round(v)) throw FitError("classification labels must be integral");
      model.class_labels.push_back(static_cast<int>(v));
    }
    std::sort(model.class_labels.begin(), model.class_labels.end());
    model.class_labels.erase(std::unique(model.class_labels.begin(), model.class_labels.end()),
                             model.class_labels.end());
    data.classes = model.class_labels.size();
    for (double v : y)
      data.cls.push_back(static_cast<int>(
          std::lower_bound(model.class_labels.begin(), model.class_labels.end(), static_cast<int>(v)) -
          model.class_labels.begin()));
  }

  model.trees.resize(hp.n_trees);
  std::vector<std::vector<double>> tree_importance(hp.n_trees);
  parallel_for(hp.n_trees, [&](std::size_t t) {
    TreeBuilder builder(data, hp, derive_seed(hp.seed, Stream::kTree, t));
    model.trees[t] = builder.build();
    tree_importance[t] = builder.importance();
  });

  model.importance.assign(features, 0.0);
  for (const auto& imp : tree_importance)
    for (std::size_t f = 0; f < features; ++f) model.importance[f] += imp[f];
  double total = 0;
  for (double& v : model.importance) {
    v /= static_cast<double>(hp.n_trees);
    total += v;
  }
  if (total > 0) {
    for (double& v : model.importance) v /= total;
  } else {
    std::fill(model.importance.begin(), model.importance.end(), 0.0);
  }
  return model;
}

CvResult cross_validate(std::span<const std::vector<double>> X, std::span<const double> y,
                        Task task, const std::vector<Hyperparams>& grid, std::size_t k,
                        std::uint64_t seed) {
  if (grid.empty()) throw ConfigError("hyperparameter grid is empty");
  if (k < 2) throw ConfigError("cross-validation needs k >= 2");
  if (X.size() != y.size()) throw FitError("feature rows and targets differ in length");
  if (X.size() < k) throw ConfigError("fewer rows than folds");

  const std::size_t n = X.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, Stream::kCvShuffle));
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_index(i + 1)]);

  std::vector<std::size_t> fold_start{0};
  for (std::size_t f = 0; f < k; ++f) fold_start.push_back(fold_start.back() + n / k + (f < n % k ? 1 : 0));

  CvResult result;
  for (const Hyperparams& hp : grid) {
    std::vector<double> scores;
    for (std::size_t f = 0; f < k; ++f) {
      std::vector<std::vector<double>> train_x, test_x;
      std::vector<double> train_y, test_y;
      for (std::size_t i = 0; i < n; ++i) {
        const bool held_out = i >= fold_start[f] && i < fold_start[f + 1];
        (held_out ? test_x : train_x).push_back(X[order[i]]);
        (held_out ? test_y : train_y).push_back(y[order[i]]);
      }
      const ForestModel model = fit_forest(train_x, train_y, task, hp);
      if (task == Task::kRegression) {
        scores.push_back(r2_score(test_y, model.predict(test_x)));
      } else {
        std::vector<int> truth, pred;
        for (std::size_t i = 0; i < test_x.size(); ++i) {
          truth.push_back(static_cast<int>(test_y[i]));
          pred.push_back(model.predict_class(test_x[i]).label);
        }
        scores.push_back(accuracy(truth, pred));
      }
    }
    double mean = 0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    result.fold_scores.push_back(std::move(scores));
    result.mean_scores.push_back(mean);
  }
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (result.mean_scores[g] > result.mean_scores[result.best_index]) result.best_index = g;
  result.best = grid[result.best_index];
  return result;
}

}  // namespace flampred

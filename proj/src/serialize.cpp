// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/serialize.hpp"

#include "flampred/error.hpp"

namespace flampred {

void to_json(nlohmann::json& j, const Hyperparams& hp) {
  j = nlohmann::json{{"n_trees", hp.n_trees},
                     {"max_depth", hp.max_depth ? nlohmann::json(*hp.max_depth) : nlohmann::json()},
                     {"min_samples_split", hp.min_samples_split},
                     {"bootstrap", hp.bootstrap},
                     {"seed", hp.seed}};
  switch (hp.max_features.kind) {
    case MaxFeatures::Kind::kAll: j["max_features"] = "all"; break;
    case MaxFeatures::Kind::kSqrt: j["max_features"] = "sqrt"; break;
    case MaxFeatures::Kind::kFraction: j["max_features"] = hp.max_features.fraction; break;
  }
}

void from_json(const nlohmann::json& j, Hyperparams& hp) {
  hp = Hyperparams{};
  if (j.contains("n_trees")) hp.n_trees = j.at("n_trees").get<std::size_t>();
  if (j.contains("max_depth")) {
    const auto& d = j.at("max_depth");
    if (d.is_null() || (d.is_string() && d.get<std::string>() == "unlimited"))
      hp.max_depth.reset();
    else
      hp.max_depth = d.get<std::size_t>();
  }
  if (j.contains("min_samples_split")) hp.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  if (j.contains("bootstrap")) hp.bootstrap = j.at("bootstrap").get<bool>();
  if (j.contains("seed")) hp.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("max_features")) {
    const auto& f = j.at("max_features");
    if (f.is_string()) {
      const auto s = f.get<std::string>();
      if (s == "all") hp.max_features = MaxFeatures::all();
      else if (s == "sqrt") hp.max_features = MaxFeatures::sqrt();
      else if (s == "third") hp.max_features = MaxFeatures::of(1.0 / 3.0);
      else throw ConfigError("max_features must be all, sqrt, third or a fraction");
    } else {
      hp.max_features = MaxFeatures::of(f.get<double>());
    }
  }
  hp.validate();
}

void to_json(nlohmann::json& j, const ForestModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : model.trees) {
    std::vector<std::int32_t> feature, left, right, leaf;
    std::vector<double> threshold;
    for (const TreeNode& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      leaf.push_back(n.leaf);
    }
    trees.push_back({{"feature", feature},
                     {"threshold", threshold},
                     {"left", left},
                     {"right", right},
                     {"leaf", leaf},
                     {"values", t.leaf_values}});
  }
  j = nlohmann::json{{"task", model.task == Task::kRegression ? "regression" : "classification"},
                     {"feature_count", model.feature_count},
                     {"class_labels", model.class_labels},
                     {"hyperparams", model.hyperparams},
                     {"importance", model.importance},
                     {"trees", std::move(trees)}};
}

void from_json(const nlohmann::json& j, ForestModel& model) {
  model = ForestModel{};
  const auto task = j.at("task").get<std::string>();
  if (task != "regression" && task != "classification") throw BundleError("unknown forest task");
  model.task = task == "regression" ? Task::kRegression : Task::kClassification;
  model.feature_count = j.at("feature_count").get<std::size_t>();
  model.class_labels = j.at("class_labels").get<std::vector<int>>();
  model.hyperparams = j.at("hyperparams").get<Hyperparams>();
  model.importance = j.at("importance").get<std::vector<double>>();
  const std::size_t width =
      model.task == Task::kRegression ? 1 : std::max<std::size_t>(model.class_labels.size(), 1);
  for (const auto& jt : j.at("trees")) {
    const auto feature = jt.at("feature").get<std::vector<std::int32_t>>();
    const auto threshold = jt.at("threshold").get<std::vector<double>>();
    const auto left = jt.at("left").get<std::vector<std::int32_t>>();
    const auto right = jt.at("right").get<std::vector<std::int32_t>>();
    const auto leaf = jt.at("leaf").get<std::vector<std::int32_t>>();
    Tree t;
    t.leaf_values = jt.at("values").get<std::vector<double>>();
    const std::size_t n = feature.size();
    if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || leaf.size() != n)
      throw BundleError("inconsistent tree node arrays");
    const auto leaves = static_cast<std::int32_t>(t.leaf_values.size() / width);
    for (std::size_t i = 0; i < n; ++i) {
      TreeNode node{feature[i], threshold[i], left[i], right[i], leaf[i]};
      const auto count = static_cast<std::int32_t>(n);
      const bool ok = node.feature < 0
                          ? node.leaf >= 0 && node.leaf < leaves
                          : static_cast<std::size_t>(node.feature) < model.feature_count &&
                                node.left > static_cast<std::int32_t>(i) && node.left < count &&
                                node.right > static_cast<std::int32_t>(i) && node.right < count;
      if (!ok) throw BundleError("corrupt tree node");
      t.nodes.push_back(node);
    }
    model.trees.push_back(std::move(t));
  }
  if (model.trees.empty()) throw BundleError("forest has no trees");
  if (model.importance.size() != model.feature_count) throw BundleError("importance size mismatch");
}

void to_json(nlohmann::json& j, const CopulaModel& model) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& m : model.marginals) {
    columns.push_back(
        {{"name", m.column},
         {"kind", m.kind == MarginalModel::Kind::kDegenerate ? "degenerate" : "empirical-cdf"},
         {"sorted_values", m.sorted_values},
         {"observed_min", m.observed_min},
         {"observed_max", m.observed_max}});
  }
  j = nlohmann::json{{"format", "flampred-copula"},
                     {"version", kCopulaFormatVersion},
                     {"catalog_id", model.catalog_id},
                     {"target_column", model.target_column ? nlohmann::json(*model.target_column)
                                                           : nlohmann::json()},
                     {"fit_row_count", model.fit_row_count},
                     {"columns", std::move(columns)},
                     {"correlation", model.correlation}};
}

void from_json(const nlohmann::json& j, CopulaModel& model) {
  if (j.value("format", "") != "flampred-copula") throw BundleError("not a copula model");
  if (j.at("version").get<int>() != kCopulaFormatVersion)
    throw BundleError("unsupported copula format version");
  model = CopulaModel{};
  model.catalog_id = j.at("catalog_id").get<std::string>();
  if (!j.at("target_column").is_null()) model.target_column = j.at("target_column").get<std::string>();
  model.fit_row_count = j.at("fit_row_count").get<std::size_t>();
  for (const auto& c : j.at("columns")) {
    MarginalModel m;
    m.column = c.at("name").get<std::string>();
    m.kind = c.at("kind").get<std::string>() == "degenerate" ? MarginalModel::Kind::kDegenerate
                                                             : MarginalModel::Kind::kEmpiricalCdf;
    m.sorted_values = c.at("sorted_values").get<std::vector<double>>();
    m.observed_min = c.at("observed_min").get<double>();
    m.observed_max = c.at("observed_max").get<double>();
    if (m.sorted_values.empty()) throw BundleError("empty marginal");
    model.marginals.push_back(std::move(m));
  }
  model.correlation = j.at("correlation").get<std::vector<std::vector<double>>>();
  if (model.correlation.size() != model.marginals.size()) throw BundleError("correlation size mismatch");
}

}  // namespace flampred

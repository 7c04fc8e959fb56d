// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/pipeline.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "flampred/csv.hpp"
#include "flampred/error.hpp"
#include "flampred/metrics.hpp"
#include "flampred/random.hpp"

namespace flampred {

namespace {

std::size_t require_column(const csv::Row& header, std::string_view name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw LoadError("missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

const std::string& cell(const csv::Row& row, std::size_t i, std::size_t row_no) {
  if (i >= row.size()) throw LoadError("short row", row_no);
  return row[i];
}

}  // namespace

std::vector<ExpertLabel> load_expert_labels(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw LoadError("empty expert label file " + path.string());
  std::size_t name_i = require_column(rows[0], "name");
  std::size_t label_i = require_column(rows[0], "label");
  std::vector<ExpertLabel> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto label = parse_fi_label(cell(rows[r], label_i, r));
    if (!label) throw LoadError("label must be L, M or H", r);
    out.push_back({cell(rows[r], name_i, r), *label});
  }
  return out;
}

std::vector<RepeatUnit> load_repeat_units(const std::filesystem::path& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) throw LoadError("empty repeat unit file " + path.string());
  std::size_t name_i = require_column(rows[0], "name");
  std::size_t smiles_i = require_column(rows[0], "smiles");
  std::size_t prov_i = require_column(rows[0], "provenance");
  std::vector<RepeatUnit> out;
  for (std::size_t r = 1; r < rows.size(); ++r)
    out.push_back({cell(rows[r], name_i, r), cell(rows[r], smiles_i, r), cell(rows[r], prov_i, r)});
  return out;
}

const RepeatUnit& ReferenceData::repeat_unit(const std::string& name) const {
  for (const auto& u : repeat_units)
    if (u.name == name) return u;
  throw ConfigError("no repeat unit for polymer '" + name + "'");
}

ReferenceData load_reference_data(const std::filesystem::path& data_dir) {
  ReferenceData data;
  data.fi_records = load_fi_table(data_dir / "table1.csv");
  data.cone_records = load_cone_table(data_dir / "table2.csv");
  data.expert_labels = load_expert_labels(data_dir / "expert_labels.csv");
  data.repeat_units = load_repeat_units(data_dir / "repeat_units.csv");
  return data;
}

namespace {

bool contradicts(FiLabel label, RangeClass range) {
  switch (range) {
    case RangeClass::kLow: return label != FiLabel::kLow;
    case RangeClass::kMedium: return label != FiLabel::kMedium;
    case RangeClass::kHigh: return label != FiLabel::kHigh;
    case RangeClass::kUnclassified: return false;
  }
  return false;
}

}  // namespace

FilterOutcome expert_label_filter(const std::vector<PolymerRecord>& records,
                                  const std::vector<std::vector<double>>& features,
                                  const std::vector<ExpertLabel>& expert_labels,
                                  const Hyperparams& hp, LabelSource source,
                                  const LabelThresholds& thresholds) {
  if (features.size() != records.size())
    throw ConfigError("feature rows do not match records");

  std::map<std::string, FiLabel> expert;
  std::array<std::size_t, 3> per_class{};
  for (const auto& e : expert_labels) {
    if (!expert.emplace(e.name, e.label).second)
      throw ConfigError("duplicate expert label for '" + e.name + "'");
    ++per_class[static_cast<std::size_t>(e.label)];
  }
  for (std::size_t c = 0; c < per_class.size(); ++c)
    if (per_class[c] != kExpertLabelsPerClass)
      throw ConfigError("expected " + std::to_string(kExpertLabelsPerClass) +
                        " expert labels for class " +
                        std::string(to_string(static_cast<FiLabel>(c))) + ", got " +
                        std::to_string(per_class[c]));

  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto it = expert.find(records[i].name);
    if (it == expert.end()) continue;
    X.push_back(features[i]);
    y.push_back(static_cast<double>(it->second));
  }
  if (X.size() != expert.size()) {
    for (const auto& [name, label] : expert) {
      bool found = std::any_of(records.begin(), records.end(),
                               [&](const PolymerRecord& r) { return r.name == name; });
      if (!found) throw ConfigError("expert label names unknown polymer '" + name + "'");
    }
  }
  ForestModel classifier = fit_forest(X, y, Task::kClassification, hp);

  FilterOutcome out;
  std::size_t compared = 0, agreed = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PolymerRecord& rec = records[i];
    FiLabel label;
    std::optional<FiLabel> predicted;
    if (auto it = expert.find(rec.name); it != expert.end()) {
      label = it->second;
    } else {
      predicted = static_cast<FiLabel>(classifier.predict_class(features[i]).label);
      if (rec.label) {
        ++compared;
        if (*rec.label == *predicted) ++agreed;
      }
      label = (source == LabelSource::kPublishedThenPredicted && rec.label) ? *rec.label
                                                                             : *predicted;
    }
    out.effective_labels.push_back(label);
    out.predicted_labels.push_back(predicted);
    if (contradicts(label, range_label(rec.fi, thresholds)))
      out.removed.push_back(rec);
    else
      out.kept.push_back(rec);
  }
  if (compared) out.classifier_agreement = static_cast<double>(agreed) / compared;
  return out;
}

std::vector<std::vector<double>> record_features(const ReferenceData& data,
                                                 const std::vector<PolymerRecord>& records,
                                                 const DescriptorCatalog& catalog) {
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records)
    rows.push_back(descriptors_from_smiles(data.repeat_unit(r.name).smiles, catalog).values);
  return rows;
}

FeatureTable real_table(const ReferenceData& data, Target target,
                        const DescriptorCatalog& catalog,
                        const std::vector<PolymerRecord>& fi_records) {
  FeatureTable table;
  table.column_names = catalog.names();
  std::string target_name(to_string(target));
  table.column_names.push_back(target_name);
  table.target_column = target_name;
  table.catalog_id = catalog.catalog_id;
  table.provenance = Provenance::kReal;

  auto add = [&](const std::string& name, double value) {
    auto row = descriptors_from_smiles(data.repeat_unit(name).smiles, catalog).values;
    row.push_back(value);
    table.rows.push_back(std::move(row));
    table.row_names.push_back(name);
  };
  if (target == Target::kFI) {
    for (const auto& r : fi_records) add(r.name, r.fi);
  } else {
    for (const auto& r : data.cone_records) add(r.name, r.value(target));
  }
  table.validate();
  return table;
}

namespace {

struct Split {
  std::vector<std::size_t> features;  // column indices
  std::size_t target = 0;
};

Split split_of(const FeatureTable& table) {
  if (!table.target_column) throw ConfigError("table has no target column");
  return {table.feature_indices(), table.column_index(*table.target_column)};
}

void require_synthetic(const FeatureTable& table) {
  if (table.provenance != Provenance::kSynthetic)
    throw ConfigError("training rows must be synthetic");
}

Hyperparams seeded(Hyperparams hp, std::uint64_t seed, std::size_t n) {
  hp.seed = derive_seed(seed, Stream::kSweepPoint, n);
  return hp;
}

FeatureTable synthetic_train(const CopulaModel& copula, std::size_t n, std::uint64_t seed) {
  FeatureTable synth = sample_copula(copula, n, derive_seed(seed, Stream::kSynthTrain, n));
  require_synthetic(synth);
  return synth;
}

double real_score(const ForestModel& model, const FeatureTable& real,
                  const std::vector<std::size_t>& cols, std::size_t target) {
  auto X = real.matrix(cols);
  auto pred = model.predict(X);
  return r2_score(real.column(target), pred);
}

// Trains on a prepared synthetic set; column indices refer to both tables,
// which share a column layout.
FinalResult train_on(const FeatureTable& real, const FeatureTable& synth,
                     const std::string& family, std::size_t n_synth,
                     std::optional<std::size_t> top_k, const Hyperparams& hp,
                     std::uint64_t seed) {
  Split s = split_of(real);
  std::vector<double> y = synth.column(s.target);
  Hyperparams fit_hp = seeded(hp, seed, n_synth);

  std::vector<std::size_t> cols = s.features;
  std::optional<ForestModel> full;
  if (top_k && *top_k < cols.size()) {
    if (*top_k == 0) throw ConfigError("top_k must be positive");
    full = fit_forest(synth.matrix(cols), y, Task::kRegression, fit_hp);
    auto order = rank_by_importance(full->importance);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < *top_k; ++i) chosen.push_back(cols[order[i]]);
    cols = std::move(chosen);
    full.reset();
  }
  auto X = synth.matrix(cols);
  ForestModel forest = fit_forest(X, y, Task::kRegression, fit_hp);

  FinalResult out;
  out.model.target = *real.target_column;
  for (std::size_t c : cols) out.model.features.push_back(real.column_names[c]);
  out.model.target_min = *std::min_element(y.begin(), y.end());
  out.model.target_max = *std::max_element(y.begin(), y.end());
  out.model.n_synthetic = n_synth;
  out.model.top_k = (top_k && *top_k < s.features.size()) ? top_k : std::nullopt;
  out.model.seed = seed;

  out.report.target = out.model.target;
  out.report.descriptor_family = family;
  out.report.r2_train_synth = r2_score(y, forest.predict(X));
  out.report.r2_test_real = real_score(forest, real, cols, s.target);
  out.report.n_synthetic = n_synth;
  out.report.top_k = out.model.top_k;
  out.report.seed = seed;
  out.model.forest = std::move(forest);
  return out;
}

}  // namespace

std::vector<std::size_t> rank_by_importance(const std::vector<double>& importance) {
  std::vector<std::size_t> order(importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
  return order;
}

SweepResult synth_size_sweep(const FeatureTable& real, const std::vector<std::size_t>& sizes,
                             const Hyperparams& hp, std::uint64_t seed) {
  if (sizes.empty()) throw ConfigError("size sweep needs at least one size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ConfigError("synthetic sizes must be positive");
    if (i && sizes[i] <= sizes[i - 1]) throw ConfigError("synthetic sizes must be ascending");
  }
  Split s = split_of(real);
  CopulaModel copula = fit_copula(real);
  SweepResult out;
  out.axis = SweepResult::Axis::kSyntheticSize;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n : sizes) {
    FeatureTable synth = synthetic_train(copula, n, seed);
    ForestModel model = fit_forest(synth.matrix(s.features), synth.column(s.target),
                                   Task::kRegression, seeded(hp, seed, n));
    double score = real_score(model, real, s.features, s.target);
    out.points.emplace_back(n, score);
    if (score > best) {
      best = score;
      out.best = n;
    }
  }
  return out;
}

SweepResult top_k_sweep(const FeatureTable& real, std::size_t n_synth,
                        const std::vector<std::size_t>& k_values, const Hyperparams& hp,
                        std::uint64_t seed) {
  if (k_values.empty()) throw ConfigError("top-k sweep needs at least one k");
  Split s = split_of(real);
  for (std::size_t k : k_values)
    if (k == 0 || k > s.features.size())
      throw ConfigError("k = " + std::to_string(k) + " outside 1.." +
                        std::to_string(s.features.size()));
  CopulaModel copula = fit_copula(real);
  FeatureTable synth = synthetic_train(copula, n_synth, seed);
  std::vector<double> y = synth.column(s.target);
  Hyperparams fit_hp = seeded(hp, seed, n_synth);
  ForestModel full = fit_forest(synth.matrix(s.features), y, Task::kRegression, fit_hp);
  auto order = rank_by_importance(full.importance);

  SweepResult out;
  out.axis = SweepResult::Axis::kTopK;
  for (std::size_t i : order) out.ranking.push_back(real.column_names[s.features[i]]);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k : k_values) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < k; ++i) cols.push_back(s.features[order[i]]);
    const ForestModel* model = &full;
    ForestModel subset;
    if (k < s.features.size()) {
      subset = fit_forest(synth.matrix(cols), y, Task::kRegression, fit_hp);
      model = &subset;
    } else {
      cols = s.features;
    }
    double score = real_score(*model, real, cols, s.target);
    out.points.emplace_back(k, score);
    if (score > best || (score == best && k < out.best)) {
      best = score;
      out.best = k;
    }
  }
  return out;
}

FinalResult train_final(const FeatureTable& real, const std::string& descriptor_family,
                        std::size_t n_synth, std::optional<std::size_t> top_k,
                        const Hyperparams& hp, std::uint64_t seed) {
  if (n_synth == 0) throw ConfigError("synthetic size must be positive");
  CopulaModel copula = fit_copula(real);
  FeatureTable synth = synthetic_train(copula, n_synth, seed);
  return train_on(real, synth, descriptor_family, n_synth, top_k, hp, seed);
}

std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat) {
  return derive_seed(seed, Stream::kRepeat, repeat);
}

EvaluationReport repeated_eval(const FeatureTable& real, const std::string& descriptor_family,
                               std::size_t n_synth, std::optional<std::size_t> top_k,
                               const Hyperparams& hp, std::size_t n_repeats, std::uint64_t seed,
                               std::optional<std::size_t> n_test) {
  if (n_repeats == 0) throw ConfigError("repeats must be positive");
  if (n_synth == 0) throw ConfigError("synthetic size must be positive");
  std::size_t test_n = n_test.value_or(n_synth);
  if (test_n == 0) throw ConfigError("test size must be positive");
  Split s = split_of(real);
  CopulaModel copula = fit_copula(real);

  EvaluationReport mean;
  double train = 0, test_real = 0, test_synth = 0;
  for (std::size_t r = 0; r < n_repeats; ++r) {
    std::uint64_t rs = repeat_seed(seed, r);
    FeatureTable synth = synthetic_train(copula, n_synth, rs);
    FinalResult fr = train_on(real, synth, descriptor_family, n_synth, top_k, hp, rs);
    FeatureTable test = sample_copula(copula, test_n, derive_seed(rs, Stream::kSynthTest, test_n));
    std::vector<std::size_t> cols;
    for (const auto& f : fr.model.features) cols.push_back(test.column_index(f));
    double ts = r2_score(test.column(s.target), fr.model.forest.predict(test.matrix(cols)));
    train += fr.report.r2_train_synth;
    test_real += fr.report.r2_test_real;
    test_synth += ts;
    if (r == 0) mean = fr.report;
  }
  double n = static_cast<double>(n_repeats);
  mean.r2_train_synth = train / n;
  mean.r2_test_real = test_real / n;
  mean.r2_test_synth = test_synth / n;
  mean.seed = seed;
  mean.repeats = n_repeats;
  return mean;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  csv::write_row(out, {sweep.axis == SweepResult::Axis::kSyntheticSize ? "n_synthetic" : "top_k",
                       "r2_test_real"});
  for (const auto& [v, score] : sweep.points)
    csv::write_row(out, {std::to_string(v), csv::format_double(score)});
  return out.str();
}

std::string reports_csv(const std::vector<EvaluationReport>& reports) {
  std::ostringstream out;
  csv::write_row(out, {"target", "descriptor_family", "r2_train_synth", "r2_test_real",
                       "r2_test_synth", "n_synthetic", "top_k", "seed", "repeats"});
  for (const auto& r : reports)
    csv::write_row(out, {r.target, r.descriptor_family, csv::format_double(r.r2_train_synth),
                         csv::format_double(r.r2_test_real),
                         r.r2_test_synth ? csv::format_double(*r.r2_test_synth) : "",
                         std::to_string(r.n_synthetic),
                         r.top_k ? std::to_string(*r.top_k) : "all", std::to_string(r.seed),
                         std::to_string(r.repeats)});
  return out.str();
}

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment orchestration: expert-label outlier filtering, synthetic-size
// and top-k descriptor sweeps, final model training, and repeated
// synthetic train/test evaluation. Models are only ever fitted on synthetic
// rows; real rows are used for scoring.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flampred/copula.hpp"
#include "flampred/dataset.hpp"
#include "flampred/descriptors.hpp"
#include "flampred/forest.hpp"

namespace flampred {

struct ExpertLabel {
  std::string name;
  FiLabel label;
};

struct RepeatUnit {
  std::string name;
  std::string smiles;
  std::string provenance;
};

inline constexpr std::size_t kExpertLabelsPerClass = 5;

std::vector<ExpertLabel> load_expert_labels(const std::filesystem::path& path);
std::vector<RepeatUnit> load_repeat_units(const std::filesystem::path& path);

// Everything read from a data directory.
struct ReferenceData {
  std::vector<PolymerRecord> fi_records;
  std::vector<ConeRecord> cone_records;
  std::vector<ExpertLabel> expert_labels;
  std::vector<RepeatUnit> repeat_units;

  // Throws ConfigError when the polymer has no repeat unit.
  const RepeatUnit& repeat_unit(const std::string& name) const;
};

ReferenceData load_reference_data(const std::filesystem::path& data_dir);

// How labels of non-expert records are resolved.
enum class LabelSource {
  kPublishedThenPredicted,  // a record's own label if present, else the classifier's
  kPredictedOnly,           // always the classifier's
};

struct FilterOutcome {
  std::vector<PolymerRecord> kept;
  std::vector<PolymerRecord> removed;
  // Per input record: the label the decision used, and the classifier's
  // prediction (absent for expert-labelled records).
  std::vector<FiLabel> effective_labels;
  std::vector<std::optional<FiLabel>> predicted_labels;
  // Share of non-expert records with a published label on which the
  // classifier agrees; nullopt when there are none.
  std::optional<double> classifier_agreement;
};

// Fits a random forest classifier on the expert-labelled records' feature
// rows, predicts the remaining records, and removes every record whose label
// names a different class than the range its FI falls in. Records whose FI is
// in no range are kept. `features` is aligned with `records`.
// Throws ConfigError unless each class has exactly kExpertLabelsPerClass
// expert labels, all naming known records.
FilterOutcome expert_label_filter(const std::vector<PolymerRecord>& records,
                                  const std::vector<std::vector<double>>& features,
                                  const std::vector<ExpertLabel>& expert_labels,
                                  const Hyperparams& hp,
                                  LabelSource source = LabelSource::kPublishedThenPredicted,
                                  const LabelThresholds& thresholds = {});

// Descriptor rows of each record's repeat unit.
std::vector<std::vector<double>> record_features(const ReferenceData& data,
                                                 const std::vector<PolymerRecord>& records,
                                                 const DescriptorCatalog& catalog);

// Descriptors + target column for one target. FI uses `fi_records` (normally
// the filter's kept set); cone targets use the cone table.
FeatureTable real_table(const ReferenceData& data, Target target, const DescriptorCatalog& catalog,
                        const std::vector<PolymerRecord>& fi_records);

struct EvaluationReport {
  std::string target;
  std::string descriptor_family;
  double r2_train_synth = 0;
  double r2_test_real = 0;
  std::optional<double> r2_test_synth;
  std::size_t n_synthetic = 0;
  std::optional<std::size_t> top_k;  // nullopt: all descriptors
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
};

struct SweepResult {
  enum class Axis { kSyntheticSize, kTopK };
  Axis axis = Axis::kSyntheticSize;
  std::vector<std::pair<std::size_t, double>> points;  // (value, real-data R2)
  std::size_t best = 0;
  std::vector<std::string> ranking;  // top-k only: features, most important first
};

// A forest for one target with the feature subset it consumes.
struct TargetModel {
  std::string target;
  std::vector<std::string> features;
  ForestModel forest;
  double target_min = 0;  // range of the synthetic training targets
  double target_max = 0;
  std::size_t n_synthetic = 0;
  std::optional<std::size_t> top_k;
  std::uint64_t seed = 0;
};

// Seeds: the synthetic set of size n is sampled with
// derive_seed(seed, kSynthTrain, n) and forests fitted on it use
// derive_seed(seed, kSweepPoint, n), so sweeps and train_final agree on
// shared points. hp.seed is ignored.

// Fits the copula once on `real`, then for each size trains on n synthetic
// rows and scores on all real rows. Sizes must be non-empty and ascending.
SweepResult synth_size_sweep(const FeatureTable& real, const std::vector<std::size_t>& sizes,
                             const Hyperparams& hp, std::uint64_t seed);

// Ranks features by importance of a forest trained on all of them over
// n_synth synthetic rows, then retrains on each top-k subset.
SweepResult top_k_sweep(const FeatureTable& real, std::size_t n_synth,
                        const std::vector<std::size_t>& k_values, const Hyperparams& hp,
                        std::uint64_t seed);

struct FinalResult {
  TargetModel model;
  EvaluationReport report;
};

FinalResult train_final(const FeatureTable& real, const std::string& descriptor_family,
                        std::size_t n_synth, std::optional<std::size_t> top_k,
                        const Hyperparams& hp, std::uint64_t seed);

// Seed of repeat r inside repeated_eval.
std::uint64_t repeat_seed(std::uint64_t seed, std::size_t repeat);

// Per repeat: train_final with repeat_seed(seed, r), plus a synthetic test
// set of n_test rows (default n_synth) sampled from a disjoint stream.
// Reports arithmetic means over repeats.
EvaluationReport repeated_eval(const FeatureTable& real, const std::string& descriptor_family,
                               std::size_t n_synth, std::optional<std::size_t> top_k,
                               const Hyperparams& hp, std::size_t n_repeats, std::uint64_t seed,
                               std::optional<std::size_t> n_test = std::nullopt);

// Indices of features ordered by decreasing importance, ties by index.
std::vector<std::size_t> rank_by_importance(const std::vector<double>& importance);

std::string sweep_csv(const SweepResult& sweep);
std::string reports_csv(const std::vector<EvaluationReport>& reports);

}  // namespace flampred

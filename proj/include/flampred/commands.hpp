// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration and the command-line verbs. Verbs are library
// functions so tests can run them in-process.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flampred/bundle.hpp"
#include "flampred/forest.hpp"
#include "flampred/pipeline.hpp"

namespace flampred {

// JSON document; every key is optional. Relative data_dir is resolved
// against the config file's directory.
//
//   {
//     "data_dir": "../data",
//     "catalog": "CHEM-1",
//     "targets": ["FI", "TIG", "pHRR", "TSR", "FIGRA"],
//     "seed": 42,
//     "sizes": [1000, 2000],
//     "k_values": [5, 10, 20],
//     "hyperparams": {"n_trees": 100, "max_depth": null, ...},
//     "grid": "default" | [ {hyperparams}, ... ],
//     "cv_folds": 5,
//     "cv_rows": 500,
//     "repeats": 10,
//     "test_size": null,
//     "classifier": {hyperparams},
//     "label_source": "published" | "predicted"
//   }
struct ExperimentConfig {
  std::filesystem::path data_dir;
  std::string catalog_id = "CHEM-1";
  std::vector<Target> targets{kAllTargets.begin(), kAllTargets.end()};
  std::uint64_t seed = 42;
  std::vector<std::size_t> sizes;     // default 1000..10000 step 1000
  std::vector<std::size_t> k_values;  // default 1..catalog size
  Hyperparams hyperparams;
  std::vector<Hyperparams> grid;  // empty: no hyperparameter search
  std::size_t cv_folds = 5;
  std::size_t cv_rows = 0;  // 0: all synthetic rows
  std::size_t repeats = 10;
  std::optional<std::size_t> test_size;
  Hyperparams classifier;
  LabelSource label_source = LabelSource::kPublishedThenPredicted;
};

// Defaults with data_dir set to the built-in data directory.
ExperimentConfig default_config();
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Seed owned by one target within an experiment.
std::uint64_t target_seed(std::uint64_t seed, Target target);

FilterOutcome run_filter(const ExperimentConfig& config, const ReferenceData& data);

struct TargetSweeps {
  std::string target;
  SweepResult size;
  SweepResult top_k;
};

std::vector<TargetSweeps> run_sweeps(const ExperimentConfig& config, const ReferenceData& data,
                                     std::ostream* log = nullptr);

// Sweeps, optional CV search on the selected subset, then train_final per
// target.
TrainedBundle train_bundle(const ExperimentConfig& config, const ReferenceData& data,
                           std::ostream* log = nullptr);

// repeated_eval for every model in the bundle with config.repeats.
std::vector<EvaluationReport> evaluate_bundle(const ExperimentConfig& config,
                                              const TrainedBundle& bundle,
                                              const ReferenceData& data,
                                              std::ostream* log = nullptr);

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitInternal = 2 };

// Full command line including argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Trained model bundle: one forest per target plus the metadata needed to
// reproduce it, saved as a single versioned JSON document.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flampred/pipeline.hpp"

namespace flampred {

inline constexpr int kBundleFormatVersion = 1;

struct TrainedBundle {
  int format_version = kBundleFormatVersion;
  std::string catalog_id = "CHEM-1";
  std::string created_at;  // ISO-8601 UTC
  std::uint64_t seed = 0;
  std::vector<TargetModel> models;
  std::vector<EvaluationReport> reports;  // aligned with models
  std::vector<std::string> fi_reference;  // FI records retained by the filter
  nlohmann::json extra = nlohmann::json::object();  // curves, filter summary, config

  // Throws ConfigError when the target has no model.
  const TargetModel& model(const std::string& target) const;
};

// SOURCE_DATE_EPOCH when set, else the current time.
std::string timestamp_now();

nlohmann::json bundle_to_json(const TrainedBundle& bundle);
TrainedBundle bundle_from_json(const nlohmann::json& j);

// Writes through a temporary file and renames it into place.
void save_bundle(const TrainedBundle& bundle, const std::filesystem::path& path);
// Throws BundleError on unreadable, truncated, malformed or newer-format files.
TrainedBundle load_bundle(const std::filesystem::path& path);

struct StructureInput {
  enum class Kind { kSmiles, kPdb };
  Kind kind = Kind::kSmiles;
  std::string text;
};

struct TargetPrediction {
  std::string target;
  double value = 0;
  bool within_training_range = true;
};

struct FlammabilityPrediction {
  std::string catalog_id;
  std::vector<std::string> descriptor_names;
  std::vector<double> descriptors;
  std::size_t wildcard_count = 0;
  std::vector<TargetPrediction> predictions;  // bundle model order
};

// Parses the structure, computes the bundle's descriptor catalog and runs
// every model. ParseError/DomainError propagate unchanged.
FlammabilityPrediction predict_all(const TrainedBundle& bundle, const StructureInput& input);

nlohmann::json prediction_to_json(const FlammabilityPrediction& prediction);

// Measured values of one metric across the reference polymers: FI over the
// records the bundle retained, cone metrics over the cone table.
struct ReferenceDistribution {
  std::string metric;
  std::vector<std::string> names;
  std::vector<double> values;
};

ReferenceDistribution database_comparison(const TrainedBundle& bundle, const ReferenceData& data,
                                          const std::string& metric);

}  // namespace flampred

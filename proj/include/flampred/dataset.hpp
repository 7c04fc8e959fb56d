// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Experimental records (flammability index table, cone calorimetry table),
// the derived quantities computed from them, and the generic numeric feature
// table that every downstream stage consumes.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flampred {

enum class FiLabel { kLow, kMedium, kHigh };
enum class RangeClass { kLow, kMedium, kHigh, kUnclassified };

std::string_view to_string(FiLabel label);
std::optional<FiLabel> parse_fi_label(std::string_view text);
std::string_view to_string(RangeClass range);

// Prediction targets, in the order the platform reports them.
enum class Target { kFI, kTIG, kPHRR, kTSR, kFIGRA };
inline constexpr std::array<Target, 5> kAllTargets = {Target::kFI, Target::kTIG, Target::kPHRR,
                                                      Target::kTSR, Target::kFIGRA};
std::string_view to_string(Target target);
Target parse_target(std::string_view text);

struct PolymerRecord {
  std::string name;
  double mol_wt = 0;           // g/mol
  double cp_molar = 0;         // J/(mol K)
  double t_ignition = 0;       // K
  double heat_combustion = 0;  // J/g
  double fi = 0;
  std::optional<FiLabel> label;
};

// tsr is stored in the units the measurements were reported in.
struct ConeRecord {
  std::string name;
  double tig = 0;    // s
  double phrr = 0;   // kW/m^2
  double tsr = 0;
  double figra = 0;  // kW/(m^2 s)

  double value(Target target) const;
};

struct Interval {
  double lo = 0;
  double hi = 0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Closed FI ranges per class. Values outside all three, including the gaps
// between them, are unclassified.
struct LabelThresholds {
  Interval low{0.0203, 0.0376};
  Interval medium{0.0382, 0.041};
  Interval high{0.0418, 0.1652};
};

// FI = (cp_molar / mol_wt) * t_ignition / heat_combustion. Throws DomainError
// naming the first non-positive argument.
double compute_fi(double cp_molar, double mol_wt, double t_ignition, double heat_combustion);

// Fire growth rate: peak heat release rate over time to peak.
double compute_figra(double phrr, double t_peak);

RangeClass range_label(double fi, const LabelThresholds& thresholds = {});

// Published FI values are given to four decimals and some are truncated
// rather than rounded.
inline constexpr double kFiConsistencyTolerance = 1e-4;

std::vector<PolymerRecord> load_fi_table(const std::filesystem::path& path);
std::vector<ConeRecord> load_cone_table(const std::filesystem::path& path);

enum class Provenance { kReal, kSynthetic };

// Rectangular numeric table. `column_names` covers every column including the
// target, which is identified by name rather than stored separately.
struct FeatureTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> rows;
  std::string catalog_id;
  std::optional<std::string> target_column;
  std::vector<std::string> row_names;  // empty or one per row
  Provenance provenance = Provenance::kReal;

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return column_names.size(); }

  // Throws std::out_of_range if absent.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::size_t index) const;

  std::vector<std::size_t> feature_indices() const;
  std::vector<std::string> feature_names() const;
  std::vector<double> target_values() const;

  // Rows restricted to the given column indices, in that order.
  std::vector<std::vector<double>> matrix(const std::vector<std::size_t>& columns) const;

  // Throws LoadError on ragged rows or non-finite values.
  void validate() const;
};

// First column named "name" (case-insensitive) is taken as row names; every
// other column must be numeric and finite.
FeatureTable load_feature_table(const std::filesystem::path& path,
                                std::optional<std::string> target_column = std::nullopt);

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path);
std::string feature_table_csv(const FeatureTable& table);

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Gaussian copula over empirical marginals. Every column of the input table,
// target included, is modelled jointly so sampled rows carry consistent
// synthetic targets.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flampred/dataset.hpp"

namespace flampred {

// Empirical CDF with midpoint plotting positions: the i-th order statistic
// (1-based) sits at (i - 0.5) / n, tied values share their average position,
// and values in between are linearly interpolated.
struct MarginalModel {
  enum class Kind { kEmpiricalCdf, kDegenerate };

  std::string column;
  Kind kind = Kind::kEmpiricalCdf;
  std::vector<double> sorted_values;
  double observed_min = 0;
  double observed_max = 0;

  double cdf(double x) const;
  // Inverse of cdf on its increasing pieces; constant on ties. Result lies in
  // [observed_min, observed_max].
  double quantile(double u) const;
  double normal_score(double x) const;
};

struct CopulaModel {
  std::vector<MarginalModel> marginals;
  std::vector<std::vector<double>> correlation;  // normal-score space, PSD-repaired
  std::size_t fit_row_count = 0;
  std::string catalog_id;
  std::optional<std::string> target_column;

  std::vector<std::string> column_names() const;
};

// Eigenvalue floor used when projecting the correlation onto the PSD cone.
inline constexpr double kEigenFloor = 1e-10;

// Throws FitError on fewer than 3 rows or non-finite values.
CopulaModel fit_copula(const FeatureTable& table);

// Draws n rows with a generator seeded from derive_seed(seed, Stream::kCopula).
// Identical (model, n, seed) give bit-identical tables. The result is marked
// Provenance::kSynthetic.
FeatureTable sample_copula(const CopulaModel& model, std::size_t n, std::uint64_t seed);

// Pearson correlation of the table's columns after mapping each through the
// model's marginal normal_score.
std::vector<std::vector<double>> normal_score_correlation(const CopulaModel& model,
                                                          const FeatureTable& table);

// Lower-triangular factor L with L L^T = correlation. Falls back to
// V sqrt(max(lambda, 0)) if the Cholesky factorization fails numerically.
std::vector<std::vector<double>> correlation_factor(const std::vector<std::vector<double>>& corr);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const std::vector<std::vector<double>>& matrix);

}  // namespace flampred

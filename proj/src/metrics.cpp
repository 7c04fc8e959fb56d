// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/metrics.hpp"

#include <stdexcept>

#include "flampred/error.hpp"

namespace flampred {

double r2_score(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.empty() || y_true.size() != y_pred.size())
    throw std::invalid_argument("r2_score needs equal, non-zero lengths");
  double mean = 0;
  for (double y : y_true) mean += y;
  mean /= static_cast<double>(y_true.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    const double d = y_true[i] - mean;
    ss_res += r * r;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) throw UndefinedScoreError("R2 undefined: observed values have zero variance");
  return 1.0 - ss_res / ss_tot;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty() || y_true.size() != y_pred.size())
    throw std::invalid_argument("accuracy needs equal, non-zero lengths");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

}  // namespace flampred

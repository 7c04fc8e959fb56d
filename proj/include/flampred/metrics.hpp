// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace flampred {

// Coefficient of determination, 1 - SS_res / SS_tot.
// Throws std::invalid_argument on empty or mismatched inputs and
// UndefinedScoreError when y_true has zero variance.
double r2_score(std::span<const double> y_true, std::span<const double> y_pred);

// Fraction of exact matches.
double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// JSON forms of models. Doubles are written with round-trip precision, so a
// load after save reproduces every value bit for bit.

#pragma once

#include <json.hpp>

#include "flampred/copula.hpp"
#include "flampred/forest.hpp"

namespace flampred {

inline constexpr int kCopulaFormatVersion = 1;

void to_json(nlohmann::json& j, const Hyperparams& hp);
void from_json(const nlohmann::json& j, Hyperparams& hp);

void to_json(nlohmann::json& j, const ForestModel& model);
void from_json(const nlohmann::json& j, ForestModel& model);

void to_json(nlohmann::json& j, const CopulaModel& model);
void from_json(const nlohmann::json& j, CopulaModel& model);

}  // namespace flampred

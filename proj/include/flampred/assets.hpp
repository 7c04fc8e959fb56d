// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// Versioned reference data shipped in data/: a manifest of files with row
// counts and SHA-256 checksums, and integrity checks over their content.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace flampred {

inline constexpr int kManifestVersion = 1;
inline constexpr std::size_t kFiTableRows = 32;
inline constexpr std::size_t kConeTableRows = 15;

struct AssetCheck {
  std::string name;
  bool ok = false;
  std::string message;
};

struct AssetReport {
  std::vector<AssetCheck> checks;

  bool ok() const;
  // Names of failed checks, comma separated.
  std::string failures() const;
};

std::string sha256_hex(std::string_view bytes);
std::string read_bytes(const std::filesystem::path& path);

// Standard base64 with padding; whitespace is ignored. Throws ConfigError on
// malformed input.
std::string base64_decode(std::string_view text);
std::string base64_encode(std::string_view bytes);

// Manifest describing the current contents of data_dir.
nlohmann::json build_manifest(const std::filesystem::path& data_dir);
nlohmann::json catalog_manifest(const std::string& catalog_id);

// Every check runs; failures are collected rather than thrown.
AssetReport verify_assets(const std::filesystem::path& data_dir);

}  // namespace flampred

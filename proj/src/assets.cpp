// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/assets.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "flampred/csv.hpp"
#include "flampred/dataset.hpp"
#include "flampred/descriptors.hpp"
#include "flampred/error.hpp"
#include "flampred/pipeline.hpp"
#include "flampred/smiles.hpp"

namespace flampred {

bool AssetReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AssetCheck& c) { return c.ok; });
}

std::string AssetReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.ok) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr))
    throw Error("digest_error", "SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string base64_decode(std::string_view text) {
  std::string clean;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  if (clean.size() % 4 != 0) throw ConfigError("base64 length is not a multiple of 4");
  for (std::size_t i = 0; i < clean.size(); ++i) {
    char c = clean[i];
    bool body = std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/';
    bool pad = c == '=' && i + 2 >= clean.size() && (i + 1 == clean.size() || clean[i + 1] == '=');
    if (!body && !pad) throw ConfigError("invalid base64 character at offset " + std::to_string(i));
  }
  std::string out(clean.size() / 4 * 3, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(clean.data()),
                          static_cast<int>(clean.size()));
  if (n < 0) throw ConfigError("invalid base64");
  std::size_t padding = 0;
  for (auto it = clean.rbegin(); it != clean.rend() && *it == '='; ++it) ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out((bytes.size() + 2) / 3 * 4 + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

namespace {

struct AssetFile {
  const char* file;
  const char* source;
};

constexpr AssetFile kFiles[] = {
    {"table1.csv", "published flammability index table, 32 polymers"},
    {"table2.csv", "published cone calorimetry measurements, 15 polymers, 50 kW/m2"},
    {"expert_labels.csv", "expert L/M/H assignments, 5 per class"},
    {"repeat_units.csv", "repeat-unit SMILES, curated"},
    {"catalog_chem1.json", "descriptor catalog CHEM-1"},
};

std::size_t data_rows(const std::filesystem::path& path) {
  if (path.extension() != ".csv") return 0;
  auto rows = csv::read_file(path);
  return rows.empty() ? 0 : rows.size() - 1;
}

}  // namespace

nlohmann::json catalog_manifest(const std::string& catalog_id) {
  const DescriptorCatalog& catalog = catalog_by_id(catalog_id);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : catalog.entries)
    entries.push_back({{"name", e.name}, {"definition", e.definition}});
  return {{"catalog_id", catalog.catalog_id}, {"version", 1}, {"descriptors", entries}};
}

nlohmann::json build_manifest(const std::filesystem::path& data_dir) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : kFiles) {
    auto path = data_dir / f.file;
    nlohmann::json entry = {{"file", f.file},
                            {"source", f.source},
                            {"sha256", sha256_hex(read_bytes(path))}};
    if (path.extension() == ".csv") entry["rows"] = data_rows(path);
    files.push_back(entry);
  }
  return {{"format", "flampred-assets"}, {"version", kManifestVersion}, {"files", files}};
}

AssetReport verify_assets(const std::filesystem::path& data_dir) {
  AssetReport report;
  auto check = [&](const std::string& name, auto&& fn) {
    AssetCheck c{name, false, ""};
    try {
      c.message = fn();
      c.ok = c.message.empty();
    } catch (const std::exception& e) {
      c.message = e.what();
    }
    if (c.ok) c.message = "ok";
    report.checks.push_back(std::move(c));
  };

  nlohmann::json manifest;
  check("manifest", [&]() -> std::string {
    manifest = nlohmann::json::parse(read_bytes(data_dir / "manifest.json"));
    if (manifest.value("format", "") != "flampred-assets") return "unexpected format";
    if (manifest.value("version", 0) != kManifestVersion)
      return "unsupported manifest version " + manifest.value("version", nlohmann::json()).dump();
    return "";
  });

  for (const auto& f : kFiles) {
    std::string file = f.file;
    check("checksum:" + file, [&]() -> std::string {
      if (!manifest.is_object()) return "no manifest";
      const auto& files = manifest.at("files");
      auto it = std::find_if(files.begin(), files.end(),
                             [&](const nlohmann::json& e) { return e.value("file", "") == file; });
      if (it == files.end()) return "not listed in manifest";
      std::string actual = sha256_hex(read_bytes(data_dir / file));
      if (actual != it->value("sha256", "")) return "checksum mismatch";
      if (it->contains("rows") && it->at("rows").get<std::size_t>() != data_rows(data_dir / file))
        return "row count mismatch";
      return "";
    });
  }

  std::vector<PolymerRecord> fi;
  check("fi_table", [&]() -> std::string {
    fi = load_fi_table(data_dir / "table1.csv");  // also checks FI consistency
    if (fi.size() != kFiTableRows)
      return "expected " + std::to_string(kFiTableRows) + " rows, got " + std::to_string(fi.size());
    return "";
  });

  std::vector<ConeRecord> cone;
  check("cone_table", [&]() -> std::string {
    cone = load_cone_table(data_dir / "table2.csv");
    if (cone.size() != kConeTableRows)
      return "expected " + std::to_string(kConeTableRows) + " rows, got " +
             std::to_string(cone.size());
    return "";
  });

  check("expert_labels", [&]() -> std::string {
    auto labels = load_expert_labels(data_dir / "expert_labels.csv");
    std::array<std::size_t, 3> per_class{};
    std::set<std::string> seen;
    for (const auto& e : labels) {
      if (!seen.insert(e.name).second) return "duplicate '" + e.name + "'";
      bool known = std::any_of(fi.begin(), fi.end(),
                               [&](const PolymerRecord& r) { return r.name == e.name; });
      if (!known) return "unknown polymer '" + e.name + "'";
      ++per_class[static_cast<std::size_t>(e.label)];
    }
    for (std::size_t c = 0; c < 3; ++c)
      if (per_class[c] != kExpertLabelsPerClass)
        return std::string(to_string(static_cast<FiLabel>(c))) + " has " +
               std::to_string(per_class[c]) + " labels";
    return "";
  });

  check("repeat_units", [&]() -> std::string {
    auto units = load_repeat_units(data_dir / "repeat_units.csv");
    std::set<std::string> names;
    for (const auto& u : units) {
      parse_smiles(u.smiles);
      names.insert(u.name);
    }
    std::vector<std::string> missing;
    for (const auto& r : fi)
      if (!names.count(r.name)) missing.push_back(r.name);
    for (const auto& r : cone)
      if (!names.count(r.name)) missing.push_back(r.name);
    if (missing.empty()) return "";
    std::string msg = "missing SMILES for";
    for (const auto& m : missing) msg += " '" + m + "'";
    return msg;
  });

  check("catalog", [&]() -> std::string {
    auto stored = nlohmann::json::parse(read_bytes(data_dir / "catalog_chem1.json"));
    if (stored != catalog_manifest("CHEM-1")) return "catalog manifest differs from CHEM-1";
    return "";
  });
  return report;
}

}  // namespace flampred

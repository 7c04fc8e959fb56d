// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "flampred/assets.hpp"
#include "flampred/error.hpp"
#include "test_util.hpp"

using namespace flampred;
using flampred::testing::kDataDir;
using flampred::testing::read_file;
using flampred::testing::TempDir;
using flampred::testing::write_file;

namespace {

void copy_data(const TempDir& dir) {
  std::filesystem::copy(kDataDir, dir.path(), std::filesystem::copy_options::recursive);
}

bool failed(const AssetReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return !c.ok;
  ADD_FAILURE() << "no check named " << name;
  return false;
}

void rewrite_manifest(const TempDir& dir) {
  write_file(dir / "manifest.json", build_manifest(dir.path()).dump(2) + "\n");
}

// Replaces the first occurrence of `from` in a data file.
void edit(const TempDir& dir, const std::string& file, const std::string& from, const std::string& to) {
  std::string text = read_file(dir / file);
  auto pos = text.find(from);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, from.size(), to);
  write_file(dir / file, text);
}

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode(""), "");
  EXPECT_EQ(base64_encode("f"), "Zg==");
  EXPECT_EQ(base64_encode("fo"), "Zm8=");
  EXPECT_EQ(base64_encode("foobar"), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9v\nYmE="), "fooba");
}

TEST(Base64, RoundTripRandomBytes) {
  std::mt19937_64 gen(5);
  for (std::size_t len = 0; len < 64; ++len) {
    std::string bytes(len, '\0');
    for (auto& c : bytes) c = static_cast<char>(gen() & 0xff);
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
  }
}

TEST(Base64, MalformedIsConfigError) {
  EXPECT_THROW(base64_decode("Zm9"), ConfigError);
  EXPECT_THROW(base64_decode("Zm9v!!=="), ConfigError);
}

TEST(Assets, ShippedDataPasses) {
  AssetReport r = verify_assets(kDataDir);
  EXPECT_TRUE(r.ok()) << r.failures();
  EXPECT_EQ(r.failures(), "");
}

TEST(Assets, ManifestMatchesShippedFiles) {
  auto stored = nlohmann::json::parse(read_file(kDataDir / "manifest.json"));
  EXPECT_EQ(stored, build_manifest(kDataDir));
}

TEST(Assets, TruncatedFiTableFails) {
  TempDir dir;
  copy_data(dir);
  std::string text = read_file(dir / "table1.csv");
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  write_file(dir / "table1.csv", text);
  AssetReport r = verify_assets(dir.path());
  EXPECT_TRUE(failed(r, "checksum:table1.csv"));
  EXPECT_TRUE(failed(r, "fi_table"));

  rewrite_manifest(dir);
  r = verify_assets(dir.path());
  EXPECT_FALSE(failed(r, "checksum:table1.csv"));
  EXPECT_TRUE(failed(r, "fi_table"));
}

TEST(Assets, InconsistentFiFails) {
  TempDir dir;
  copy_data(dir);
  edit(dir, "table1.csv", ",0.0353,", ",0.0453,");
  rewrite_manifest(dir);
  AssetReport r = verify_assets(dir.path());
  EXPECT_TRUE(failed(r, "fi_table"));
  EXPECT_FALSE(failed(r, "cone_table"));
}

TEST(Assets, MissingRepeatUnitFails) {
  TempDir dir;
  copy_data(dir);
  edit(dir, "repeat_units.csv", "Poly(n-butyl acrylate)", "Poly(renamed)");
  rewrite_manifest(dir);
  AssetReport r = verify_assets(dir.path());
  EXPECT_TRUE(failed(r, "repeat_units"));
  EXPECT_NE(r.failures().find("repeat_units"), std::string::npos);
}

TEST(Assets, ExpertLabelImbalanceFails) {
  TempDir dir;
  copy_data(dir);
  edit(dir, "expert_labels.csv", "Polypropylene,L", "Polypropylene,M");
  rewrite_manifest(dir);
  EXPECT_TRUE(failed(verify_assets(dir.path()), "expert_labels"));
}

TEST(Assets, UnsupportedManifestVersionFails) {
  TempDir dir;
  copy_data(dir);
  auto m = nlohmann::json::parse(read_file(dir / "manifest.json"));
  m["version"] = kManifestVersion + 1;
  write_file(dir / "manifest.json", m.dump());
  AssetReport r = verify_assets(dir.path());
  EXPECT_TRUE(failed(r, "manifest"));
  EXPECT_FALSE(failed(r, "fi_table"));
}

TEST(Assets, EditedCatalogFails) {
  TempDir dir;
  copy_data(dir);
  auto c = nlohmann::json::parse(read_file(dir / "catalog_chem1.json"));
  c["descriptors"].erase(c["descriptors"].begin());
  write_file(dir / "catalog_chem1.json", c.dump());
  AssetReport r = verify_assets(dir.path());
  EXPECT_TRUE(failed(r, "catalog"));
  EXPECT_TRUE(failed(r, "checksum:catalog_chem1.json"));
}

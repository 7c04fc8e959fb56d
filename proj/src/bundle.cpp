// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/bundle.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "flampred/assets.hpp"
#include "flampred/descriptors.hpp"
#include "flampred/error.hpp"
#include "flampred/pdb.hpp"
#include "flampred/serialize.hpp"
#include "flampred/smiles.hpp"

namespace flampred {

namespace {

nlohmann::json optional_size(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<std::size_t> read_optional_size(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::size_t>();
}

nlohmann::json report_json(const EvaluationReport& r) {
  return {{"target", r.target},
          {"descriptor_family", r.descriptor_family},
          {"r2_train_synth", r.r2_train_synth},
          {"r2_test_real", r.r2_test_real},
          {"r2_test_synth", r.r2_test_synth ? nlohmann::json(*r.r2_test_synth) : nullptr},
          {"n_synthetic", r.n_synthetic},
          {"top_k", optional_size(r.top_k)},
          {"seed", r.seed},
          {"repeats", r.repeats}};
}

EvaluationReport report_from(const nlohmann::json& j) {
  EvaluationReport r;
  r.target = j.at("target").get<std::string>();
  r.descriptor_family = j.at("descriptor_family").get<std::string>();
  r.r2_train_synth = j.at("r2_train_synth").get<double>();
  r.r2_test_real = j.at("r2_test_real").get<double>();
  if (!j.at("r2_test_synth").is_null()) r.r2_test_synth = j.at("r2_test_synth").get<double>();
  r.n_synthetic = j.at("n_synthetic").get<std::size_t>();
  r.top_k = read_optional_size(j.at("top_k"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.repeats = j.at("repeats").get<std::size_t>();
  return r;
}

nlohmann::json model_json(const TargetModel& m) {
  return {{"target", m.target},
          {"features", m.features},
          {"forest", m.forest},
          {"target_min", m.target_min},
          {"target_max", m.target_max},
          {"n_synthetic", m.n_synthetic},
          {"top_k", optional_size(m.top_k)},
          {"seed", m.seed}};
}

TargetModel model_from(const nlohmann::json& j) {
  TargetModel m;
  m.target = j.at("target").get<std::string>();
  m.features = j.at("features").get<std::vector<std::string>>();
  m.forest = j.at("forest").get<ForestModel>();
  m.target_min = j.at("target_min").get<double>();
  m.target_max = j.at("target_max").get<double>();
  m.n_synthetic = j.at("n_synthetic").get<std::size_t>();
  m.top_k = read_optional_size(j.at("top_k"));
  m.seed = j.at("seed").get<std::uint64_t>();
  if (m.forest.feature_count != m.features.size())
    throw BundleError("model for " + m.target + " expects " +
                      std::to_string(m.forest.feature_count) + " features but lists " +
                      std::to_string(m.features.size()));
  return m;
}

}  // namespace

const TargetModel& TrainedBundle::model(const std::string& target) const {
  for (const auto& m : models)
    if (m.target == target) return m;
  throw ConfigError("bundle has no model for target '" + target + "'");
}

std::string timestamp_now() {
  std::time_t t;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env)
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  else
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json bundle_to_json(const TrainedBundle& bundle) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : bundle.models) models.push_back(model_json(m));
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : bundle.reports) reports.push_back(report_json(r));
  return {{"format", "flampred-bundle"},
          {"format_version", bundle.format_version},
          {"catalog_id", bundle.catalog_id},
          {"created_at", bundle.created_at},
          {"seed", bundle.seed},
          {"models", models},
          {"reports", reports},
          {"fi_reference", bundle.fi_reference},
          {"extra", bundle.extra}};
}

TrainedBundle bundle_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "flampred-bundle") throw BundleError("not a flampred bundle");
    int version = j.at("format_version").get<int>();
    if (version > kBundleFormatVersion || version < 1)
      throw BundleError("unsupported bundle format version " + std::to_string(version));
    TrainedBundle b;
    b.format_version = version;
    b.catalog_id = j.at("catalog_id").get<std::string>();
    catalog_by_id(b.catalog_id);
    b.created_at = j.at("created_at").get<std::string>();
    b.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& m : j.at("models")) b.models.push_back(model_from(m));
    for (const auto& r : j.at("reports")) b.reports.push_back(report_from(r));
    b.fi_reference = j.at("fi_reference").get<std::vector<std::string>>();
    b.extra = j.value("extra", nlohmann::json::object());
    return b;
  } catch (const BundleError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw BundleError(std::string("malformed bundle: ") + e.what());
  } catch (const Error& e) {
    throw BundleError(std::string("malformed bundle: ") + e.what());
  }
}

void save_bundle(const TrainedBundle& bundle, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError("cannot write " + tmp.string());
    out << bundle_to_json(bundle).dump() << '\n';
    if (!out) throw BundleError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TrainedBundle load_bundle(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_bytes(path);
  } catch (const LoadError& e) {
    throw BundleError(e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw BundleError("truncated or malformed bundle " + path.string() + ": " + e.what());
  }
  return bundle_from_json(j);
}

FlammabilityPrediction predict_all(const TrainedBundle& bundle, const StructureInput& input) {
  MolGraph graph = input.kind == StructureInput::Kind::kSmiles ? parse_smiles(input.text)
                                                                : parse_pdb(input.text);
  StripResult stripped = strip_wildcards(graph);
  const DescriptorCatalog& catalog = catalog_by_id(bundle.catalog_id);
  FeatureVector fv = compute_descriptors(stripped.graph, catalog);

  FlammabilityPrediction out;
  out.catalog_id = catalog.catalog_id;
  out.descriptor_names = catalog.names();
  out.descriptors = fv.values;
  out.wildcard_count = stripped.wildcard_count;
  for (const auto& m : bundle.models) {
    std::vector<double> x;
    x.reserve(m.features.size());
    for (const auto& f : m.features) {
      auto it = std::find(out.descriptor_names.begin(), out.descriptor_names.end(), f);
      if (it == out.descriptor_names.end())
        throw BundleError("model feature '" + f + "' not in catalog " + catalog.catalog_id);
      x.push_back(fv.values[static_cast<std::size_t>(it - out.descriptor_names.begin())]);
    }
    double v = m.forest.predict(x);
    out.predictions.push_back({m.target, v, v >= m.target_min && v <= m.target_max});
  }
  return out;
}

nlohmann::json prediction_to_json(const FlammabilityPrediction& p) {
  nlohmann::json predictions = nlohmann::json::object();
  for (const auto& t : p.predictions)
    predictions[t.target] = {{"value", t.value},
                             {"within_training_range", t.within_training_range}};
  nlohmann::json descriptors = nlohmann::json::object();
  for (std::size_t i = 0; i < p.descriptors.size(); ++i)
    descriptors[p.descriptor_names[i]] = p.descriptors[i];
  return {{"catalog_id", p.catalog_id},
          {"predictions", predictions},
          {"descriptors", descriptors},
          {"wildcard_count", p.wildcard_count}};
}

ReferenceDistribution database_comparison(const TrainedBundle& bundle, const ReferenceData& data,
                                          const std::string& metric) {
  Target target = parse_target(metric);
  ReferenceDistribution out;
  out.metric = std::string(to_string(target));
  if (target == Target::kFI) {
    for (const auto& name : bundle.fi_reference) {
      auto it = std::find_if(data.fi_records.begin(), data.fi_records.end(),
                             [&](const PolymerRecord& r) { return r.name == name; });
      if (it == data.fi_records.end())
        throw ConfigError("bundle references unknown polymer '" + name + "'");
      out.names.push_back(it->name);
      out.values.push_back(it->fi);
    }
  } else {
    for (const auto& r : data.cone_records) {
      out.names.push_back(r.name);
      out.values.push_back(r.value(target));
    }
  }
  return out;
}

}  // namespace flampred

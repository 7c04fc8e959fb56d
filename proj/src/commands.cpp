// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flampred/assets.hpp"
#include "flampred/copula.hpp"
#include "flampred/csv.hpp"
#include "flampred/descriptors.hpp"
#include "flampred/error.hpp"
#include "flampred/random.hpp"
#include "flampred/serialize.hpp"
#include "flampred/service.hpp"

#ifndef FLAMPRED_DEFAULT_DATA_DIR
#define FLAMPRED_DEFAULT_DATA_DIR "data"
#endif

namespace flampred {

namespace {

std::vector<std::size_t> range_values(std::size_t lo, std::size_t hi, std::size_t step) {
  std::vector<std::size_t> v;
  for (std::size_t x = lo; x <= hi; x += step) v.push_back(x);
  return v;
}

Hyperparams classifier_defaults() {
  Hyperparams hp;
  hp.max_features = MaxFeatures::sqrt();
  return hp;
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  if (const char* env = std::getenv("FLAMPRED_DATA_DIR"); env && *env)
    c.data_dir = env;
  else
    c.data_dir = FLAMPRED_DEFAULT_DATA_DIR;
  c.sizes = range_values(1000, 10000, 1000);
  c.k_values = range_values(1, catalog_by_id(c.catalog_id).size(), 1);
  c.classifier = classifier_defaults();
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  static const std::vector<std::string> kKeys = {
      "data_dir", "catalog", "targets", "seed",       "sizes",      "k_values",    "hyperparams",
      "grid",     "cv_folds", "cv_rows", "repeats",   "test_size",  "classifier",  "label_source"};
  for (const auto& [key, value] : j.items())
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError("unknown configuration key '" + key + "'");

  ExperimentConfig c = default_config();
  try {
    if (j.contains("data_dir")) {
      std::filesystem::path p = j["data_dir"].get<std::string>();
      c.data_dir = p.is_absolute() ? p : base_dir / p;
    }
    if (j.contains("catalog")) {
      c.catalog_id = j["catalog"].get<std::string>();
      c.k_values = range_values(1, catalog_by_id(c.catalog_id).size(), 1);
    }
    if (j.contains("targets")) {
      c.targets.clear();
      for (const auto& t : j["targets"]) c.targets.push_back(parse_target(t.get<std::string>()));
      if (c.targets.empty()) throw ConfigError("targets must not be empty");
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("k_values")) c.k_values = j["k_values"].get<std::vector<std::size_t>>();
    if (j.contains("hyperparams")) c.hyperparams = j["hyperparams"].get<Hyperparams>();
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      if (g.is_string()) {
        if (g.get<std::string>() != "default") throw ConfigError("grid must be \"default\" or a list");
        c.grid = default_grid(Task::kRegression);
      } else {
        c.grid = g.get<std::vector<Hyperparams>>();
      }
    }
    if (j.contains("cv_folds")) c.cv_folds = j["cv_folds"].get<std::size_t>();
    if (j.contains("cv_rows")) c.cv_rows = j["cv_rows"].get<std::size_t>();
    if (j.contains("repeats")) c.repeats = j["repeats"].get<std::size_t>();
    if (j.contains("test_size") && !j["test_size"].is_null())
      c.test_size = j["test_size"].get<std::size_t>();
    if (j.contains("classifier")) c.classifier = j["classifier"].get<Hyperparams>();
    if (j.contains("label_source")) {
      auto s = j["label_source"].get<std::string>();
      if (s == "published")
        c.label_source = LabelSource::kPublishedThenPredicted;
      else if (s == "predicted")
        c.label_source = LabelSource::kPredictedOnly;
      else
        throw ConfigError("label_source must be \"published\" or \"predicted\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  if (c.cv_folds < 2) throw ConfigError("cv_folds must be at least 2");
  if (c.repeats < 1) throw ConfigError("repeats must be at least 1");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_bytes(path);
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("configuration " + path.string() + " is not valid JSON");
  return config_from_json(j, path.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json targets = nlohmann::json::array();
  for (Target t : c.targets) targets.push_back(std::string(to_string(t)));
  return {{"data_dir", c.data_dir.string()},
          {"catalog", c.catalog_id},
          {"targets", targets},
          {"seed", c.seed},
          {"sizes", c.sizes},
          {"k_values", c.k_values},
          {"hyperparams", c.hyperparams},
          {"grid", c.grid},
          {"cv_folds", c.cv_folds},
          {"cv_rows", c.cv_rows},
          {"repeats", c.repeats},
          {"test_size", c.test_size ? nlohmann::json(*c.test_size) : nlohmann::json(nullptr)},
          {"classifier", c.classifier},
          {"label_source",
           c.label_source == LabelSource::kPredictedOnly ? "predicted" : "published"}};
}

std::uint64_t target_seed(std::uint64_t seed, Target target) {
  return derive_seed(seed, Stream::kTarget, static_cast<std::uint64_t>(target));
}

FilterOutcome run_filter(const ExperimentConfig& config, const ReferenceData& data) {
  const DescriptorCatalog& catalog = catalog_by_id(config.catalog_id);
  Hyperparams hp = config.classifier;
  hp.seed = derive_seed(config.seed, Stream::kClassifier);
  return expert_label_filter(data.fi_records, record_features(data, data.fi_records, catalog),
                             data.expert_labels, hp, config.label_source);
}

namespace {

void log_line(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n' << std::flush;
}

struct TargetPlan {
  Target target;
  FeatureTable real;
  std::uint64_t seed;
  SweepResult size;
  SweepResult top_k;
};

std::vector<TargetPlan> plan_targets(const ExperimentConfig& config, const ReferenceData& data,
                                     std::ostream* log) {
  const DescriptorCatalog& catalog = catalog_by_id(config.catalog_id);
  FilterOutcome filter = run_filter(config, data);
  log_line(log, "filter: kept " + std::to_string(filter.kept.size()) + ", removed " +
                    std::to_string(filter.removed.size()));
  std::vector<TargetPlan> plans;
  for (Target t : config.targets) {
    TargetPlan p{t, real_table(data, t, catalog, filter.kept), target_seed(config.seed, t), {}, {}};
    p.size = synth_size_sweep(p.real, config.sizes, config.hyperparams, p.seed);
    log_line(log, std::string(to_string(t)) + ": best n_synthetic " + std::to_string(p.size.best));
    p.top_k = top_k_sweep(p.real, p.size.best, config.k_values, config.hyperparams, p.seed);
    log_line(log, std::string(to_string(t)) + ": best top_k " + std::to_string(p.top_k.best));
    plans.push_back(std::move(p));
  }
  return plans;
}

nlohmann::json sweep_json(const SweepResult& s) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& [v, r2] : s.points) points.push_back({v, r2});
  nlohmann::json j = {{"points", points}, {"best", s.best}};
  if (!s.ranking.empty()) j["ranking"] = s.ranking;
  return j;
}

}  // namespace

std::vector<TargetSweeps> run_sweeps(const ExperimentConfig& config, const ReferenceData& data,
                                     std::ostream* log) {
  std::vector<TargetSweeps> out;
  for (auto& p : plan_targets(config, data, log))
    out.push_back({std::string(to_string(p.target)), std::move(p.size), std::move(p.top_k)});
  return out;
}

TrainedBundle train_bundle(const ExperimentConfig& config, const ReferenceData& data,
                           std::ostream* log) {
  TrainedBundle bundle;
  bundle.catalog_id = config.catalog_id;
  bundle.created_at = timestamp_now();
  bundle.seed = config.seed;

  FilterOutcome filter = run_filter(config, data);
  for (const auto& r : filter.kept) bundle.fi_reference.push_back(r.name);
  nlohmann::json removed = nlohmann::json::array();
  for (const auto& r : filter.removed) removed.push_back(r.name);
  bundle.extra["filter"] = {{"kept", filter.kept.size()}, {"removed", removed}};
  nlohmann::json cfg = config_to_json(config);
  cfg.erase("data_dir");
  bundle.extra["config"] = cfg;

  for (auto& p : plan_targets(config, data, log)) {
    std::string name(to_string(p.target));
    std::size_t n_features = p.real.feature_indices().size();
    std::optional<std::size_t> top_k;
    if (p.top_k.best < n_features) top_k = p.top_k.best;

    Hyperparams hp = config.hyperparams;
    nlohmann::json cv_json;
    if (!config.grid.empty()) {
      CopulaModel copula = fit_copula(p.real);
      FeatureTable synth =
          sample_copula(copula, p.size.best, derive_seed(p.seed, Stream::kSynthTrain, p.size.best));
      std::vector<std::size_t> cols;
      for (std::size_t i = 0; i < p.top_k.best; ++i)
        cols.push_back(synth.column_index(p.top_k.ranking[i]));
      auto X = synth.matrix(cols);
      auto y = synth.column(synth.column_index(*p.real.target_column));
      if (config.cv_rows && config.cv_rows < X.size()) {
        X.resize(config.cv_rows);
        y.resize(config.cv_rows);
      }
      CvResult cv = cross_validate(X, y, Task::kRegression, config.grid, config.cv_folds,
                                   derive_seed(p.seed, Stream::kCvShuffle));
      hp = cv.best;
      cv_json = {{"best_index", cv.best_index}, {"mean_scores", cv.mean_scores}};
      log_line(log, name + ": cv selected " + describe(hp));
    }

    FinalResult final = train_final(p.real, config.catalog_id, p.size.best, top_k, hp, p.seed);
    log_line(log, name + ": r2 train " + csv::format_double(final.report.r2_train_synth) +
                      ", real " + csv::format_double(final.report.r2_test_real));
    nlohmann::json extra = {{"size_sweep", sweep_json(p.size)}, {"top_k_sweep", sweep_json(p.top_k)}};
    if (!cv_json.is_null()) extra["cv"] = cv_json;
    bundle.extra["targets"][name] = extra;
    bundle.models.push_back(std::move(final.model));
    bundle.reports.push_back(final.report);
  }
  return bundle;
}

std::vector<EvaluationReport> evaluate_bundle(const ExperimentConfig& config,
                                              const TrainedBundle& bundle,
                                              const ReferenceData& data, std::ostream* log) {
  const DescriptorCatalog& catalog = catalog_by_id(bundle.catalog_id);
  std::vector<PolymerRecord> kept;
  for (const auto& name : bundle.fi_reference)
    for (const auto& r : data.fi_records)
      if (r.name == name) kept.push_back(r);
  std::vector<EvaluationReport> reports;
  for (const auto& m : bundle.models) {
    Target t = parse_target(m.target);
    FeatureTable real = real_table(data, t, catalog, kept);
    Hyperparams hp = m.forest.hyperparams;
    EvaluationReport r = repeated_eval(real, bundle.catalog_id, m.n_synthetic, m.top_k, hp,
                                       config.repeats, m.seed, config.test_size);
    log_line(log, m.target + ": mean r2 synthetic test " + csv::format_double(*r.r2_test_synth) +
                      ", real " + csv::format_double(r.r2_test_real));
    reports.push_back(r);
  }
  return reports;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

void emit(const std::string& output, const std::string& text, std::ostream& out) {
  if (output.empty() || output == "-")
    out << text;
  else
    write_text(output, text);
}

std::string filter_csv(const ReferenceData& data, const FilterOutcome& f) {
  std::ostringstream out;
  csv::write_row(out, {"name", "fi", "fi_range", "label", "predicted", "status"});
  for (std::size_t i = 0; i < data.fi_records.size(); ++i) {
    const auto& r = data.fi_records[i];
    bool kept = std::any_of(f.kept.begin(), f.kept.end(),
                            [&](const PolymerRecord& k) { return k.name == r.name; });
    csv::write_row(out, {r.name, csv::format_double(r.fi), std::string(to_string(range_label(r.fi))),
                         std::string(to_string(f.effective_labels[i])),
                         f.predicted_labels[i] ? std::string(to_string(*f.predicted_labels[i])) : "",
                         kept ? "kept" : "removed"});
  }
  return out.str();
}

void write_sweeps(const std::filesystem::path& dir, const std::string& target,
                  const SweepResult& size, const SweepResult& top_k) {
  write_text(dir / ("sweep_size_" + target + ".csv"), sweep_csv(size));
  write_text(dir / ("sweep_topk_" + target + ".csv"), sweep_csv(top_k));
  std::ostringstream ranking;
  csv::write_row(ranking, {"rank", "descriptor"});
  for (std::size_t i = 0; i < top_k.ranking.size(); ++i)
    csv::write_row(ranking, {std::to_string(i + 1), top_k.ranking[i]});
  write_text(dir / ("ranking_" + target + ".csv"), ranking.str());
}

std::string bundle_default() {
  const char* env = std::getenv("FLAMPRED_BUNDLE");
  return env ? env : "";
}

struct Common {
  std::string config;
  std::string data;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* cmd, bool with_seed = true) {
    cmd->add_option("--config", config, "experiment configuration (JSON)");
    cmd->add_option("--data", data, "data directory (overrides the configuration)");
    if (with_seed) cmd->add_option("--seed", seed, "master seed (overrides the configuration)");
  }

  ExperimentConfig load() const {
    ExperimentConfig c = config.empty() ? default_config() : load_config(config);
    if (!data.empty()) c.data_dir = data;
    if (seed) c.seed = *seed;
    return c;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polymer flammability prediction from repeat-unit structure"};
  app.name(args.empty() ? "flampred" : args[0]);
  app.require_subcommand(1);

  Common common;
  std::string bundle_path = bundle_default();
  std::string output, out_dir, smiles, pdb, input, target = "FI", host = "127.0.0.1";
  std::string catalog_id = "CHEM-1";
  std::size_t n = 1000;
  int port = 8080;
  bool write_manifest = false;

  auto* ingest = app.add_subcommand("ingest", "validate shipped reference data");
  ingest->add_option("--data", common.data, "data directory");
  ingest->add_option("--config", common.config, "experiment configuration (JSON)");
  ingest->add_flag("--write-manifest", write_manifest, "regenerate manifest.json and catalog file");

  auto* descriptors = app.add_subcommand("descriptors", "compute descriptors for SMILES");
  descriptors->add_option("--smiles", smiles, "one SMILES string");
  descriptors->add_option("--input", input, "CSV with name,smiles columns");
  descriptors->add_option("--catalog", catalog_id, "descriptor catalog");
  descriptors->add_option("--output,-o", output, "output CSV (default stdout)");

  auto* synth = app.add_subcommand("synth", "fit a copula on a real table and sample from it");
  common.add(synth);
  synth->add_option("--target", target, "FI, TIG, pHRR, TSR or FIGRA");
  synth->add_option("--n", n, "rows to sample");
  synth->add_option("--output,-o", output, "output CSV (default stdout)");

  auto* train = app.add_subcommand("train", "run sweeps and train the final models");
  common.add(train);
  train->add_option("--bundle", bundle_path, "bundle to write");
  train->add_option("--out-dir", out_dir, "directory for report and curve CSVs");

  auto* sweep = app.add_subcommand("sweep", "write synthetic-size and top-k curves");
  common.add(sweep);
  sweep->add_option("--out-dir", out_dir, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "repeated synthetic train/test evaluation");
  common.add(eval, false);
  eval->add_option("--bundle", bundle_path, "trained bundle");
  eval->add_option("--output,-o", output, "output CSV (default stdout)");

  auto* predict = app.add_subcommand("predict", "predict all metrics for one structure");
  predict->add_option("--bundle", bundle_path, "trained bundle");
  predict->add_option("--smiles", smiles, "repeat-unit SMILES");
  predict->add_option("--pdb", pdb, "PDB file");

  auto* serve_cmd = app.add_subcommand("serve", "start the HTTP service");
  common.add(serve_cmd, false);
  serve_cmd->add_option("--bundle", bundle_path, "trained bundle");
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "bind address");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("flampred");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  auto need_bundle = [&]() {
    if (bundle_path.empty()) throw ConfigError("no bundle given (--bundle or FLAMPRED_BUNDLE)");
  };

  try {
    if (ingest->parsed()) {
      ExperimentConfig c = common.load();
      if (write_manifest) {
        write_text(c.data_dir / "catalog_chem1.json", catalog_manifest("CHEM-1").dump(2) + "\n");
        write_text(c.data_dir / "manifest.json", build_manifest(c.data_dir).dump(2) + "\n");
      }
      AssetReport report = verify_assets(c.data_dir);
      for (const auto& check : report.checks)
        out << (check.ok ? "PASS " : "FAIL ") << check.name << ": " << check.message << '\n';
      if (!report.ok()) {
        err << "asset verification failed: " << report.failures() << '\n';
        return kExitValidation;
      }
      ReferenceData data = load_reference_data(c.data_dir);
      FilterOutcome f = run_filter(c, data);
      out << "filter: kept " << f.kept.size() << ", removed " << f.removed.size() << '\n';
      return kExitOk;
    }
    if (descriptors->parsed()) {
      const DescriptorCatalog& catalog = catalog_by_id(catalog_id);
      if (smiles.empty() == input.empty())
        throw ConfigError("give exactly one of --smiles or --input");
      std::vector<std::pair<std::string, std::string>> items;
      if (!smiles.empty()) {
        items.emplace_back(smiles, smiles);
      } else {
        auto rows = csv::read_file(input);
        if (rows.empty()) throw LoadError("empty input " + input);
        auto name_it = std::find(rows[0].begin(), rows[0].end(), "name");
        auto smiles_it = std::find(rows[0].begin(), rows[0].end(), "smiles");
        if (smiles_it == rows[0].end()) throw LoadError("missing column 'smiles'");
        std::size_t si = static_cast<std::size_t>(smiles_it - rows[0].begin());
        std::size_t ni = name_it == rows[0].end() ? si : static_cast<std::size_t>(name_it - rows[0].begin());
        for (std::size_t r = 1; r < rows.size(); ++r) {
          if (rows[r].size() <= std::max(si, ni)) throw LoadError("short row", r);
          items.emplace_back(rows[r][ni], rows[r][si]);
        }
      }
      FeatureTable table;
      table.column_names = catalog.names();
      table.catalog_id = catalog.catalog_id;
      for (const auto& [name, s] : items) {
        table.row_names.push_back(name);
        table.rows.push_back(descriptors_from_smiles(s, catalog).values);
      }
      emit(output, feature_table_csv(table), out);
      return kExitOk;
    }
    if (synth->parsed()) {
      ExperimentConfig c = common.load();
      ReferenceData data = load_reference_data(c.data_dir);
      FilterOutcome f = run_filter(c, data);
      FeatureTable real = real_table(data, parse_target(target), catalog_by_id(c.catalog_id), f.kept);
      FeatureTable sample = sample_copula(fit_copula(real), n, c.seed);
      emit(output, feature_table_csv(sample), out);
      return kExitOk;
    }
    if (train->parsed()) {
      need_bundle();
      ExperimentConfig c = common.load();
      ReferenceData data = load_reference_data(c.data_dir);
      TrainedBundle bundle = train_bundle(c, data, &err);
      save_bundle(bundle, bundle_path);
      if (!out_dir.empty()) {
        std::filesystem::path dir = out_dir;
        write_text(dir / "train_report.csv", reports_csv(bundle.reports));
        write_text(dir / "filter.csv", filter_csv(data, run_filter(c, data)));
        for (const auto& [name, t] : bundle.extra["targets"].items()) {
          SweepResult size, topk;
          size.axis = SweepResult::Axis::kSyntheticSize;
          topk.axis = SweepResult::Axis::kTopK;
          for (const auto& pt : t["size_sweep"]["points"])
            size.points.emplace_back(pt[0].get<std::size_t>(), pt[1].get<double>());
          for (const auto& pt : t["top_k_sweep"]["points"])
            topk.points.emplace_back(pt[0].get<std::size_t>(), pt[1].get<double>());
          topk.ranking = t["top_k_sweep"]["ranking"].get<std::vector<std::string>>();
          write_sweeps(dir, name, size, topk);
        }
      }
      out << "wrote " << bundle_path << '\n';
      return kExitOk;
    }
    if (sweep->parsed()) {
      ExperimentConfig c = common.load();
      ReferenceData data = load_reference_data(c.data_dir);
      for (const auto& s : run_sweeps(c, data, &err)) write_sweeps(out_dir, s.target, s.size, s.top_k);
      return kExitOk;
    }
    if (eval->parsed()) {
      need_bundle();
      ExperimentConfig c = common.load();
      ReferenceData data = load_reference_data(c.data_dir);
      TrainedBundle bundle = load_bundle(bundle_path);
      emit(output, reports_csv(evaluate_bundle(c, bundle, data, &err)), out);
      return kExitOk;
    }
    if (predict->parsed()) {
      need_bundle();
      if (smiles.empty() == pdb.empty()) throw ConfigError("give exactly one of --smiles or --pdb");
      TrainedBundle bundle = load_bundle(bundle_path);
      StructureInput in = smiles.empty()
                              ? StructureInput{StructureInput::Kind::kPdb, read_bytes(pdb)}
                              : StructureInput{StructureInput::Kind::kSmiles, smiles};
      out << prediction_to_json(predict_all(bundle, in)).dump(2) << '\n';
      return kExitOk;
    }
    if (serve_cmd->parsed()) {
      need_bundle();
      ExperimentConfig c = common.load();
      PredictionService service(load_bundle(bundle_path), load_reference_data(c.data_dir));
      err << "listening on " << host << ':' << port << '\n' << std::flush;
      if (!serve(service, host, port)) throw ConfigError("cannot listen on port " + std::to_string(port));
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include "flampred/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "flampred/assets.hpp"
#include "flampred/error.hpp"
#include "flampred/serialize.hpp"

namespace flampred {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

ApiResponse from_exception(const std::exception& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    ApiResponse r = error_response(422, pe->code(), pe->what());
    r.body["error"][pe->unit() == ParseError::Unit::kOffset ? "offset" : "line"] = pe->position();
    return r;
  }
  if (const auto* de = dynamic_cast<const DomainError*>(&e))
    return error_response(422, de->code(), de->what());
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e))
    return error_response(400, ce->code(), ce->what());
  if (const auto* be = dynamic_cast<const BundleError*>(&e))
    return error_response(500, be->code(), be->what());
  return error_response(500, "internal_error", "internal error");
}

}  // namespace

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

PredictionService::PredictionService(TrainedBundle bundle, const ReferenceData& data)
    : bundle_(std::move(bundle)) {
  for (Target t : kAllTargets) {
    ReferenceDistribution d = database_comparison(bundle_, data, std::string(to_string(t)));
    databases_[lower(d.metric)] = {{"metric", d.metric}, {"names", d.names}, {"values", d.values}};
  }
}

ApiResponse PredictionService::predict(std::string_view body) const {
  nlohmann::json request = nlohmann::json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object())
    return error_response(400, "bad_request", "request body must be a JSON object");
  bool has_smiles = request.contains("smiles");
  bool has_pdb = request.contains("pdb_base64");
  if (has_smiles == has_pdb)
    return error_response(400, "bad_request", "provide exactly one of 'smiles' or 'pdb_base64'");
  const auto& field = has_smiles ? request["smiles"] : request["pdb_base64"];
  if (!field.is_string())
    return error_response(400, "bad_request", "structure field must be a string");
  try {
    StructureInput input;
    if (has_smiles) {
      input = {StructureInput::Kind::kSmiles, field.get<std::string>()};
    } else {
      input = {StructureInput::Kind::kPdb, base64_decode(field.get<std::string>())};
    }
    return {200, prediction_to_json(predict_all(bundle_, input))};
  } catch (const ConfigError& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const std::exception& e) {
    return from_exception(e);
  }
}

ApiResponse PredictionService::database(std::string_view metric) const {
  auto it = databases_.find(lower(metric));
  if (it == databases_.end())
    return error_response(404, "unknown_metric",
                          "unknown metric '" + std::string(metric) +
                              "'; expected one of FI, TIG, pHRR, TSR, FIGRA");
  return {200, it->second};
}

ApiResponse PredictionService::models() const {
  nlohmann::json models = nlohmann::json::array();
  for (std::size_t i = 0; i < bundle_.models.size(); ++i) {
    const TargetModel& m = bundle_.models[i];
    nlohmann::json entry = {{"target", m.target},
                            {"features", m.features},
                            {"n_synthetic", m.n_synthetic},
                            {"top_k", m.top_k ? nlohmann::json(*m.top_k) : nlohmann::json("all")},
                            {"seed", m.seed},
                            {"hyperparams", m.forest.hyperparams},
                            {"target_range", {m.target_min, m.target_max}}};
    if (i < bundle_.reports.size()) {
      entry["r2_train_synth"] = bundle_.reports[i].r2_train_synth;
      entry["r2_test_real"] = bundle_.reports[i].r2_test_real;
    }
    models.push_back(entry);
  }
  return {200,
          {{"format_version", bundle_.format_version},
           {"catalog_id", bundle_.catalog_id},
           {"created_at", bundle_.created_at},
           {"seed", bundle_.seed},
           {"models", models}}};
}

ApiResponse PredictionService::health() const {
  return {200, {{"status", "ok"}, {"models", bundle_.models.size()}}};
}

void PredictionService::mount(httplib::Server& server) const {
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/predict", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, predict(req.body));
  });
  server.Get(R"(/database/([^/]+))",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, database(req.matches[1].str()));
             });
  server.Get("/models", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, models());
  });
  server.Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, health());
  });
  server.set_error_handler([reply](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404)
      reply(res, error_response(404, "not_found", "no route for " + req.method + " " + req.path));
    else
      reply(res, error_response(res.status, "http_error", "request failed"));
  });
  server.set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        reply(res, error_response(500, "internal_error", "internal error"));
      });
}

bool serve(const PredictionService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  return server.listen(host, port);
}

}  // namespace flampred

// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

// HTTP API over an immutable bundle and reference data. Handlers are plain
// functions returning status + JSON so they can be exercised without a socket.

#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "flampred/bundle.hpp"

namespace httplib {
class Server;
}

namespace flampred {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// {"error": {"code", "message"[, "offset" | "line"]}}
ApiResponse error_response(int status, const std::string& code, const std::string& message);

class PredictionService {
 public:
  PredictionService(TrainedBundle bundle, const ReferenceData& data);

  // Body: {"smiles": "..."} or {"pdb_base64": "..."}.
  ApiResponse predict(std::string_view body) const;
  ApiResponse database(std::string_view metric) const;
  ApiResponse models() const;
  ApiResponse health() const;

  // Registers every route, including JSON 404s for unknown paths.
  void mount(httplib::Server& server) const;

  const TrainedBundle& bundle() const { return bundle_; }

 private:
  TrainedBundle bundle_;
  std::map<std::string, nlohmann::json> databases_;  // lowercase metric -> body
};

// Blocks until the server stops. Returns false if the socket cannot be bound.
bool serve(const PredictionService& service, const std::string& host, int port);

}  // namespace flampred

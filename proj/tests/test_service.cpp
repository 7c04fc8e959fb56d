// Copyright 2026 The flampred Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <future>
#include <thread>

#include "bundle_fixture.hpp"
#include "flampred/assets.hpp"
#include "flampred/service.hpp"

using namespace flampred;
using namespace flampred::testing;

namespace {

const PredictionService& service() {
  static const PredictionService s(small_bundle(), reference_data());
  return s;
}

nlohmann::json smiles_body(const std::string& smiles) { return {{"smiles", smiles}}; }

void expect_error(const ApiResponse& r, int status, const std::string& code) {
  EXPECT_EQ(r.status, status) << r.body.dump();
  ASSERT_TRUE(r.body.contains("error")) << r.body.dump();
  EXPECT_EQ(r.body["error"]["code"], code);
  EXPECT_TRUE(r.body["error"]["message"].is_string());
}

// Server on an ephemeral local port, stopped on destruction.
class LiveServer {
 public:
  LiveServer() {
    service().mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Service, PredictSmiles) {
  ApiResponse r = service().predict(smiles_body("*C(c1ccccc1)C*").dump());
  ASSERT_EQ(r.status, 200) << r.body.dump();
  ASSERT_EQ(r.body["predictions"].size(), 5u);
  for (Target t : kAllTargets) {
    const auto& p = r.body["predictions"][std::string(to_string(t))];
    EXPECT_TRUE(p["value"].is_number_float());
    EXPECT_TRUE(p["within_training_range"].get<bool>());
  }
  EXPECT_EQ(r.body["wildcard_count"], 2);
  EXPECT_EQ(r.body["catalog_id"], "CHEM-1");
}

TEST(Service, PredictPdbBase64) {
  std::string pdb = read_file(kDataDir / "structures" / "ethylbenzene.pdb");
  ApiResponse r = service().predict(nlohmann::json{{"pdb_base64", base64_encode(pdb)}}.dump());
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["predictions"].size(), 5u);
}

TEST(Service, ParseErrorCarriesOffset) {
  ApiResponse r = service().predict(smiles_body("C1CC").dump());
  expect_error(r, 422, "parse_error");
  EXPECT_TRUE(r.body["error"]["offset"].is_number_unsigned());
  r = service().predict(smiles_body("CC(C").dump());
  expect_error(r, 422, "parse_error");
  EXPECT_EQ(r.body["error"]["offset"], 2);
}

TEST(Service, PdbParseErrorCarriesLine) {
  std::string pdb = "ATOM      1  C   UNK A   1       0.000   0.000\n";
  ApiResponse r = service().predict(nlohmann::json{{"pdb_base64", base64_encode(pdb)}}.dump());
  expect_error(r, 422, "parse_error");
  EXPECT_EQ(r.body["error"]["line"], 1);
}

TEST(Service, BadRequests) {
  expect_error(service().predict("not json"), 400, "bad_request");
  expect_error(service().predict("[1,2]"), 400, "bad_request");
  expect_error(service().predict("{}"), 400, "bad_request");
  expect_error(service().predict(R"({"smiles":"C","pdb_base64":"Qw=="})"), 400, "bad_request");
  expect_error(service().predict(R"({"smiles":42})"), 400, "bad_request");
  expect_error(service().predict(R"({"pdb_base64":"***"})"), 400, "bad_request");
}

TEST(Service, DatabaseCaseInsensitive) {
  ApiResponse fi = service().database("fi");
  ASSERT_EQ(fi.status, 200);
  EXPECT_EQ(fi.body["metric"], "FI");
  EXPECT_EQ(fi.body["values"].size(), 26u);
  EXPECT_EQ(fi.body["names"].size(), 26u);
  ApiResponse phrr = service().database("PHRR");
  ASSERT_EQ(phrr.status, 200);
  EXPECT_EQ(phrr.body["metric"], "pHRR");
  EXPECT_EQ(phrr.body["values"].size(), 15u);
  expect_error(service().database("LOI"), 404, "unknown_metric");
}

TEST(Service, ModelsAndHealth) {
  ApiResponse m = service().models();
  ASSERT_EQ(m.status, 200);
  EXPECT_EQ(m.body["models"].size(), 5u);
  EXPECT_EQ(m.body["format_version"], kBundleFormatVersion);
  for (const auto& e : m.body["models"]) {
    EXPECT_FALSE(e["features"].empty());
    EXPECT_EQ(e["target_range"].size(), 2u);
  }
  ApiResponse h = service().health();
  EXPECT_EQ(h.status, 200);
  EXPECT_EQ(h.body["status"], "ok");
}

TEST(Service, PredictLatencyUnder100ms) {
  std::string body = smiles_body("*CC(*)C(=O)OCC(C)C").dump();
  service().predict(body);
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 10; ++i) ASSERT_EQ(service().predict(body).status, 200);
  auto per_call = (std::chrono::steady_clock::now() - start) / 10;
  EXPECT_LT(std::chrono::duration_cast<std::chrono::milliseconds>(per_call).count(), 100);
}

TEST(ServiceHttp, EndpointsOverSocket) {
  LiveServer server;
  auto c = server.client();
  auto health = c.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Content-Type"), "application/json");

  auto pred = c.Post("/predict", smiles_body("*C(c1ccccc1)C*").dump(), "application/json");
  ASSERT_TRUE(pred);
  EXPECT_EQ(pred->status, 200);
  EXPECT_EQ(nlohmann::json::parse(pred->body)["predictions"].size(), 5u);

  auto db = c.Get("/database/TIG");
  ASSERT_TRUE(db);
  EXPECT_EQ(nlohmann::json::parse(db->body)["values"].size(), 15u);

  auto bad = c.Post("/predict", smiles_body("C1CC").dump(), "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 422);
  EXPECT_EQ(nlohmann::json::parse(bad->body)["error"]["code"], "parse_error");
}

TEST(ServiceHttp, UnknownRouteIsJson404) {
  LiveServer server;
  auto c = server.client();
  auto r = c.Get("/nope");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  auto body = nlohmann::json::parse(r->body);
  EXPECT_EQ(body["error"]["code"], "not_found");
  auto unknown = c.Get("/database/LOI");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(nlohmann::json::parse(unknown->body)["error"]["code"], "unknown_metric");
}

TEST(ServiceHttp, ConcurrentIdenticalRequestsAgree) {
  LiveServer server;
  std::string body = smiles_body("*CC(*)C(=O)OC").dump();
  std::vector<std::future<std::string>> calls;
  for (int i = 0; i < 8; ++i)
    calls.push_back(std::async(std::launch::async, [&] {
      auto c = server.client();
      auto r = c.Post("/predict", body, "application/json");
      return r ? r->body : std::string("no response");
    }));
  std::string first = calls[0].get();
  EXPECT_EQ(nlohmann::json::parse(first)["predictions"].size(), 5u);
  for (std::size_t i = 1; i < calls.size(); ++i) EXPECT_EQ(calls[i].get(), first);
}

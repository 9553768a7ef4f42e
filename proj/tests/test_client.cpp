#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include "helpers.hpp"
#include "mock_server.hpp"
#include "ndg/client.hpp"
#include "ndg/error.hpp"
#include "ndg/eval.hpp"

using namespace ndg;
using testing::MockServer;

namespace {

EvalConfig config_for(const MockServer& server) {
  setenv("NDG_TEST_KEY", "sekrit", 1);
  EvalConfig cfg;
  cfg.endpoint = server.endpoint();
  cfg.model = "mock";
  cfg.credential_env = "NDG_TEST_KEY";
  cfg.timeout_seconds = 5;
  cfg.retry.initial_backoff_ms = 1;
  cfg.retry.max_backoff_ms = 5;
  return cfg;
}

ErrorCode failure(const std::string& prompt, const EvalConfig& cfg) {
  try {
    query_model(prompt, cfg);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("echo round trip sends the prompt and credential") {
  MockServer server([](const std::string& body, int, httplib::Response& res) {
    auto j = nlohmann::json::parse(body);
    MockServer::reply(res, j["messages"][0]["content"].get<std::string>());
  });
  auto cfg = config_for(server);
  cfg.params = {{"temperature", 0}};
  auto r = query_model("Does E occur at t3?", cfg);
  CHECK(r.response == "Does E occur at t3?");
  CHECK(r.attempts == 1);
  CHECK(r.params["temperature"] == 0);
  CHECK(server.last_auth() == "Bearer sekrit");
}

TEST_CASE("500 three times, then success") {
  MockServer server([](const std::string&, int n, httplib::Response& res) {
    if (n <= 3) {
      res.status = 500;
      return;
    }
    MockServer::reply(res, "ok");
  });
  auto r = query_model("hi", config_for(server));
  CHECK(r.response == "ok");
  CHECK(r.attempts == 4);
  CHECK(server.requests() == 4);
}

TEST_CASE("retries run out") {
  MockServer server([](const std::string&, int, httplib::Response& res) { res.status = 503; });
  auto cfg = config_for(server);
  cfg.retry.max_attempts = 3;
  CHECK(failure("hi", cfg) == ErrorCode::kTransport);
  CHECK(server.requests() == 3);
}

TEST_CASE("auth and client errors are not retried") {
  MockServer server([](const std::string&, int n, httplib::Response& res) {
    res.status = n == 1 ? 401 : 400;
  });
  auto cfg = config_for(server);
  CHECK(failure("hi", cfg) == ErrorCode::kAuth);
  CHECK(failure("hi", cfg) == ErrorCode::kTransport);
  CHECK(server.requests() == 2);
}

TEST_CASE("missing credential fails before any request") {
  MockServer server([](const std::string&, int, httplib::Response& res) { MockServer::reply(res, "x"); });
  auto cfg = config_for(server);
  cfg.credential_env = "NDG_TEST_UNSET_KEY";
  unsetenv("NDG_TEST_UNSET_KEY");
  CHECK(failure("hi", cfg) == ErrorCode::kConfig);
  CHECK(server.requests() == 0);
}

TEST_CASE("bad endpoint and malformed bodies") {
  MockServer server([](const std::string&, int, httplib::Response& res) {
    res.set_content("{\"choices\": []}", "application/json");
  });
  auto cfg = config_for(server);
  CHECK(failure("hi", cfg) == ErrorCode::kMalformedResponse);
  cfg.endpoint = "ftp://nowhere";
  CHECK(failure("hi", cfg) == ErrorCode::kConfig);
}

TEST_CASE("concurrency stays within the limit and results keep case order") {
  MockServer server([](const std::string& body, int, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(40));
    auto j = nlohmann::json::parse(body);
    MockServer::reply(res, j["messages"][0]["content"].get<std::string>().substr(0, 20));
  });
  auto cfg = config_for(server);
  auto cases = load_corpus(testing::corpus_dir());
  auto records = run_evaluation(cases, http_responder(cfg), "mock", cfg.style, 3);
  REQUIRE(records.size() == 10);
  CHECK(server.peak_in_flight() <= 3);
  CHECK(server.peak_in_flight() >= 2);
  for (std::size_t i = 1; i < records.size(); ++i) {
    CHECK(records[i - 1].case_id < records[i].case_id);
  }
}

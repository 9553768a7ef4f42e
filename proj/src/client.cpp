#include "ndg/client.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "ndg/error.hpp"

namespace ndg {

namespace {

using OJson = nlohmann::ordered_json;

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/\s]+)(/[^\s]*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw Error(ErrorCode::kConfig, "endpoint '" + url + "' is not an http(s) URL");
  }
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

std::string reply_content(const std::string& body) {
  try {
    auto j = OJson::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw Error(ErrorCode::kMalformedResponse, "message content is not a string");
    return content.get<std::string>();
  } catch (const OJson::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, std::string("unexpected response body: ") + e.what());
  }
}

}  // namespace

TranscriptRecord query_model(const std::string& prompt, const EvalConfig& config) {
  const char* credential = std::getenv(config.credential_env.c_str());
  if (config.credential_env.empty() || credential == nullptr || *credential == '\0') {
    throw Error(ErrorCode::kConfig,
                "credential environment variable '" + config.credential_env + "' is not set");
  }
  auto url = split_url(config.endpoint);

  OJson body = {{"model", config.model},
                {"messages", OJson::array({{{"role", "user"}, {"content", prompt}}})}};
  for (const auto& [k, v] : config.params.items()) body[k] = v;
  const auto payload = body.dump();

  httplib::Client client(url.origin);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);
  client.set_write_timeout(config.timeout_seconds, 0);
  httplib::Headers headers = {{"Authorization", std::string("Bearer ") + credential}};

  TranscriptRecord record;
  record.model = config.model;
  record.prompt = prompt;
  record.params = config.params;

  auto start = std::chrono::steady_clock::now();
  std::string last_failure;
  double backoff = config.retry.initial_backoff_ms;
  for (int attempt = 1; attempt <= config.retry.max_attempts; ++attempt) {
    record.attempts = attempt;
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (res && (res->status == 401 || res->status == 403)) {
      throw Error(ErrorCode::kAuth, "endpoint refused the credential (HTTP " +
                                        std::to_string(res->status) + ")");
    }
    if (res && res->status >= 200 && res->status < 300) {
      record.response = reply_content(res->body);
      record.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      return record;
    }
    if (res && !retryable(res->status)) {
      throw Error(ErrorCode::kTransport,
                  "endpoint returned HTTP " + std::to_string(res->status));
    }
    last_failure = res ? "HTTP " + std::to_string(res->status)
                       : "connection failed: " + httplib::to_string(res.error());
    if (attempt < config.retry.max_attempts) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          static_cast<std::int64_t>(std::min<double>(backoff, config.retry.max_backoff_ms))));
      backoff *= config.retry.multiplier;
    }
  }
  throw Error(ErrorCode::kTransport, "giving up after " +
                                         std::to_string(config.retry.max_attempts) +
                                         " attempts (" + last_failure + ")");
}

Responder http_responder(const EvalConfig& config) {
  return [config](const GoldenCase&, const std::string& prompt) {
    auto r = query_model(prompt, config);
    return ModelReply{std::move(r.response), r.attempts};
  };
}

}  // namespace ndg

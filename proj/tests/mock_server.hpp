#pragma once

#include <httplib.h>

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include <json.hpp>

namespace testing {

// Chat-completions stand-in on a loopback port. The handler sees the
// request body and the 1-based request number.
class MockServer {
 public:
  using Handler = std::function<void(const std::string& body, int n, httplib::Response&)>;

  explicit MockServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
      int n = ++requests_;
      int now = ++in_flight_;
      for (int seen = peak_.load(); now > seen && !peak_.compare_exchange_weak(seen, now);) {
      }
      last_auth_ = req.get_header_value("Authorization");
      handler_(req.body, n, res);
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat"; }
  int requests() const { return requests_; }
  int peak_in_flight() const { return peak_; }
  std::string last_auth() const { return last_auth_; }

  static void reply(httplib::Response& res, const std::string& text) {
    nlohmann::json j = {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}};
    res.set_content(j.dump(), "application/json");
  }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
  std::string last_auth_;
};

}  // namespace testing

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

// In-process generation service speaking the /generate wire protocol, for
// exercising RemoteBackend without a network peer.

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "kgtrick/genbackend.hpp"
#include "kgtrick/language.hpp"

namespace kgtrick::testing {

class FakeGenerationServer {
 public:
  enum class Mode { Echo, Lookup, Unsorted, WrongLength, Malformed, BadRequest };

  explicit FakeGenerationServer(Mode mode = Mode::Echo) : mode_(mode) {
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"ready":true})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeGenerationServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  FakeGenerationServer(const FakeGenerationServer&) = delete;
  FakeGenerationServer& operator=(const FakeGenerationServer&) = delete;

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  void set_lookup(StaticBackend* backend) { lookup_ = backend; }
  void set_delay(std::chrono::milliseconds d) { delay_ = d; }
  // The next `n` POSTs answer 503.
  void fail_next(int n) { failures_ = n; }

  int posts() const { return posts_.load(); }
  std::size_t max_batch_seen() const { return max_batch_.load(); }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mu_);
    return bodies_;
  }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    ++posts_;
    {
      std::lock_guard lock(mu_);
      bodies_.push_back(req.body);
    }
    if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
    if (failures_.fetch_sub(1) > 0) {
      res.status = 503;
      return;
    }
    if (mode_ == Mode::BadRequest) {
      res.status = 400;
      res.set_content("bad request", "text/plain");
      return;
    }
    if (mode_ == Mode::Malformed) {
      res.set_content(R"({"candidates":[[{"txt":"x"}]]})", "application/json");
      return;
    }
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
      return;
    }
    const auto& requests = body.at("requests");
    std::size_t seen = max_batch_.load();
    while (requests.size() > seen && !max_batch_.compare_exchange_weak(seen, requests.size())) {
    }
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : requests) {
      nlohmann::json list = nlohmann::json::array();
      const auto input = r.at("input").get<std::string>();
      switch (mode_) {
        case Mode::Echo:
          list.push_back({{"text", input}, {"score", 0.0}});
          break;
        case Mode::Unsorted:
          list.push_back({{"text", "low"}, {"score", -2.0}});
          list.push_back({{"text", "high"}, {"score", -1.0}});
          break;
        case Mode::Lookup: {
          GenerationRequest g{input, LanguageCode(r.at("target_lang").get<std::string>()),
                              r.at("num_candidates").get<int>()};
          const auto generated = lookup_->generate(std::span(&g, 1));
          for (const auto& c : generated.front()) {
            list.push_back({{"text", c.text}, {"score", c.score}});
          }
          break;
        }
        default:
          break;
      }
      out.push_back(std::move(list));
    }
    if (mode_ == Mode::WrongLength && !out.empty()) out.erase(out.size() - 1);
    res.set_content(nlohmann::json{{"candidates", out}}.dump(), "application/json");
  }

  Mode mode_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  StaticBackend* lookup_ = nullptr;
  std::chrono::milliseconds delay_{0};
  std::atomic<int> failures_{0};
  std::atomic<int> posts_{0};
  std::atomic<std::size_t> max_batch_{0};
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
};

}  // namespace kgtrick::testing

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <atomic>
#include <chrono>
#include <iostream>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "kgtrick/error.hpp"
#include "kgtrick/genbackend.hpp"

namespace kgtrick {

struct RemoteOptions {
  std::string endpoint;  // http://host:port[/prefix]
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 4;
  int retries = 2;
  std::size_t max_batch = 64;
};

// Wire protocol, bit-exact:
//   POST {endpoint}/generate
//   {"requests":[{"input":str,"target_lang":str,"num_candidates":int},...]}
// answered by
//   {"candidates":[[{"text":str,"score":float},...],...]}
inline std::string encode_generate_request(std::span<const GenerationRequest> batch) {
  nlohmann::ordered_json requests = nlohmann::ordered_json::array();
  for (const auto& r : batch) {
    nlohmann::ordered_json item;
    item["input"] = r.input_text;
    item["target_lang"] = r.target_lang.str();
    item["num_candidates"] = r.num_candidates;
    requests.push_back(std::move(item));
  }
  nlohmann::ordered_json body;
  body["requests"] = std::move(requests);
  return body.dump();
}

// Parses a response body; throws ProtocolError on any shape violation.
inline std::vector<CandidateList> decode_generate_response(std::string_view body, std::size_t expected) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("candidates") || !j["candidates"].is_array()) {
    throw ProtocolError("response lacks a 'candidates' array");
  }
  const auto& outer = j["candidates"];
  if (outer.size() != expected) {
    throw ProtocolError("response has " + std::to_string(outer.size()) + " candidate lists for " +
                        std::to_string(expected) + " requests");
  }
  std::vector<CandidateList> out;
  out.reserve(expected);
  for (const auto& list : outer) {
    if (!list.is_array()) throw ProtocolError("candidate list is not an array");
    CandidateList cands;
    for (const auto& c : list) {
      if (!c.is_object() || !c.contains("text") || !c["text"].is_string() || !c.contains("score") ||
          !c["score"].is_number()) {
        throw ProtocolError("candidate lacks string 'text' or numeric 'score'");
      }
      cands.push_back({c["text"].get<std::string>(), c["score"].get<double>()});
    }
    out.push_back(std::move(cands));
  }
  return out;
}

// Client for a generation service speaking the wire protocol above. Large
// batches are split into chunks of max_batch; a failure in any chunk fails the
// whole call.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteOptions options)
      : options_(std::move(options)),
        slots_(std::make_unique<std::counting_semaphore<kMaxSlots>>(
            static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(options_.max_in_flight, 1, kMaxSlots)))) {
    const auto scheme = options_.endpoint.find("://");
    if (scheme == std::string::npos || options_.endpoint.substr(0, scheme) != "http") {
      throw ConfigError("remote endpoint must be an http:// URL, got '" + options_.endpoint + "'");
    }
    const auto path = options_.endpoint.find('/', scheme + 3);
    host_ = options_.endpoint.substr(0, path);
    if (host_.size() <= scheme + 3) throw ConfigError("remote endpoint has no host: '" + options_.endpoint + "'");
    prefix_ = path == std::string::npos ? "" : options_.endpoint.substr(path);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    if (options_.max_batch == 0) throw ConfigError("max_batch must be positive");
    if (options_.retries < 0) throw ConfigError("retries must be non-negative");
  }

  std::string name() const override { return "remote(" + options_.endpoint + ")"; }

  std::vector<CandidateList> generate(std::span<const GenerationRequest> batch) override {
    std::vector<CandidateList> out(batch.size());
    std::vector<std::size_t> failed;
    std::string last_error;
    for (std::size_t start = 0; start < batch.size(); start += options_.max_batch) {
      const auto chunk = batch.subspan(start, std::min(options_.max_batch, batch.size() - start));
      auto result = post_with_retries(chunk, last_error);
      if (!result) {
        for (std::size_t i = 0; i < chunk.size(); ++i) failed.push_back(start + i);
        continue;
      }
      for (std::size_t i = 0; i < chunk.size(); ++i) {
        if (!sort_candidates((*result)[i])) {
          warnings_.fetch_add(1, std::memory_order_relaxed);
          std::clog << "kgtrick: warning: server returned unsorted candidates for request " << start + i
                    << "; re-sorted\n";
        }
        out[start + i] = std::move((*result)[i]);
      }
    }
    if (!failed.empty()) {
      throw TransportError("generation failed for " + std::to_string(failed.size()) + " of " +
                               std::to_string(batch.size()) + " requests: " + last_error,
                           std::move(failed));
    }
    return out;
  }

  std::size_t warnings() const noexcept { return warnings_.load(); }

 private:
  static constexpr std::ptrdiff_t kMaxSlots = 1024;

  std::optional<std::vector<CandidateList>> post_with_retries(std::span<const GenerationRequest> chunk,
                                                              std::string& last_error) {
    const std::string body = encode_generate_request(chunk);
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
      slots_->acquire();
      httplib::Result res = [&] {
        httplib::Client client(host_);
        client.set_connection_timeout(options_.timeout);
        client.set_read_timeout(options_.timeout);
        client.set_write_timeout(options_.timeout);
        return client.Post(prefix_ + "/generate", body, "application/json");
      }();
      slots_->release();
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw ProtocolError("HTTP " + std::to_string(res->status) + " from " + options_.endpoint + ": " + res->body);
      }
      return decode_generate_response(res->body, chunk.size());
    }
    return std::nullopt;
  }

  RemoteOptions options_;
  std::string host_;
  std::string prefix_;
  std::unique_ptr<std::counting_semaphore<kMaxSlots>> slots_;
  std::atomic<std::size_t> warnings_{0};
};

}  // namespace kgtrick

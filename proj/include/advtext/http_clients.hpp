// Copyright 2026 The advtext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "advtext/modelio.hpp"

namespace advtext {

/// Connection settings for one remote model endpoint.
struct RemoteEndpoint {
  std::string url;             // http://host:port/path
  int timeout_s = 30;          // per-request connect/read/write timeout
  int retries = 2;             // extra attempts after the first, transport errors only
  int retry_backoff_ms = 100;  // linear backoff between attempts
  std::string auth_token;      // sent as "Authorization: Bearer <token>" when set
};

struct TransportRequest {
  std::string method;  // "POST" or "GET"
  std::string path;
  std::string body;  // JSON document for POST
};

struct TransportReply {
  bool ok = false;     // false = network-level failure
  int status = 0;      // HTTP status when ok
  std::string body;
  std::string error;   // description when !ok
};

/// Swappable wire function. The default talks real HTTP via cpp-httplib;
/// tests inject fakes to drive the retry/cache logic without sockets.
using TransportFn = std::function<TransportReply(const TransportRequest&)>;

namespace detail {

struct ParsedUrl {
  std::string host_port;  // "host:port" as httplib wants it
  std::string path;       // always starts with '/'
};

inline ParsedUrl parse_http_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind("https://", 0) == 0) {
    throw ConfigError("https endpoints are not supported by this build: " + url);
  }
  if (url.rfind(scheme, 0) != 0) {
    throw ConfigError("endpoint url must start with http://: " + url);
  }
  const std::string rest = url.substr(scheme.size());
  const std::size_t slash = rest.find('/');
  ParsedUrl out;
  out.host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  out.path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (out.host_port.empty()) {
    throw ConfigError("endpoint url has no host: " + url);
  }
  return out;
}

}  // namespace detail

/// Shared machinery for the four remote roles: POST a JSON request, retry
/// bounded times on transport faults, memoize responses by request body.
/// Attack loops re-query identical texts heavily (leave-one-out saliency),
/// so the cache guarantees at most one in-flight request per distinct
/// input even under a concurrent worker pool.
class HttpJsonBackend {
 public:
  explicit HttpJsonBackend(RemoteEndpoint endpoint, TransportFn transport = {})
      : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
    auto parsed = detail::parse_http_url(endpoint_.url);
    host_port_ = parsed.host_port;
    path_ = parsed.path;
    if (!transport_) {
      transport_ = [this](const TransportRequest& req) { return http_transport(req); };
    }
  }

  nlohmann::json post(const nlohmann::json& request) const {
    const std::string key = request.dump();

    std::shared_future<nlohmann::json> fut;
    std::promise<nlohmann::json> prom;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        fut = prom.get_future().share();
        cache_.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (!owner) return fut.get();

    try {
      nlohmann::json value = execute(key);
      prom.set_value(value);
      return value;
    } catch (...) {
      // Drop the poisoned entry so a later call may retry.
      {
        std::lock_guard lock(mutex_);
        cache_.erase(key);
      }
      prom.set_exception(std::current_exception());
      throw;
    }
  }

  /// Startup probe: any HTTP answer (even 404) proves the host is up.
  [[nodiscard]] bool reachable() const {
    return transport_(TransportRequest{"GET", path_, ""}).ok;
  }

  const RemoteEndpoint& endpoint() const { return endpoint_; }

 private:
  nlohmann::json execute(const std::string& body) const {
    const int attempts = endpoint_.retries + 1;
    std::string last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      if (attempt > 1 && endpoint_.retry_backoff_ms > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(endpoint_.retry_backoff_ms * (attempt - 1)));
      }
      TransportReply reply = transport_(TransportRequest{"POST", path_, body});
      if (!reply.ok) {
        last_error = reply.error.empty() ? "connection failed" : reply.error;
        continue;
      }
      if (reply.status >= 500) {
        last_error = "server error " + std::to_string(reply.status);
        continue;
      }
      if (reply.status != 200) {
        throw MalformedResponse("endpoint " + endpoint_.url + " answered HTTP " +
                                std::to_string(reply.status));
      }
      nlohmann::json parsed = nlohmann::json::parse(reply.body, nullptr, false);
      if (parsed.is_discarded()) {
        throw MalformedResponse("endpoint " + endpoint_.url + " returned invalid JSON");
      }
      return parsed;
    }
    throw TransportError("endpoint " + endpoint_.url + " unreachable after " +
                         std::to_string(attempts) + " attempts: " + last_error);
  }

  TransportReply http_transport(const TransportRequest& req) const {
    httplib::Client cli(host_port_);
    cli.set_connection_timeout(endpoint_.timeout_s, 0);
    cli.set_read_timeout(endpoint_.timeout_s, 0);
    cli.set_write_timeout(endpoint_.timeout_s, 0);
    httplib::Headers headers;
    if (!endpoint_.auth_token.empty()) {
      headers.emplace("Authorization", "Bearer " + endpoint_.auth_token);
    }
    httplib::Result result = req.method == "GET"
                                 ? cli.Get(req.path, headers)
                                 : cli.Post(req.path, headers, req.body, "application/json");
    if (!result) {
      return TransportReply{false, 0, "", httplib::to_string(result.error())};
    }
    return TransportReply{true, result->status, result->body, ""};
  }

  RemoteEndpoint endpoint_;
  TransportFn transport_;
  std::string host_port_;
  std::string path_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::shared_future<nlohmann::json>> cache_;
};

namespace detail {

inline double require_score(const nlohmann::json& value, const std::string& url) {
  if (!value.is_number()) {
    throw MalformedResponse("endpoint " + url + ": score is not a number");
  }
  return value.get<double>();
}

inline std::string require_string(const nlohmann::json& object, const char* key,
                                  const std::string& url) {
  if (!object.contains(key) || !object.at(key).is_string()) {
    throw MalformedResponse("endpoint " + url + ": missing string field '" + key + "'");
  }
  return object.at(key).get<std::string>();
}

}  // namespace detail

/// Remote classifier. Request {"text": ...}; response {"label": ..., "score": ...}.
class HttpClassifier final : public ClassifierClient {
 public:
  HttpClassifier(RemoteEndpoint endpoint, std::vector<Label> label_set,
                 TransportFn transport = {})
      : backend_(std::move(endpoint), std::move(transport)), labels_(std::move(label_set)) {}

  const std::vector<Label>& label_set() const override { return labels_; }

  RawPrediction classify_raw(const std::string& text) const override {
    nlohmann::json resp = backend_.post({{"text", text}});
    const std::string url = backend_.endpoint().url;
    RawPrediction raw;
    raw.label = detail::require_string(resp, "label", url);
    if (!resp.contains("score")) {
      throw MalformedResponse("endpoint " + url + ": missing field 'score'");
    }
    raw.score = detail::require_score(resp.at("score"), url);
    bool known = false;
    for (const Label& l : labels_) known = known || l.value == raw.label;
    if (!known) {
      throw MalformedResponse("endpoint " + url + " returned undeclared label '" + raw.label + "'");
    }
    return raw;
  }

  [[nodiscard]] bool reachable() const { return backend_.reachable(); }

 private:
  HttpJsonBackend backend_;
  std::vector<Label> labels_;
};

/// Remote fill-mask. Request {"text": ..., "top_k": n}; response
/// {"candidates": [{"text": ..., "score": ...}, ...]}.
class HttpFillMask final : public FillMaskClient {
 public:
  HttpFillMask(RemoteEndpoint endpoint, std::string mask_token, TransportFn transport = {})
      : backend_(std::move(endpoint), std::move(transport)), mask_token_(std::move(mask_token)) {}

  const std::string& mask_token() const override { return mask_token_; }

  std::vector<FillResult> unmask_raw(const std::string& masked_text,
                                     std::size_t top_k) const override {
    nlohmann::json resp =
        backend_.post({{"text", masked_text}, {"top_k", static_cast<int>(top_k)}});
    const std::string url = backend_.endpoint().url;
    if (!resp.contains("candidates") || !resp.at("candidates").is_array()) {
      throw MalformedResponse("endpoint " + url + ": missing array field 'candidates'");
    }
    std::vector<FillResult> out;
    for (const auto& item : resp.at("candidates")) {
      FillResult r;
      r.text = detail::require_string(item, "text", url);
      if (!item.contains("score")) {
        throw MalformedResponse("endpoint " + url + ": candidate missing 'score'");
      }
      r.score = detail::require_score(item.at("score"), url);
      out.push_back(std::move(r));
    }
    return out;
  }

  [[nodiscard]] bool reachable() const { return backend_.reachable(); }

 private:
  HttpJsonBackend backend_;
  std::string mask_token_;
};

/// Remote paraphraser. Request {"text": ...}; response {"text": ...}.
class HttpParaphraser final : public ParaphraserClient {
 public:
  explicit HttpParaphraser(RemoteEndpoint endpoint, TransportFn transport = {})
      : backend_(std::move(endpoint), std::move(transport)) {}

  std::string paraphrase(const std::string& text) const override {
    nlohmann::json resp = backend_.post({{"text", text}});
    return detail::require_string(resp, "text", backend_.endpoint().url);
  }

  [[nodiscard]] bool reachable() const { return backend_.reachable(); }

 private:
  HttpJsonBackend backend_;
};

/// Remote translator. Request {"text": ...}; response {"text": ...}.
class HttpTranslator final : public TranslatorClient {
 public:
  HttpTranslator(RemoteEndpoint endpoint, std::string source_lang, std::string target_lang,
                 TransportFn transport = {})
      : backend_(std::move(endpoint), std::move(transport)),
        source_lang_(std::move(source_lang)),
        target_lang_(std::move(target_lang)) {}

  const std::string& source_lang() const override { return source_lang_; }
  const std::string& target_lang() const override { return target_lang_; }

  std::string translate(const std::string& text) const override {
    nlohmann::json resp = backend_.post({{"text", text}});
    return detail::require_string(resp, "text", backend_.endpoint().url);
  }

  [[nodiscard]] bool reachable() const { return backend_.reachable(); }

 private:
  HttpJsonBackend backend_;
  std::string source_lang_;
  std::string target_lang_;
};

}  // namespace advtext

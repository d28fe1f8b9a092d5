// Copyright 2026 The BKD Project Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bkd/beacon_http.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <thread>

namespace bkd {

namespace {

constexpr const char* kJsonMime = "application/json";

void send_pulse(httplib::Response& res, const Pulse& pulse) {
  res.set_content(pulse_to_json(pulse), kJsonMime);
}

void send_not_found(httplib::Response& res, const std::string& what) {
  res.status = 404;
  res.set_content(nlohmann::json{{"error", "not found"}, {"what", what}}.dump(), kJsonMime);
}

std::optional<std::uint64_t> parse_u64(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

struct BeaconServer::Impl {
  const PulseStore& store;
  httplib::Server server;
  std::thread worker;
  bool started = false;

  explicit Impl(const PulseStore& s) : store(s) { install_routes(); }

  void install_routes() {
    server.Get("/pulse/last", [this](const httplib::Request&, httplib::Response& res) {
      const std::optional<Pulse> pulse = store.latest();
      if (!pulse) {
        send_not_found(res, "chain is empty");
        return;
      }
      send_pulse(res, *pulse);
    });

    server.Get(R"(/pulse/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::optional<std::uint64_t> index = parse_u64(req.matches[1]);
      if (!index) {
        send_not_found(res, "bad index");
        return;
      }
      const std::optional<Pulse> pulse = store.get(*index);
      if (!pulse) {
        send_not_found(res, "pulse " + std::to_string(*index));
        return;
      }
      send_pulse(res, *pulse);
    });

    server.Get("/chain", [this](const httplib::Request& req, httplib::Response& res) {
      const std::optional<std::uint64_t> latest = store.latest_index();
      if (!latest) {
        send_not_found(res, "chain is empty");
        return;
      }
      std::uint64_t from = 0;
      std::uint64_t to = *latest;
      if (req.has_param("from")) {
        const auto parsed = parse_u64(req.get_param_value("from"));
        if (!parsed) {
          send_not_found(res, "bad from");
          return;
        }
        from = *parsed;
      }
      if (req.has_param("to")) {
        const auto parsed = parse_u64(req.get_param_value("to"));
        if (!parsed) {
          send_not_found(res, "bad to");
          return;
        }
        to = *parsed;
      }
      if (from > to || to > *latest) {
        send_not_found(res, "range outside chain");
        return;
      }
      nlohmann::json array = nlohmann::json::array();
      for (const Pulse& pulse : store.range(from, to)) {
        array.push_back(nlohmann::json::parse(pulse_to_json(pulse)));
      }
      res.set_content(array.dump(), kJsonMime);
    });
  }

  void serve_in_background() {
    worker = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
    started = true;
  }

  void stop() {
    if (started) {
      server.stop();
      if (worker.joinable()) {
        worker.join();
      }
      started = false;
    }
  }

  ~Impl() { stop(); }
};

BeaconServer::BeaconServer(const PulseStore& store) : impl_(std::make_unique<Impl>(store)) {}

BeaconServer::~BeaconServer() = default;

int BeaconServer::start_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) {
    throw Error(ErrorCode::kUnreachable, "cannot bind to " + host);
  }
  impl_->serve_in_background();
  return port;
}

void BeaconServer::start(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kUnreachable,
                "cannot bind to " + host + ":" + std::to_string(port));
  }
  impl_->serve_in_background();
}

void BeaconServer::stop() { impl_->stop(); }

bool BeaconServer::running() const { return impl_->started; }

namespace {

httplib::Result http_get(const std::string& endpoint, const std::string& path) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(5, 0);
  return client.Get(path);
}

Pulse checked_pulse(const std::string& body) {
  Pulse pulse = pulse_from_json(body);
  if (!pulse_self_check(pulse)) {
    throw Error(ErrorCode::kPulseIntegrity,
                "served pulse " + std::to_string(pulse.index) + " fails chain-hash recomputation");
  }
  return pulse;
}

}  // namespace

Pulse fetch_pulse(const std::string& endpoint, std::optional<std::uint64_t> index) {
  const std::string path =
      index ? "/pulse/" + std::to_string(*index) : std::string("/pulse/last");
  httplib::Result res = http_get(endpoint, path);
  if (!res) {
    throw Error(ErrorCode::kUnreachable, endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 404) {
    throw Error(ErrorCode::kNotFound, path);
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kUnreachable, path + " returned " + std::to_string(res->status));
  }
  return checked_pulse(res->body);
}

std::vector<Pulse> fetch_chain(const std::string& endpoint, std::uint64_t from, std::uint64_t to) {
  const std::string path =
      "/chain?from=" + std::to_string(from) + "&to=" + std::to_string(to);
  httplib::Result res = http_get(endpoint, path);
  if (!res) {
    throw Error(ErrorCode::kUnreachable, endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 404) {
    throw Error(ErrorCode::kNotFound, path);
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kUnreachable, path + " returned " + std::to_string(res->status));
  }
  nlohmann::json array = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (array.is_discarded() || !array.is_array()) {
    throw Error(ErrorCode::kMalformedDocument, "chain response is not a JSON array");
  }
  std::vector<Pulse> pulses;
  pulses.reserve(array.size());
  for (const nlohmann::json& item : array) {
    pulses.push_back(pulse_from_json(item.dump()));
  }
  if (!pulses.empty()) {
    const ChainVerdict verdict = verify_chain(pulses);
    if (!verdict.ok) {
      throw Error(ErrorCode::kPulseIntegrity,
                  "served chain fails verification at index " +
                      std::to_string(*verdict.first_bad_index));
    }
  }
  return pulses;
}

std::vector<Pulse> fetch_chain_all(const std::string& endpoint) {
  const Pulse last = fetch_pulse(endpoint);
  return fetch_chain(endpoint, 0, last.index);
}

}  // namespace bkd

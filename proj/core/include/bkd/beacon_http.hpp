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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bkd/beacon.hpp"

namespace bkd {

// HTTP face of the beacon. Endpoints:
//   GET /pulse/last        latest pulse
//   GET /pulse/{index}     pulse by index (404 when absent)
//   GET /chain?from=a&to=b inclusive range as a JSON array
// Bodies use the pulse wire format from pulse.hpp.
class BeaconServer {
 public:
  // The store must outlive the server. The server only reads; appending stays
  // with the owner (ticker thread, test driver, ...).
  explicit BeaconServer(const PulseStore& store);
  ~BeaconServer();

  BeaconServer(const BeaconServer&) = delete;
  BeaconServer& operator=(const BeaconServer&) = delete;

  // Binds to an OS-assigned port on host and serves in a background thread.
  // Returns the bound port. Throws kUnreachable on bind failure.
  int start_any_port(const std::string& host);

  // Binds to a fixed port. Throws kUnreachable on bind failure.
  void start(const std::string& host, int port);

  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Fetches one pulse (latest when index is absent) and verifies its stored
// chain hash by recomputation before returning; a mismatch throws
// kPulseIntegrity, a missing index kNotFound, a connection failure
// kUnreachable. endpoint looks like "http://127.0.0.1:8799".
Pulse fetch_pulse(const std::string& endpoint, std::optional<std::uint64_t> index = std::nullopt);

// Fetches an inclusive range and verifies it as a chain slice (every stored
// hash recomputed, linkage intact) before returning.
std::vector<Pulse> fetch_chain(const std::string& endpoint, std::uint64_t from, std::uint64_t to);

// Fetches the whole chain (0 through latest).
std::vector<Pulse> fetch_chain_all(const std::string& endpoint);

}  // namespace bkd

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

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "bkd/error.hpp"

// Command implementations behind the bkd binary. Kept separate from argument
// parsing so the test suite can drive them in-process.

namespace bkd::cli {

// Stable process exit codes. 0 is success; status additionally uses 3/4 for
// the rotation verdict. Every ErrorCode maps to its own code so scripts can
// branch on failures.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRekeySoon = 3;
inline constexpr int kExitExhausted = 4;
inline constexpr int kExitChainInvalid = 5;

int exit_code_for(ErrorCode code);

// Shared flags. `beacon` is either an http(s) endpoint or a chain file path;
// the two are interchangeable everywhere a beacon is consumed.
struct CommonOptions {
  std::string ledger_path;
  std::string beacon;
  std::uint64_t min_age = 10;
  std::string suite = "AES_COMPOSE_V1";
  std::uint64_t rekey_threshold = 2;
  std::optional<std::uint64_t> rng_seed;
  bool insecure_test = false;
  bool reveal = false;
};

struct InitOptions {
  std::string ledger_path;
  std::string group_id;
  std::string secret_hex_path;          // hex file with the pre-shared secret
  std::uint64_t generate_bytes = 0;     // or generate this many bytes locally
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks an ephemeral port
  std::uint64_t interval_ms = 1000;
  std::string chain_file;          // load on start when present, persist on stop
  std::uint64_t max_pulses = 0;    // stop after this many new pulses (0 = run until signal)
  std::optional<std::uint64_t> rng_seed;
  bool insecure_test = false;
  std::atomic<int>* bound_port = nullptr;  // reports the listening port
};

struct ExportOptions {
  std::string beacon;
  std::string out_path;
};

struct VerifyChainOptions {
  std::string beacon;
};

struct ProposeOptions {
  CommonOptions common;
  std::string out_path;  // proposal file to write
};

struct AcceptOptions {
  CommonOptions common;
  std::string proposal_path;
};

struct StatusOptions {
  CommonOptions common;
};

int cmd_init(const InitOptions& options, std::ostream& out, std::ostream& err);
int cmd_beacon_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);
int cmd_beacon_export(const ExportOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify_chain(const VerifyChainOptions& options, std::ostream& out, std::ostream& err);
int cmd_propose(const ProposeOptions& options, std::ostream& out, std::ostream& err);
int cmd_accept(const AcceptOptions& options, std::ostream& out, std::ostream& err);
int cmd_status(const StatusOptions& options, std::ostream& out, std::ostream& err);

// Asks a running beacon-serve loop to wind down; wired to SIGINT/SIGTERM in
// main.
void request_beacon_stop();

}  // namespace bkd::cli

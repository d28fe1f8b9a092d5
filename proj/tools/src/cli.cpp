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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <ostream>
#include <thread>

#include "bkd/agreement.hpp"
#include "bkd/beacon.hpp"
#include "bkd/beacon_http.hpp"
#include "bkd/keys.hpp"
#include "bkd/ledger.hpp"

namespace bkd::cli {

namespace {

std::atomic<bool> g_beacon_stop{false};

bool is_endpoint(const std::string& beacon) {
  return beacon.rfind("http://", 0) == 0 || beacon.rfind("https://", 0) == 0;
}

// Loads the beacon view, from a live endpoint or an exported chain file, and
// verifies it before use.
PulseStore load_beacon(const std::string& beacon) {
  if (beacon.empty()) {
    throw Error(ErrorCode::kIoError, "no beacon endpoint or chain file given");
  }
  std::vector<Pulse> chain;
  if (is_endpoint(beacon)) {
    chain = fetch_chain_all(beacon);
  } else {
    chain = read_chain_file(beacon);
    if (chain.empty()) {
      throw Error(ErrorCode::kEmptyChain, beacon);
    }
    const ChainVerdict verdict = verify_chain(chain);
    if (!verdict.ok) {
      throw Error(ErrorCode::kPulseIntegrity,
                  beacon + " fails verification at index " +
                      std::to_string(*verdict.first_bad_index));
    }
  }
  return PulseStore(std::move(chain));
}

std::unique_ptr<EntropySource> make_entropy(const std::optional<std::uint64_t>& seed,
                                            bool insecure_test, std::ostream& err) {
  if (seed) {
    if (!insecure_test) {
      err << "error: --rng-seed is a test facility; pass --insecure-test to confirm\n";
      return nullptr;
    }
    return std::make_unique<SeededEntropy>(*seed);
  }
  return std::make_unique<SystemEntropy>();
}

std::string fingerprint(const SessionKey& key) {
  return to_hex(sha3_256(key.bytes)).substr(0, 8);
}

void print_outcome(const AgreementOutcome& outcome, bool reveal, std::ostream& out) {
  out << "suite: " << suite_name(outcome.session_key.suite_id) << "\n";
  out << "block: " << outcome.session_key.block_index
      << ", pulse: " << outcome.session_key.pulse_index << "\n";
  out << "key fingerprint: " << fingerprint(outcome.session_key) << "\n";
  if (reveal) {
    out << "session key: " << to_hex(outcome.session_key.bytes) << "\n";
  }
}

Bytes read_secret_hex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path);
  }
  std::string hex;
  std::string line;
  while (std::getline(in, line)) {
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        hex.push_back(c);
      }
    }
  }
  return from_hex(hex);
}

int report(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  return exit_code_for(e.code());
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSecretTooShort: return 10;
    case ErrorCode::kSecretNotAligned: return 11;
    case ErrorCode::kBlockNotFresh: return 12;
    case ErrorCode::kPulseIntegrity: return 13;
    case ErrorCode::kNotAuthBlock: return 14;
    case ErrorCode::kEmptyTranscript: return 15;
    case ErrorCode::kBadTagLength: return 16;
    case ErrorCode::kFieldOutOfRange: return 17;
    case ErrorCode::kEntropyUnavailable: return 18;
    case ErrorCode::kTimestampRegression: return 19;
    case ErrorCode::kEmptyChain: return 20;
    case ErrorCode::kHistoryTooShort: return 21;
    case ErrorCode::kNotFound: return 22;
    case ErrorCode::kUnreachable: return 23;
    case ErrorCode::kBadGroupId: return 24;
    case ErrorCode::kExhausted: return 25;
    case ErrorCode::kUnknownBlock: return 26;
    case ErrorCode::kAuthBlockForbidden: return 27;
    case ErrorCode::kBlockNotUsed: return 28;
    case ErrorCode::kBadThreshold: return 29;
    case ErrorCode::kIntegrityFailure: return 30;
    case ErrorCode::kUnsupportedVersion: return 31;
    case ErrorCode::kMalformedDocument: return 32;
    case ErrorCode::kGroupMismatch: return 33;
    case ErrorCode::kBadMac: return 34;
    case ErrorCode::kReplayedBlock: return 35;
    case ErrorCode::kUnknownPulse: return 36;
    case ErrorCode::kPulseBindingMismatch: return 37;
    case ErrorCode::kIoError: return 38;
  }
  return kExitInternal;
}

void request_beacon_stop() { g_beacon_stop.store(true); }

int cmd_init(const InitOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.ledger_path.empty()) {
      err << "error: --ledger is required\n";
      return kExitUsage;
    }
    const bool have_file = !options.secret_hex_path.empty();
    const bool have_generate = options.generate_bytes > 0;
    if (have_file == have_generate) {
      err << "error: pass exactly one of --secret-hex or --generate\n";
      return kExitUsage;
    }

    MasterSecret secret;
    if (have_file) {
      secret.bytes = read_secret_hex_file(options.secret_hex_path);
    } else {
      SystemEntropy entropy;
      secret.bytes = entropy.take(options.generate_bytes);
    }

    const Ledger ledger = init_ledger(secret, options.group_id);
    save_ledger_file(ledger, options.ledger_path);

    out << "ledger written to " << options.ledger_path << "\n";
    out << "group: " << ledger.group_id << "\n";
    out << "derivation blocks: " << ledger.blocks.derivation_blocks.size()
        << " (fresh), auth block reserved\n";
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_beacon_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    g_beacon_stop.store(false);

    std::unique_ptr<EntropySource> entropy =
        make_entropy(options.rng_seed, options.insecure_test, err);
    if (!entropy) {
      return kExitUsage;
    }

    const bool resume =
        !options.chain_file.empty() && std::filesystem::exists(options.chain_file);
    PulseStore store = [&]() -> PulseStore {
      if (!resume) {
        return PulseStore{};
      }
      std::vector<Pulse> chain = read_chain_file(options.chain_file);
      const ChainVerdict verdict = verify_chain(chain);
      if (!verdict.ok) {
        throw Error(ErrorCode::kPulseIntegrity,
                    options.chain_file + " fails verification at index " +
                        std::to_string(*verdict.first_bad_index));
      }
      return PulseStore(std::move(chain));
    }();
    if (resume) {
      out << "resuming chain from " << options.chain_file << " at index "
          << *store.latest_index() << "\n";
    }

    auto grow = [&store, &entropy] {
      std::uint64_t timestamp = now_unix_seconds();
      const std::optional<Pulse> prev = store.latest();
      if (prev && timestamp < prev->timestamp) {
        timestamp = prev->timestamp;  // resumed chains may carry a future clock
      }
      advance_chain(store, *entropy, timestamp);
    };

    // A served beacon always has at least one pulse before it starts
    // answering queries.
    std::uint64_t produced = 0;
    if (store.empty()) {
      grow();
      ++produced;
    }

    BeaconServer server(store);
    int port = options.port;
    if (port == 0) {
      port = server.start_any_port(options.host);
    } else {
      server.start(options.host, port);
    }
    if (options.bound_port != nullptr) {
      options.bound_port->store(port);
    }
    out << "beacon serving on http://" << options.host << ":" << port << "\n";

    while (!g_beacon_stop.load() && (options.max_pulses == 0 || produced < options.max_pulses)) {
      // Sleep in short slices so stop requests stay responsive.
      std::uint64_t slept = 0;
      while (!g_beacon_stop.load() && slept < options.interval_ms) {
        const std::uint64_t slice = std::min<std::uint64_t>(50, options.interval_ms - slept);
        std::this_thread::sleep_for(std::chrono::milliseconds(slice));
        slept += slice;
      }
      if (g_beacon_stop.load()) {
        break;
      }
      grow();
      ++produced;
    }

    server.stop();
    out << "beacon stopped after " << produced << " new pulses (chain height " << store.size()
        << ")\n";
    if (!options.chain_file.empty()) {
      const std::vector<Pulse> chain = store.snapshot();
      write_chain_file(chain, options.chain_file);
      out << "chain persisted to " << options.chain_file << "\n";
    }
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_beacon_export(const ExportOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const PulseStore store = load_beacon(options.beacon);
    const std::vector<Pulse> chain = store.snapshot();
    write_chain_file(chain, options.out_path);
    out << "exported " << chain.size() << " pulses to " << options.out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_verify_chain(const VerifyChainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    std::vector<Pulse> chain;
    if (is_endpoint(options.beacon)) {
      // fetch_chain_all verifies internally, but run the verdict path anyway
      // so the report is uniform.
      chain = fetch_chain_all(options.beacon);
    } else {
      chain = read_chain_file(options.beacon);
    }
    if (chain.empty()) {
      err << "error: chain is empty\n";
      return exit_code_for(ErrorCode::kEmptyChain);
    }
    const ChainVerdict verdict = verify_chain(chain);
    if (!verdict.ok) {
      out << "chain INVALID at index " << *verdict.first_bad_index << ": "
          << chain_fault_name(*verdict.reason) << "\n";
      return kExitChainInvalid;
    }
    out << "chain OK: " << chain.size() << " pulses, head index " << chain.back().index << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_propose(const ProposeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    std::unique_ptr<EntropySource> entropy =
        make_entropy(options.common.rng_seed, options.common.insecure_test, err);
    if (!entropy) {
      return kExitUsage;
    }
    Ledger ledger = load_ledger_file(options.common.ledger_path);
    const PulseStore store = load_beacon(options.common.beacon);
    const SuiteId suite = suite_from_name(options.common.suite);

    const ProposeResult result =
        propose_session(ledger, store, *entropy, suite, options.common.min_age);
    save_ledger_file(ledger, options.common.ledger_path);

    std::ofstream proposal_out(options.out_path, std::ios::trunc);
    if (!proposal_out) {
      throw Error(ErrorCode::kIoError, "cannot open " + options.out_path + " for writing");
    }
    proposal_out << proposal_to_json(result.proposal) << "\n";
    proposal_out.flush();
    if (!proposal_out) {
      throw Error(ErrorCode::kIoError, "short write to " + options.out_path);
    }

    out << "proposal written to " << options.out_path << "\n";
    print_outcome(result.outcome, options.common.reveal, out);
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_accept(const AcceptOptions& options, std::ostream& out, std::ostream& err) {
  try {
    Ledger ledger = load_ledger_file(options.common.ledger_path);
    const PulseStore store = load_beacon(options.common.beacon);

    std::ifstream proposal_in(options.proposal_path);
    if (!proposal_in) {
      throw Error(ErrorCode::kIoError, "cannot open " + options.proposal_path);
    }
    std::string json((std::istreambuf_iterator<char>(proposal_in)),
                     std::istreambuf_iterator<char>());
    const SessionProposal proposal = proposal_from_json(json);

    const AgreementOutcome outcome = accept_session(ledger, store, proposal);
    save_ledger_file(ledger, options.common.ledger_path);

    out << "proposal accepted\n";
    print_outcome(outcome, options.common.reveal, out);
    return kExitOk;
  } catch (const Error& e) {
    return report(e, err);
  }
}

int cmd_status(const StatusOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Ledger ledger = load_ledger_file(options.common.ledger_path);

    std::uint64_t fresh = 0, used = 0, retired = 0;
    for (const KeyBlock& block : ledger.blocks.derivation_blocks) {
      switch (block.state) {
        case BlockState::kFresh: ++fresh; break;
        case BlockState::kUsed: ++used; break;
        case BlockState::kRetired: ++retired; break;
      }
    }
    const RotationStatus status = rotation_status(ledger, options.common.rekey_threshold);

    out << "group: " << ledger.group_id << "\n";
    out << "blocks: fresh=" << fresh << " used=" << used << " retired=" << retired << "\n";
    out << "sessions derived: " << ledger.usage_log.size() << "\n";
    out << "rotation: " << rotation_verdict_name(status.verdict) << " (threshold "
        << status.threshold << ")\n";

    switch (status.verdict) {
      case RotationVerdict::kHealthy: return kExitOk;
      case RotationVerdict::kRekeySoon: return kExitRekeySoon;
      case RotationVerdict::kExhausted: return kExitExhausted;
    }
    return kExitInternal;
  } catch (const Error& e) {
    return report(e, err);
  }
}

}  // namespace bkd::cli

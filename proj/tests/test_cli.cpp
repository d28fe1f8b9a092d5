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

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "bkd/agreement.hpp"
#include "bkd/beacon.hpp"
#include "bkd/beacon_http.hpp"
#include "bkd/ledger.hpp"
#include "cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using bkd::cli::AcceptOptions;
using bkd::cli::InitOptions;
using bkd::cli::ProposeOptions;
using bkd::cli::StatusOptions;

namespace {

// Unique scratch directory per test run.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("bkd_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

void write_chain_fixture(const std::string& path, std::uint64_t seed, std::size_t n) {
  bkd::write_chain_file(testutil::build_chain(seed, n), path);
}

int run_init(const Scratch& scratch, const std::string& ledger, std::uint64_t generate,
             std::string* captured = nullptr) {
  InitOptions options;
  options.ledger_path = scratch.path(ledger);
  options.group_id = "cli-group";
  options.generate_bytes = generate;
  std::ostringstream out, err;
  const int rc = bkd::cli::cmd_init(options, out, err);
  if (captured != nullptr) {
    *captured = out.str() + err.str();
  }
  return rc;
}

ProposeOptions propose_options(const Scratch& scratch, const std::string& ledger,
                               const std::string& beacon, const std::string& proposal) {
  ProposeOptions options;
  options.common.ledger_path = scratch.path(ledger);
  options.common.beacon = beacon;
  options.common.rng_seed = 42;
  options.common.insecure_test = true;
  options.out_path = scratch.path(proposal);
  return options;
}

AcceptOptions accept_options(const Scratch& scratch, const std::string& ledger,
                             const std::string& beacon, const std::string& proposal) {
  AcceptOptions options;
  options.common.ledger_path = scratch.path(ledger);
  options.common.beacon = beacon;
  options.proposal_path = scratch.path(proposal);
  return options;
}

std::string fingerprint_line(const std::string& output) {
  const std::size_t pos = output.find("key fingerprint: ");
  REQUIRE(pos != std::string::npos);
  return output.substr(pos, output.find('\n', pos) - pos);
}

}  // namespace

TEST_CASE("init generates a ledger without leaking key material", "[cli]") {
  Scratch scratch;
  std::string output;
  REQUIRE(run_init(scratch, "ledger.json", 128, &output) == 0);
  CHECK(output.find("derivation blocks: 3") != std::string::npos);

  const bkd::Ledger ledger = bkd::load_ledger_file(scratch.path("ledger.json"));
  CHECK(ledger.blocks.derivation_blocks.size() == 3);
  CHECK(output.find(bkd::to_hex(ledger.blocks.auth_block.bytes)) == std::string::npos);
  for (const auto& block : ledger.blocks.derivation_blocks) {
    CHECK(output.find(bkd::to_hex(block.bytes)) == std::string::npos);
  }
}

TEST_CASE("init accepts a hex secret file and rejects misaligned ones", "[cli]") {
  Scratch scratch;
  std::mt19937_64 rng(0xc11e0001);

  {
    std::ofstream hex(scratch.path("secret.hex"));
    hex << bkd::to_hex(testutil::random_bytes(rng, 64)) << "\n";
  }
  InitOptions options;
  options.ledger_path = scratch.path("ledger.json");
  options.group_id = "cli-group";
  options.secret_hex_path = scratch.path("secret.hex");
  std::ostringstream out, err;
  REQUIRE(bkd::cli::cmd_init(options, out, err) == 0);
  CHECK(out.str().find("derivation blocks: 1") != std::string::npos);

  {
    std::ofstream hex(scratch.path("bad.hex"));
    hex << bkd::to_hex(testutil::random_bytes(rng, 100)) << "\n";
  }
  options.secret_hex_path = scratch.path("bad.hex");
  options.ledger_path = scratch.path("ledger2.json");
  std::ostringstream out2, err2;
  const int rc = bkd::cli::cmd_init(options, out2, err2);
  CHECK(rc == bkd::cli::exit_code_for(bkd::ErrorCode::kSecretNotAligned));
  CHECK(err2.str().find("SecretNotAligned") != std::string::npos);
}

TEST_CASE("propose and accept against a chain file agree on the fingerprint", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 777, 60);
  REQUIRE(run_init(scratch, "alice.json", 128) == 0);
  // Clone the freshly inited ledger for the second party.
  fs::copy_file(scratch.path("alice.json"), scratch.path("bob.json"));

  std::ostringstream pout, perr;
  const int prc = bkd::cli::cmd_propose(
      propose_options(scratch, "alice.json", scratch.path("chain.jsonl"), "proposal.json"), pout,
      perr);
  REQUIRE(prc == 0);

  std::ostringstream aout, aerr;
  const int arc = bkd::cli::cmd_accept(
      accept_options(scratch, "bob.json", scratch.path("chain.jsonl"), "proposal.json"), aout,
      aerr);
  REQUIRE(arc == 0);

  CHECK(fingerprint_line(pout.str()) == fingerprint_line(aout.str()));
  // No raw key material on either side without --reveal.
  CHECK(pout.str().find("session key:") == std::string::npos);
  CHECK(aout.str().find("session key:") == std::string::npos);
}

TEST_CASE("seeded proposals are bit-for-bit reproducible", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 778, 60);
  REQUIRE(run_init(scratch, "a1.json", 96) == 0);
  fs::copy_file(scratch.path("a1.json"), scratch.path("a2.json"));

  std::ostringstream out1, out2, err;
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "a1.json", scratch.path("chain.jsonl"), "p1.json"), out1,
              err) == 0);
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "a2.json", scratch.path("chain.jsonl"), "p2.json"), out2,
              err) == 0);

  std::ifstream f1(scratch.path("p1.json")), f2(scratch.path("p2.json"));
  const std::string p1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string p2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(p1 == p2);
  CHECK(fingerprint_line(out1.str()) == fingerprint_line(out2.str()));
}

TEST_CASE("the seed flag refuses to run without the insecure acknowledgement", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 779, 40);
  REQUIRE(run_init(scratch, "ledger.json", 96) == 0);

  ProposeOptions options =
      propose_options(scratch, "ledger.json", scratch.path("chain.jsonl"), "p.json");
  options.common.insecure_test = false;
  std::ostringstream out, err;
  CHECK(bkd::cli::cmd_propose(options, out, err) == bkd::cli::kExitUsage);
  CHECK(err.str().find("--insecure-test") != std::string::npos);
}

TEST_CASE("reveal prints the session key and both sides match", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 780, 50);
  REQUIRE(run_init(scratch, "alice.json", 96) == 0);
  fs::copy_file(scratch.path("alice.json"), scratch.path("bob.json"));

  ProposeOptions popts =
      propose_options(scratch, "alice.json", scratch.path("chain.jsonl"), "p.json");
  popts.common.reveal = true;
  std::ostringstream pout, perr;
  REQUIRE(bkd::cli::cmd_propose(popts, pout, perr) == 0);
  REQUIRE(pout.str().find("session key: ") != std::string::npos);

  AcceptOptions aopts = accept_options(scratch, "bob.json", scratch.path("chain.jsonl"), "p.json");
  aopts.common.reveal = true;
  std::ostringstream aout, aerr;
  REQUIRE(bkd::cli::cmd_accept(aopts, aout, aerr) == 0);

  auto key_line = [](const std::string& s) {
    const std::size_t pos = s.find("session key: ");
    REQUIRE(pos != std::string::npos);
    return s.substr(pos, s.find('\n', pos) - pos);
  };
  CHECK(key_line(pout.str()) == key_line(aout.str()));
}

TEST_CASE("a tampered proposal file is rejected with the BadMac exit code", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 781, 50);
  REQUIRE(run_init(scratch, "alice.json", 96) == 0);
  fs::copy_file(scratch.path("alice.json"), scratch.path("bob.json"));

  std::ostringstream out, err;
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "alice.json", scratch.path("chain.jsonl"), "p.json"), out,
              err) == 0);

  // Flip the block index inside the signed message.
  bkd::SessionProposal proposal;
  {
    std::ifstream in(scratch.path("p.json"));
    const std::string json((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    proposal = bkd::proposal_from_json(json);
  }
  proposal.pulse_index ^= 1;
  {
    std::ofstream outf(scratch.path("p.json"), std::ios::trunc);
    outf << bkd::proposal_to_json(proposal) << "\n";
  }

  std::ostringstream aout, aerr;
  const int rc = bkd::cli::cmd_accept(
      accept_options(scratch, "bob.json", scratch.path("chain.jsonl"), "p.json"), aout, aerr);
  CHECK(rc == bkd::cli::exit_code_for(bkd::ErrorCode::kBadMac));
}

TEST_CASE("accepting the same proposal twice reports a replayed block", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 782, 50);
  REQUIRE(run_init(scratch, "alice.json", 96) == 0);
  fs::copy_file(scratch.path("alice.json"), scratch.path("bob.json"));

  std::ostringstream out, err;
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "alice.json", scratch.path("chain.jsonl"), "p.json"), out,
              err) == 0);

  std::ostringstream a1out, a1err, a2out, a2err;
  REQUIRE(bkd::cli::cmd_accept(
              accept_options(scratch, "bob.json", scratch.path("chain.jsonl"), "p.json"), a1out,
              a1err) == 0);
  const int rc = bkd::cli::cmd_accept(
      accept_options(scratch, "bob.json", scratch.path("chain.jsonl"), "p.json"), a2out, a2err);
  CHECK(rc == bkd::cli::exit_code_for(bkd::ErrorCode::kReplayedBlock));
}

TEST_CASE("status tracks the rotation verdict with dedicated exit codes", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 783, 50);
  REQUIRE(run_init(scratch, "ledger.json", 96) == 0);  // 2 derivation blocks

  StatusOptions sopts;
  sopts.common.ledger_path = scratch.path("ledger.json");
  sopts.common.rekey_threshold = 1;

  std::ostringstream out1, err1;
  CHECK(bkd::cli::cmd_status(sopts, out1, err1) == bkd::cli::kExitOk);
  CHECK(out1.str().find("Healthy") != std::string::npos);

  // Consume one block: 1 fresh <= threshold 1 -> RekeySoon.
  std::ostringstream pout, perr;
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "ledger.json", scratch.path("chain.jsonl"), "p1.json"),
              pout, perr) == 0);
  std::ostringstream out2, err2;
  CHECK(bkd::cli::cmd_status(sopts, out2, err2) == bkd::cli::kExitRekeySoon);
  CHECK(out2.str().find("RekeySoon") != std::string::npos);

  // Consume the last block -> Exhausted.
  REQUIRE(bkd::cli::cmd_propose(
              propose_options(scratch, "ledger.json", scratch.path("chain.jsonl"), "p2.json"),
              pout, perr) == 0);
  std::ostringstream out3, err3;
  CHECK(bkd::cli::cmd_status(sopts, out3, err3) == bkd::cli::kExitExhausted);
  CHECK(out3.str().find("Exhausted") != std::string::npos);

  // And a further proposal fails with the Exhausted error code.
  std::ostringstream pout2, perr2;
  CHECK(bkd::cli::cmd_propose(
            propose_options(scratch, "ledger.json", scratch.path("chain.jsonl"), "p3.json"),
            pout2, perr2) == bkd::cli::exit_code_for(bkd::ErrorCode::kExhausted));

  StatusOptions missing;
  missing.common.ledger_path = scratch.path("nope.json");
  std::ostringstream out4, err4;
  CHECK(bkd::cli::cmd_status(missing, out4, err4) != 0);
}

TEST_CASE("the beacon service persists a verifiable chain on shutdown", "[cli]") {
  Scratch scratch;
  bkd::cli::ServeOptions serve;
  serve.host = "127.0.0.1";
  serve.port = 0;
  serve.interval_ms = 1;
  serve.chain_file = scratch.path("served.jsonl");
  serve.max_pulses = 25;
  serve.rng_seed = 9;
  serve.insecure_test = true;

  std::ostringstream out, err;
  REQUIRE(bkd::cli::cmd_beacon_serve(serve, out, err) == 0);

  bkd::cli::VerifyChainOptions verify;
  verify.beacon = scratch.path("served.jsonl");
  std::ostringstream vout, verr;
  REQUIRE(bkd::cli::cmd_verify_chain(verify, vout, verr) == bkd::cli::kExitOk);
  CHECK(vout.str().find("chain OK: 25 pulses") != std::string::npos);

  // Resuming extends the same chain instead of restarting it.
  serve.max_pulses = 5;
  std::ostringstream out2, err2;
  REQUIRE(bkd::cli::cmd_beacon_serve(serve, out2, err2) == 0);
  CHECK(out2.str().find("resuming chain") != std::string::npos);
  const auto chain = bkd::read_chain_file(scratch.path("served.jsonl"));
  CHECK(chain.size() == 30);
  CHECK(bkd::verify_chain(chain).ok);
}

TEST_CASE("the serving beacon answers pulse and chain queries", "[cli]") {
  Scratch scratch;
  std::atomic<int> port{0};
  bkd::cli::ServeOptions serve;
  serve.host = "127.0.0.1";
  serve.port = 0;
  serve.interval_ms = 5;
  serve.max_pulses = 400;  // plenty of runway while the client talks to it
  serve.rng_seed = 10;
  serve.insecure_test = true;
  serve.bound_port = &port;

  std::ostringstream out, err;
  std::thread server([&] { bkd::cli::cmd_beacon_serve(serve, out, err); });
  while (port.load() == 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  const std::string endpoint = "http://127.0.0.1:" + std::to_string(port.load());

  const bkd::Pulse last = bkd::fetch_pulse(endpoint);
  CHECK(bkd::pulse_self_check(last));
  const bkd::Pulse zero = bkd::fetch_pulse(endpoint, 0);
  CHECK(zero.index == 0);
  try {
    bkd::fetch_pulse(endpoint, 999999);
    FAIL("expected NotFound");
  } catch (const bkd::Error& e) {
    CHECK(e.code() == bkd::ErrorCode::kNotFound);
  }

  // Exporting from the live endpoint yields a verifiable chain file.
  bkd::cli::ExportOptions exporter;
  exporter.beacon = endpoint;
  exporter.out_path = scratch.path("live_export.jsonl");
  std::ostringstream eout, eerr;
  REQUIRE(bkd::cli::cmd_beacon_export(exporter, eout, eerr) == 0);
  CHECK(bkd::verify_chain(bkd::read_chain_file(scratch.path("live_export.jsonl"))).ok);

  bkd::cli::request_beacon_stop();
  server.join();
}

TEST_CASE("chain verification reports damage with a dedicated exit code", "[cli]") {
  Scratch scratch;
  auto chain = testutil::build_chain(784, 30);
  chain[11].timestamp += 1;  // re-hash NOT updated: stored hash now wrong
  bkd::write_chain_file(chain, scratch.path("bad.jsonl"));

  bkd::cli::VerifyChainOptions verify;
  verify.beacon = scratch.path("bad.jsonl");
  std::ostringstream out, err;
  CHECK(bkd::cli::cmd_verify_chain(verify, out, err) == bkd::cli::kExitChainInvalid);
  CHECK(out.str().find("INVALID at index 11") != std::string::npos);
}

TEST_CASE("beacon export round trips through files", "[cli]") {
  Scratch scratch;
  write_chain_fixture(scratch.path("chain.jsonl"), 785, 15);

  bkd::cli::ExportOptions exporter;
  exporter.beacon = scratch.path("chain.jsonl");
  exporter.out_path = scratch.path("copy.jsonl");
  std::ostringstream out, err;
  REQUIRE(bkd::cli::cmd_beacon_export(exporter, out, err) == 0);
  CHECK(bkd::read_chain_file(scratch.path("copy.jsonl")) ==
        bkd::read_chain_file(scratch.path("chain.jsonl")));
}

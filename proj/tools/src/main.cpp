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

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "cli.hpp"

namespace {

void handle_signal(int) { bkd::cli::request_beacon_stop(); }

void add_common(CLI::App* cmd, bkd::cli::CommonOptions& common, bool needs_beacon) {
  cmd->add_option("--ledger", common.ledger_path, "ledger file path")
      ->envname("BKD_LEDGER")
      ->required();
  auto* beacon =
      cmd->add_option("--beacon", common.beacon, "beacon endpoint (http://...) or chain file");
  if (needs_beacon) {
    beacon->required();
  }
  cmd->add_option("--min-age", common.min_age, "minimum pulse age, in pulses")
      ->default_val(10)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--suite", common.suite, "derivation suite")
      ->default_val("AES_COMPOSE_V1")
      ->check(CLI::IsMember({"AES_COMPOSE_V1", "SHA3_DERIVE_V1"}));
  cmd->add_option("--rekey-threshold", common.rekey_threshold,
                  "fresh-block level that triggers the rekey warning")
      ->default_val(2)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rng-seed", common.rng_seed,
                  "deterministic randomness for tests (needs --insecure-test)");
  cmd->add_flag("--insecure-test", common.insecure_test, "acknowledge test-only randomness");
  cmd->add_flag("--reveal", common.reveal, "print the raw session key");
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  CLI::App app{"bkd: symmetric session-key growing from a pre-shared secret and a randomness "
               "beacon"};
  app.require_subcommand(1);

  // init
  bkd::cli::InitOptions init_options;
  auto* init = app.add_subcommand("init", "create a key ledger from a pre-shared secret");
  init->add_option("--ledger", init_options.ledger_path, "ledger file to write")
      ->envname("BKD_LEDGER")
      ->required();
  init->add_option("--group", init_options.group_id, "group identifier")->required();
  auto* secret_hex =
      init->add_option("--secret-hex", init_options.secret_hex_path, "hex file with the secret");
  init->add_option("--generate", init_options.generate_bytes,
                   "generate a secret of this many bytes from local entropy")
      ->excludes(secret_hex);

  // beacon-serve
  bkd::cli::ServeOptions serve_options;
  auto* serve = app.add_subcommand("beacon-serve", "run a local randomness beacon");
  serve->add_option("--host", serve_options.host)->default_val("127.0.0.1");
  serve->add_option("--port", serve_options.port, "port (0 = ephemeral)")->default_val(8799);
  serve->add_option("--interval-ms", serve_options.interval_ms, "pulse cadence")
      ->default_val(1000);
  serve->add_option("--chain-file", serve_options.chain_file,
                    "resume from and persist the chain to this file");
  serve->add_option("--max-pulses", serve_options.max_pulses,
                    "stop after this many new pulses (0 = run until interrupted)");
  serve->add_option("--rng-seed", serve_options.rng_seed,
                    "deterministic randomness for tests (needs --insecure-test)");
  serve->add_flag("--insecure-test", serve_options.insecure_test,
                  "acknowledge test-only randomness");

  // beacon-export
  bkd::cli::ExportOptions export_options;
  auto* exporter = app.add_subcommand("beacon-export", "export a chain to a JSON-lines file");
  exporter->add_option("--beacon", export_options.beacon, "endpoint or chain file")->required();
  exporter->add_option("--out", export_options.out_path, "output file")->required();

  // verify-chain
  bkd::cli::VerifyChainOptions verify_options;
  auto* verify = app.add_subcommand("verify-chain", "verify a pulse chain end to end");
  verify->add_option("--beacon", verify_options.beacon, "endpoint or chain file")->required();

  // propose
  bkd::cli::ProposeOptions propose_options;
  auto* propose = app.add_subcommand("propose", "propose a new session key");
  add_common(propose, propose_options.common, /*needs_beacon=*/true);
  propose->add_option("--out", propose_options.out_path, "proposal file to write")->required();

  // accept
  bkd::cli::AcceptOptions accept_options;
  auto* accept = app.add_subcommand("accept", "accept a session proposal");
  add_common(accept, accept_options.common, /*needs_beacon=*/true);
  accept->add_option("--proposal", accept_options.proposal_path, "proposal file to read")
      ->required();

  // status
  bkd::cli::StatusOptions status_options;
  auto* status = app.add_subcommand("status", "report key-block lifecycle state");
  add_common(status, status_options.common, /*needs_beacon=*/false);

  CLI11_PARSE(app, argc, argv);

  if (init->parsed()) {
    return bkd::cli::cmd_init(init_options, std::cout, std::cerr);
  }
  if (serve->parsed()) {
    return bkd::cli::cmd_beacon_serve(serve_options, std::cout, std::cerr);
  }
  if (exporter->parsed()) {
    return bkd::cli::cmd_beacon_export(export_options, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return bkd::cli::cmd_verify_chain(verify_options, std::cout, std::cerr);
  }
  if (propose->parsed()) {
    return bkd::cli::cmd_propose(propose_options, std::cout, std::cerr);
  }
  if (accept->parsed()) {
    return bkd::cli::cmd_accept(accept_options, std::cout, std::cerr);
  }
  if (status->parsed()) {
    return bkd::cli::cmd_status(status_options, std::cout, std::cerr);
  }
  return bkd::cli::kExitUsage;
}

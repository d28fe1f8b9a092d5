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

#include <benchmark/benchmark.h>

#include "bkd/agreement.hpp"
#include "bkd/beacon.hpp"
#include "bkd/keys.hpp"
#include "bkd/ledger.hpp"

namespace {

bkd::Pulse sample_pulse() {
  bkd::SeededEntropy entropy(1);
  return bkd::genesis_pulse(entropy, 1700000000);
}

bkd::KeyBlock sample_block() {
  bkd::SeededEntropy entropy(2);
  bkd::KeyBlock block;
  block.index = 1;
  entropy.fill(block.bytes);
  return block;
}

void BM_DeriveSessionAes(benchmark::State& state) {
  const bkd::KeyBlock block = sample_block();
  const bkd::Pulse pulse = sample_pulse();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bkd::derive_session_aes(block, pulse));
  }
}
BENCHMARK(BM_DeriveSessionAes);

void BM_DeriveSessionSha3(benchmark::State& state) {
  const bkd::KeyBlock block = sample_block();
  const bkd::Pulse pulse = sample_pulse();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bkd::derive_session_sha3(block, pulse));
  }
}
BENCHMARK(BM_DeriveSessionSha3);

void BM_MacCompute(benchmark::State& state) {
  bkd::KeyBlock auth = sample_block();
  auth.index = 0;
  const bkd::Bytes transcript(static_cast<std::size_t>(state.range(0)), 0x5a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bkd::mac_compute(auth, transcript));
  }
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MacCompute)->Arg(128)->Arg(4096);

void BM_NextPulse(benchmark::State& state) {
  bkd::SeededEntropy entropy(3);
  bkd::Pulse pulse = bkd::genesis_pulse(entropy, 1);
  std::uint64_t t = 2;
  for (auto _ : state) {
    pulse = bkd::next_pulse(pulse, entropy, t++);
    benchmark::DoNotOptimize(pulse);
  }
}
BENCHMARK(BM_NextPulse);

void BM_VerifyChain(benchmark::State& state) {
  bkd::SeededEntropy entropy(4);
  std::vector<bkd::Pulse> chain;
  chain.push_back(bkd::genesis_pulse(entropy, 1));
  for (int i = 1; i < state.range(0); ++i) {
    chain.push_back(bkd::next_pulse(chain.back(), entropy, 1 + i));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(bkd::verify_chain(chain));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VerifyChain)->Arg(100)->Arg(1000);

void BM_ProposeAccept(benchmark::State& state) {
  bkd::SeededEntropy entropy(5);
  std::mt19937_64 rng(6);
  bkd::Bytes secret_bytes(32 * 64);
  for (auto& b : secret_bytes) {
    b = static_cast<std::uint8_t>(rng());
  }
  const bkd::MasterSecret secret{secret_bytes};

  bkd::PulseStore store;
  for (int i = 0; i < 40; ++i) {
    bkd::advance_chain(store, entropy, 1 + i);
  }

  for (auto _ : state) {
    state.PauseTiming();
    bkd::Ledger proposer = bkd::init_ledger(secret, "bench");
    bkd::Ledger acceptor = bkd::init_ledger(secret, "bench");
    state.ResumeTiming();

    const bkd::ProposeResult proposed =
        bkd::propose_session(proposer, store, entropy, bkd::SuiteId::kAesComposeV1, 10);
    benchmark::DoNotOptimize(bkd::accept_session(acceptor, store, proposed.proposal));
  }
}
BENCHMARK(BM_ProposeAccept);

}  // namespace

BENCHMARK_MAIN();

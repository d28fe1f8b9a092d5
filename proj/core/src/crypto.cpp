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

#include "bkd/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <memory>
#include <stdexcept>

namespace bkd {

namespace {

struct EvpMdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

struct EvpCipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};

}  // namespace

Digest32 sha3_256(std::span<const std::uint8_t> data) {
  std::unique_ptr<EVP_MD_CTX, EvpMdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1) {
    throw std::runtime_error("SHA3-256 init failed");
  }
  if (!data.empty() && EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1) {
    throw std::runtime_error("SHA3-256 update failed");
  }
  Digest32 out{};
  unsigned int out_len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &out_len) != 1 || out_len != out.size()) {
    throw std::runtime_error("SHA3-256 final failed");
  }
  return out;
}

Block16 aes256_encrypt_block(std::span<const std::uint8_t> key32,
                             std::span<const std::uint8_t> plaintext16) {
  if (key32.size() != 32 || plaintext16.size() != 16) {
    throw std::invalid_argument("aes256_encrypt_block: key must be 32 bytes, block 16");
  }
  std::unique_ptr<EVP_CIPHER_CTX, EvpCipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ecb(), nullptr, key32.data(), nullptr) != 1) {
    throw std::runtime_error("AES-256 init failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx.get(), 0);
  Block16 out{};
  int out_len = 0;
  if (EVP_EncryptUpdate(ctx.get(), out.data(), &out_len, plaintext16.data(), 16) != 1 ||
      out_len != 16) {
    throw std::runtime_error("AES-256 block encryption failed");
  }
  int fin_len = 0;
  std::uint8_t tail[16];
  if (EVP_EncryptFinal_ex(ctx.get(), tail, &fin_len) != 1 || fin_len != 0) {
    throw std::runtime_error("AES-256 finalization failed");
  }
  return out;
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  if (out.empty()) {
    return;
  }
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::kEntropyUnavailable, "platform RNG failure");
  }
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * b));
    }
  }
}

std::uint64_t uniform_below(EntropySource& rng, std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: bound must be positive");
  }
  // Reject draws below (2^64 - bound) mod bound; the remaining range is an
  // exact multiple of bound, so the modulo is unbiased.
  const std::uint64_t min = (0 - bound) % bound;
  for (;;) {
    std::array<std::uint8_t, 8> raw{};
    rng.fill(raw);
    std::uint64_t draw = 0;
    for (int i = 0; i < 8; ++i) {
      draw |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
    }
    if (draw >= min) {
      return draw % bound;
    }
  }
}

}  // namespace bkd

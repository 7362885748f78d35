/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "apvas/bytes.hpp"

// Per-hop signature of the conventional suite: ECDSA over P-384 with SHA-384,
// deterministic nonces (RFC 6979), raw r || s encoding.

namespace apvas::baseline {

inline constexpr std::size_t kSecretBytes = 48;
inline constexpr std::size_t kPublicKeyBytes = 97;  // 0x04 || x || y
inline constexpr std::size_t kSignatureBytes = 96;

using Signature = std::array<std::uint8_t, kSignatureBytes>;
using Secret = std::array<std::uint8_t, kSecretBytes>;

class SigningKey {
 public:
  // Throws RangeError unless 1 <= d < n.
  static SigningKey from_secret(const Secret& d);

  // d drawn by rejection sampling from 48 bytes of rng output.
  template <class Urbg>
  static SigningKey generate(Urbg& rng) {
    for (;;) {
      Secret d{};
      for (auto& b : d) b = static_cast<std::uint8_t>(rng());
      if (in_range(d)) return from_secret(d);
    }
  }

  const Secret& secret() const { return d_; }
  const Bytes& public_key() const { return pub_; }

  Signature sign(ByteView msg) const;

 private:
  static bool in_range(const Secret& d);

  Secret d_{};
  Bytes pub_;
};

// The RFC 6979 nonce for (d, SHA-384(msg)); exposed for test vectors.
Bytes deterministic_nonce(const Secret& d, ByteView msg);

class VerifyingKey {
 public:
  // Throws DecodeError if the bytes are not an uncompressed P-384 point.
  static VerifyingKey from_bytes(ByteView public_key);

  bool verify(ByteView msg, const Signature& sig) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace apvas::baseline

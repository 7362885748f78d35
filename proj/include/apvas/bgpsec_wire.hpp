/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "apvas/bytes.hpp"

// Update message codecs for the plain, conventional (per-hop signature) and
// APVAS (single aggregate) suites. Byte layouts are documented in docs/formats.md.
//
//   suite(1) || secure_path_len(2) || segments || sig_block || nlri
//
// secure_path_len counts itself: 2 + 6N. Segments are most recent AS first.

namespace apvas::wire {

enum class Suite : std::uint8_t { plain = 0x00, conventional = 0x01, apvas = 0xA1 };

inline constexpr std::size_t kSkiBytes = 20;
inline constexpr std::size_t kSegmentBytes = 6;
inline constexpr std::size_t kSigmaBytes = 64;
inline constexpr std::size_t kBaselineSigBytes = 96;

using Ski = std::array<std::uint8_t, kSkiBytes>;

// First 20 bytes of SHA-256 over an encoded public key.
Ski ski_of(ByteView public_key);

const char* suite_name(Suite s);
// Accepts "plain", "conventional", "apvas"; throws ConfigError otherwise.
Suite parse_suite(std::string_view name);

struct Nlri {
  std::uint8_t prefix_len = 0;
  std::array<std::uint8_t, 4> prefix{};

  std::size_t encoded_size() const { return 1 + (prefix_len + 7u) / 8u; }
  std::string to_string() const;  // "198.18.0.0/24"
  friend bool operator==(const Nlri&, const Nlri&) = default;
  friend auto operator<=>(const Nlri&, const Nlri&) = default;
};

struct SecurePathSegment {
  std::uint8_t pcount = 1;
  std::uint8_t flags = 0;
  std::uint32_t as_number = 0;

  friend bool operator==(const SecurePathSegment&, const SecurePathSegment&) = default;
};

struct SignatureSegment {
  Ski ski{};
  Bytes sig;  // 96 bytes for the baseline scheme

  friend bool operator==(const SignatureSegment&, const SignatureSegment&) = default;
};

// suite 0x01 || N x (ski(20) || sig_len(2) || sig)
struct SignatureBlockConventional {
  std::vector<SignatureSegment> segments;  // same order as secure_path

  friend bool operator==(const SignatureBlockConventional&, const SignatureBlockConventional&) = default;
};

// suite 0xA1 || sig_len(2) = 64 || sigma(64) || N x ski(20)
struct SignatureBlockApvas {
  std::array<std::uint8_t, kSigmaBytes> sigma{};
  std::vector<Ski> skis;  // same order as secure_path

  friend bool operator==(const SignatureBlockApvas&, const SignatureBlockApvas&) = default;
};

using SignatureBlock = std::variant<std::monostate, SignatureBlockConventional, SignatureBlockApvas>;

struct UpdateMessage {
  Nlri nlri;
  std::vector<SecurePathSegment> secure_path;  // most recent AS first; back() is the origin
  SignatureBlock sig_block;

  Suite suite() const;
  friend bool operator==(const UpdateMessage&, const UpdateMessage&) = default;
};

// Throws EncodeError naming the offending field.
Bytes encode_update(const UpdateMessage& msg);
Bytes encode_nlri(const Nlri& nlri);
Bytes encode_segments(std::span<const SecurePathSegment> segments);

// Throws DecodeError with the byte offset of the failure.
UpdateMessage decode_update(ByteView bytes);

// One decoded field for `inspect`.
struct FieldTrace {
  std::size_t offset;
  std::size_t length;
  std::string name;
  std::string value;
};
UpdateMessage decode_update_traced(ByteView bytes, std::vector<FieldTrace>& trace);

std::size_t sig_block_size(Suite suite, std::size_t path_len);

// target_as(4) || segments from the origin through signer_position in wire
// order || suite(1) || nlri. Position 1 is the origin. No signature bytes.
// Throws RangeError when signer_position is 0 or beyond the path.
Bytes build_signed_octets(std::uint32_t target_as, const UpdateMessage& msg, std::size_t signer_position);

// The message each signer of msg's path signed, origin first, when receiver_as
// is the AS that received msg: signer k targeted the AS at position k + 1.
std::vector<Bytes> signed_octets_along_path(const UpdateMessage& msg, std::uint32_t receiver_as);

}  // namespace apvas::wire

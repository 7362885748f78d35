/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "apvas/bytes.hpp"
#include "apvas/pairing_core.hpp"

// Bimodal aggregate signatures: one G1 element sigma attests any number of
// signature chains. A chain is extended sequentially (each signer commits to
// the chain prefix and to e(sigma_chain, P)); independent chains are merged by
// adding their sigmas.
//
// Commitment transcript for entry i of a chain whose prefix (entries 1..i) is S:
//
//   head(384) || pk_i(64) || len(m_i)(4) || m_i || for j in S: pk_j(64) || len(m_j)(4) || m_j
//
// head is the canonical encoding of e(sigma_chain, P) before entry i signed
// (the target-group identity at the chain start). Entry i therefore appears
// twice. c_i = H(transcript) and the signer adds sk_i * H(encode(c_i)) to sigma.

namespace apvas::bimodal {

using bn254::G1Point;
using bn254::G2Point;
using bn254::GtElement;
using bn254::PreparedPoint;
using bn254::PublicParams;
using bn254::Scalar;

using PublicKeyBytes = std::array<std::uint8_t, bn254::kG2Bytes>;

struct KeyPair {
  Scalar sk;
  G2Point pk;
  PublicKeyBytes pk_bytes{};
};

// sk must be non-zero.
KeyPair key_from_secret(const PublicParams& params, const Scalar& sk);

// sk uniform in [1, order).
template <class Urbg>
KeyPair user_key_gen(const PublicParams& params, Urbg& rng) {
  return key_from_secret(params, bn254::scalar_random(rng));
}

struct ChainEntry {
  PublicKeyBytes pk{};
  Bytes m;

  friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

using Chain = std::vector<ChainEntry>;

struct SignatureClaim {
  G1Point sigma;
  std::vector<Chain> chains;

  std::size_t entry_count() const;

  // sigma(64) || u16 chain count || per chain: u16 entry count || per entry:
  // pk(64) || u32 len || m. Throws EncodeError when a count does not fit.
  Bytes serialize() const;
  // Checks lengths and point encodings; does not verify.
  static SignatureClaim deserialize(ByteView in);

  friend bool operator==(const SignatureClaim&, const SignatureClaim&) = default;
};

// Decoded and prepared public keys, keyed by encoding. Not thread-safe; give
// each thread its own cache.
class KeyCache {
 public:
  // Throws DecodeError for an invalid encoding.
  const PreparedPoint& get(const PublicKeyBytes& pk);
  void insert(const KeyPair& kp);
  void insert(const PublicKeyBytes& pk, const PreparedPoint& prepared);
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<PublicKeyBytes, PreparedPoint> keys_;
};

Bytes commitment_transcript(const GtElement& head, const ChainEntry& entry, std::span<const ChainEntry> prefix);

// c = H(transcript) with head = e(sigma_prev, P).
G1Point chain_commitment(const PublicParams& params, const G1Point& sigma_prev, const ChainEntry& entry,
                         std::span<const ChainEntry> prefix);
G1Point chain_commitment_from_head(const PublicParams& params, const GtElement& head, const ChainEntry& entry,
                                   std::span<const ChainEntry> prefix);

// e(sigma_chain, P) rebuilt from the chain alone: the product of e(H(encode(c_k)), X_k).
// Throws DecodeError for an invalid public key.
GtElement chain_head(const PublicParams& params, std::span<const ChainEntry> chain, KeyCache* cache = nullptr);

inline constexpr std::size_t kNewChain = static_cast<std::size_t>(-1);

// Appends (kp.pk, m) to chains[chain_index], or starts a new chain when
// chain_index == kNewChain. The head for an existing chain is, in order of
// preference: known_head; e(sigma, P) when the claim has one chain; the
// reconstruction by chain_head. Throws DuplicateEntryError, RangeError.
SignatureClaim seq_agg_sign(const PublicParams& params, const KeyPair& kp, ByteView m, const SignatureClaim& claim,
                            std::size_t chain_index, const GtElement* known_head = nullptr,
                            KeyCache* cache = nullptr);

// sigma1 + sigma2 with chains1 || chains2. Throws DuplicateEntryError on overlap.
SignatureClaim agg_sign(const SignatureClaim& claim1, const SignatureClaim& claim2);

// Per-chain heads when the claim is valid; nullopt otherwise.
std::optional<std::vector<GtElement>> verify_chains(const PublicParams& params, const SignatureClaim& claim,
                                                    KeyCache* cache = nullptr);

// False on an empty claim, an empty chain, repeated (pk, m), an identity key,
// or a pairing mismatch. Throws DecodeError for an undecodable public key.
bool verify(const PublicParams& params, const SignatureClaim& claim, KeyCache* cache = nullptr);

}  // namespace apvas::bimodal

/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/bimodal_sig.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

namespace apvas::bimodal {

namespace {

using PairKey = std::pair<PublicKeyBytes, Bytes>;

std::set<PairKey> pair_set(const SignatureClaim& claim) {
  std::set<PairKey> out;
  for (const auto& chain : claim.chains) {
    for (const auto& e : chain) out.emplace(e.pk, e.m);
  }
  return out;
}

void put_entry(ByteWriter& w, const ChainEntry& e) {
  if (e.m.size() > std::numeric_limits<std::uint32_t>::max()) throw EncodeError("m", "longer than 2^32-1 bytes");
  w.bytes(e.pk);
  w.u32(static_cast<std::uint32_t>(e.m.size()));
  w.bytes(e.m);
}

const PreparedPoint& lookup(KeyCache* cache, KeyCache& local, const PublicKeyBytes& pk) {
  return cache ? cache->get(pk) : local.get(pk);
}

// H(encode(c)) for the entry at position k of chain.
G1Point entry_point(const PublicParams& params, const GtElement& head, std::span<const ChainEntry> chain,
                    std::size_t k) {
  G1Point c = chain_commitment_from_head(params, head, chain[k], chain.first(k + 1));
  return bn254::hash_to_group(params, c.to_bytes());
}

}  // namespace

KeyPair key_from_secret(const PublicParams& params, const Scalar& sk) {
  if (sk.is_zero()) throw RangeError("secret key must be non-zero");
  KeyPair kp;
  kp.sk = sk;
  kp.pk = bn254::scalar_mul(sk, params.generator.point());
  kp.pk_bytes = kp.pk.to_bytes();
  return kp;
}

std::size_t SignatureClaim::entry_count() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.size();
  return n;
}

Bytes SignatureClaim::serialize() const {
  if (chains.size() > 0xffff) throw EncodeError("chains", "more than 65535 chains");
  ByteWriter w;
  w.bytes(sigma.to_bytes());
  w.u16(static_cast<std::uint16_t>(chains.size()));
  for (const auto& chain : chains) {
    if (chain.size() > 0xffff) throw EncodeError("chain", "more than 65535 entries");
    w.u16(static_cast<std::uint16_t>(chain.size()));
    for (const auto& e : chain) put_entry(w, e);
  }
  return std::move(w).take();
}

SignatureClaim SignatureClaim::deserialize(ByteView in) {
  ByteReader r(in);
  SignatureClaim claim;
  claim.sigma = G1Point::from_bytes(r.take(bn254::kG1Bytes, "sigma"));
  const std::uint16_t chain_count = r.u16("chain count");
  claim.chains.reserve(chain_count);
  for (std::uint16_t i = 0; i < chain_count; ++i) {
    const std::uint16_t entries = r.u16("entry count");
    Chain chain;
    chain.reserve(entries);
    for (std::uint16_t j = 0; j < entries; ++j) {
      ChainEntry e;
      ByteView pk = r.take(bn254::kG2Bytes, "public key");
      std::copy(pk.begin(), pk.end(), e.pk.begin());
      const std::uint32_t len = r.u32("message length");
      ByteView m = r.take(len, "message");
      e.m.assign(m.begin(), m.end());
      chain.push_back(std::move(e));
    }
    claim.chains.push_back(std::move(chain));
  }
  r.expect_end();
  return claim;
}

const PreparedPoint& KeyCache::get(const PublicKeyBytes& pk) {
  auto it = keys_.find(pk);
  if (it != keys_.end()) return it->second;
  return keys_.emplace(pk, PreparedPoint(G2Point::from_bytes(pk))).first->second;
}

void KeyCache::insert(const KeyPair& kp) {
  if (!keys_.contains(kp.pk_bytes)) keys_.emplace(kp.pk_bytes, PreparedPoint(kp.pk));
}

void KeyCache::insert(const PublicKeyBytes& pk, const PreparedPoint& prepared) { keys_.try_emplace(pk, prepared); }

Bytes commitment_transcript(const GtElement& head, const ChainEntry& entry, std::span<const ChainEntry> prefix) {
  ByteWriter w;
  w.bytes(head.to_bytes());
  put_entry(w, entry);
  for (const auto& e : prefix) put_entry(w, e);
  return std::move(w).take();
}

G1Point chain_commitment_from_head(const PublicParams& params, const GtElement& head, const ChainEntry& entry,
                                   std::span<const ChainEntry> prefix) {
  return bn254::hash_to_group(params, commitment_transcript(head, entry, prefix));
}

G1Point chain_commitment(const PublicParams& params, const G1Point& sigma_prev, const ChainEntry& entry,
                         std::span<const ChainEntry> prefix) {
  return chain_commitment_from_head(params, bn254::pairing(params, sigma_prev, params.generator), entry, prefix);
}

GtElement chain_head(const PublicParams& params, std::span<const ChainEntry> chain, KeyCache* cache) {
  KeyCache local;
  GtElement t;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const PreparedPoint& x = lookup(cache, local, chain[k].pk);
    t *= bn254::pairing(params, entry_point(params, t, chain, k), x);
  }
  return t;
}

SignatureClaim seq_agg_sign(const PublicParams& params, const KeyPair& kp, ByteView m, const SignatureClaim& claim,
                            std::size_t chain_index, const GtElement* known_head, KeyCache* cache) {
  if (chain_index != kNewChain && chain_index >= claim.chains.size()) {
    throw RangeError("chain index " + std::to_string(chain_index) + " out of range (" +
                     std::to_string(claim.chains.size()) + " chains)");
  }
  ChainEntry entry{kp.pk_bytes, Bytes(m.begin(), m.end())};
  for (const auto& chain : claim.chains) {
    if (std::find(chain.begin(), chain.end(), entry) != chain.end()) {
      throw DuplicateEntryError("(pk, m) pair already present in the claim");
    }
  }

  SignatureClaim out = claim;
  GtElement head;
  if (chain_index == kNewChain) {
    out.chains.emplace_back();
    chain_index = out.chains.size() - 1;
  } else if (known_head) {
    head = *known_head;
  } else if (claim.chains.size() == 1) {
    head = bn254::pairing(params, claim.sigma, params.generator);
  } else {
    head = chain_head(params, claim.chains[chain_index], cache);
  }

  Chain& chain = out.chains[chain_index];
  chain.push_back(std::move(entry));
  G1Point h = entry_point(params, head, chain, chain.size() - 1);
  out.sigma += bn254::scalar_mul(kp.sk, h);
  return out;
}

SignatureClaim agg_sign(const SignatureClaim& claim1, const SignatureClaim& claim2) {
  std::set<PairKey> seen = pair_set(claim1);
  for (const auto& chain : claim2.chains) {
    for (const auto& e : chain) {
      if (seen.contains({e.pk, e.m})) throw DuplicateEntryError("claims share a (pk, m) pair");
    }
  }
  SignatureClaim out = claim1;
  out.sigma += claim2.sigma;
  out.chains.insert(out.chains.end(), claim2.chains.begin(), claim2.chains.end());
  return out;
}

std::optional<std::vector<GtElement>> verify_chains(const PublicParams& params, const SignatureClaim& claim,
                                                    KeyCache* cache) {
  if (claim.chains.empty()) return std::nullopt;
  std::set<PairKey> seen;
  for (const auto& chain : claim.chains) {
    if (chain.empty()) return std::nullopt;
    for (const auto& e : chain) {
      if (!seen.emplace(e.pk, e.m).second) return std::nullopt;
    }
  }

  KeyCache local;
  std::vector<GtElement> heads;
  heads.reserve(claim.chains.size());
  GtElement product;
  for (const auto& chain : claim.chains) {
    GtElement t;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const PreparedPoint& x = lookup(cache, local, chain[k].pk);
      if (x.point().is_identity()) return std::nullopt;
      t *= bn254::pairing(params, entry_point(params, t, chain, k), x);
    }
    product *= t;
    heads.push_back(t);
  }
  if (bn254::pairing(params, claim.sigma, params.generator) != product) return std::nullopt;
  return heads;
}

bool verify(const PublicParams& params, const SignatureClaim& claim, KeyCache* cache) {
  return verify_chains(params, claim, cache).has_value();
}

}  // namespace apvas::bimodal

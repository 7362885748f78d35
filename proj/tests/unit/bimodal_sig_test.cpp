/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/bimodal_sig.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

using namespace apvas;
using namespace apvas::bimodal;

namespace {

class BimodalTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    params_ = new PublicParams(bn254::setup("bn254"));
    vectors_ = new nlohmann::json(test::load_json("bimodal_vectors.json"));
    std::mt19937_64 rng(404);
    keys_ = new std::vector<KeyPair>();
    for (int i = 0; i < 8; ++i) keys_->push_back(user_key_gen(*params_, rng));
  }
  static void TearDownTestSuite() {
    delete params_;
    delete vectors_;
    delete keys_;
  }

  const PublicParams& params() const { return *params_; }
  const KeyPair& key(std::size_t i) const { return (*keys_)[i]; }

  SignatureClaim sign(const KeyPair& kp, const std::string& m, const SignatureClaim& claim,
                      std::size_t chain = kNewChain) {
    return seq_agg_sign(params(), kp, to_bytes(m), claim, chain, nullptr, &cache_);
  }

  bool ok(const SignatureClaim& claim) { return verify(params(), claim, &cache_); }

  KeyCache cache_;
  static PublicParams* params_;
  static nlohmann::json* vectors_;
  static std::vector<KeyPair>* keys_;
};

PublicParams* BimodalTest::params_ = nullptr;
nlohmann::json* BimodalTest::vectors_ = nullptr;
std::vector<KeyPair>* BimodalTest::keys_ = nullptr;

std::string hex_of(const auto& bytes) { return to_hex(ByteView(bytes.data(), bytes.size())); }

}  // namespace

TEST_F(BimodalTest, KeygenMatchesReference) {
  for (const auto& v : (*vectors_)["keygen"]) {
    std::mt19937_64 rng(v["seed"].get<std::uint64_t>());
    KeyPair kp = user_key_gen(params(), rng);
    EXPECT_EQ(hex_of(kp.sk.to_bytes()), v["sk"].get<std::string>());
    EXPECT_EQ(hex_of(kp.pk_bytes), v["pk"].get<std::string>());
    EXPECT_EQ(kp.pk.to_bytes(), kp.pk_bytes);
  }
}

TEST_F(BimodalTest, PublicKeySatisfiesPairingRelation) {
  G1Point hx = bn254::hash_to_group(params(), to_bytes("x"));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(bn254::pairing(params(), hx, key(i).pk), bn254::pairing(params(), hx, params().generator).pow(key(i).sk));
  }
}

TEST_F(BimodalTest, DistinctSeedsGiveDistinctKeys) {
  std::mt19937_64 a(1), b(2);
  EXPECT_NE(user_key_gen(params(), a).sk, user_key_gen(params(), b).sk);
  EXPECT_THROW(key_from_secret(params(), Scalar()), RangeError);
}

TEST_F(BimodalTest, ChainStartMatchesReference) {
  const auto& v = (*vectors_)["chain_start"];
  std::mt19937_64 rng(1);
  KeyPair kp = user_key_gen(params(), rng);
  ChainEntry e{kp.pk_bytes, from_hex(v["m"].get<std::string>())};
  std::vector<ChainEntry> prefix{e};
  EXPECT_EQ(to_hex(commitment_transcript(GtElement::identity(), e, prefix)), v["transcript"].get<std::string>());
  G1Point c = chain_commitment(params(), G1Point(), e, prefix);
  EXPECT_EQ(hex_of(c.to_bytes()), v["commitment"].get<std::string>());
  EXPECT_EQ(c, chain_commitment_from_head(params(), GtElement::identity(), e, prefix));

  SignatureClaim claim = seq_agg_sign(params(), kp, e.m, SignatureClaim{}, kNewChain);
  EXPECT_EQ(hex_of(claim.sigma.to_bytes()), v["sigma"].get<std::string>());
}

TEST_F(BimodalTest, ChainExtensionMatchesReference) {
  const auto& v = (*vectors_)["chain_extend"];
  std::mt19937_64 r1(1), r2(2);
  KeyPair k1 = user_key_gen(params(), r1), k2 = user_key_gen(params(), r2);
  SignatureClaim claim = seq_agg_sign(params(), k1, to_bytes("A"), SignatureClaim{}, kNewChain);
  GtElement head = bn254::pairing(params(), claim.sigma, params().generator);
  EXPECT_EQ(hex_of(head.to_bytes()), v["head"].get<std::string>());

  claim = seq_agg_sign(params(), k2, to_bytes("B"), claim, 0);
  EXPECT_EQ(hex_of(claim.sigma.to_bytes()), v["sigma"].get<std::string>());
  EXPECT_EQ(to_hex(claim.serialize()), v["claim"].get<std::string>());
  ChainEntry e2{k2.pk_bytes, to_bytes("B")};
  EXPECT_EQ(hex_of(chain_commitment(params(), seq_agg_sign(params(), k1, to_bytes("A"), {}, kNewChain).sigma, e2,
                                    claim.chains[0])
                       .to_bytes()),
            v["commitment"].get<std::string>());
  EXPECT_TRUE(ok(claim));
}

TEST_F(BimodalTest, CommitmentIsSensitiveToMessage) {
  ChainEntry a{key(0).pk_bytes, to_bytes("message")};
  ChainEntry b{key(0).pk_bytes, to_bytes("messagf")};
  EXPECT_NE(chain_commitment(params(), G1Point(), a, std::vector{a}),
            chain_commitment(params(), G1Point(), b, std::vector{b}));
}

TEST_F(BimodalTest, SingleSignerVerifies) {
  SignatureClaim claim = sign(key(0), "origin", {});
  ASSERT_EQ(claim.chains.size(), 1u);
  EXPECT_TRUE(ok(claim));
  // e(sigma, P) = e(H(c_1), X_1)
  G1Point c = chain_commitment(params(), G1Point(), claim.chains[0][0], claim.chains[0]);
  EXPECT_EQ(bn254::pairing(params(), claim.sigma, params().generator),
            bn254::pairing(params(), bn254::hash_to_group(params(), c.to_bytes()), key(0).pk));
}

TEST_F(BimodalTest, ChainVerifiesAtEveryStep) {
  SignatureClaim claim;
  for (int i = 0; i < 3; ++i) {
    claim = sign(key(i), "hop" + std::to_string(i), claim, i == 0 ? kNewChain : 0);
    EXPECT_TRUE(ok(claim)) << "after signer " << i;
  }
  EXPECT_EQ(claim.chains[0].size(), 3u);
}

TEST_F(BimodalTest, HeadSourcesAgree) {
  SignatureClaim a = sign(key(0), "a0", {});
  a = sign(key(1), "a1", a, 0);
  SignatureClaim b = sign(key(2), "b0", {});
  SignatureClaim merged = agg_sign(a, b);

  // Single chain: head from e(sigma, P). Multi-chain: reconstruction. Explicit: caller-provided.
  SignatureClaim via_sigma = agg_sign(sign(key(3), "x", a, 0), b);
  SignatureClaim via_rebuild = sign(key(3), "x", merged, 0);
  GtElement head = chain_head(params(), a.chains[0]);
  SignatureClaim via_known = seq_agg_sign(params(), key(3), to_bytes("x"), merged, 0, &head);
  EXPECT_EQ(via_sigma, via_rebuild);
  EXPECT_EQ(via_rebuild, via_known);
  EXPECT_TRUE(ok(via_rebuild));
  EXPECT_EQ(head, bn254::pairing(params(), a.sigma, params().generator));
}

TEST_F(BimodalTest, DuplicatePairIsRejectedBySigning) {
  SignatureClaim claim = sign(key(0), "m", {});
  EXPECT_THROW(sign(key(0), "m", claim, 0), DuplicateEntryError);
  EXPECT_THROW(sign(key(0), "m", claim), DuplicateEntryError);
  EXPECT_NO_THROW(sign(key(0), "m2", claim, 0));
  EXPECT_THROW(sign(key(1), "m", claim, 1), RangeError);
}

TEST_F(BimodalTest, AggregationOfIndependentChains) {
  SignatureClaim a = sign(key(0), "a", {});
  SignatureClaim b = sign(key(1), "b", {});
  SignatureClaim ab = agg_sign(a, b);
  EXPECT_TRUE(ok(ab));
  EXPECT_EQ(ab.chains.size(), 2u);
  EXPECT_EQ(ab.chains[0], a.chains[0]);
  EXPECT_EQ(agg_sign(a, SignatureClaim{}), a);
  EXPECT_THROW(agg_sign(ab, a), DuplicateEntryError);
}

TEST_F(BimodalTest, TwoHundredFiftySingleEntryChains) {
  SignatureClaim claim;
  for (int i = 0; i < 250; ++i) claim = agg_sign(claim, sign(key(i % 8), "path-" + std::to_string(i), {}));
  EXPECT_EQ(claim.chains.size(), 250u);
  EXPECT_EQ(claim.sigma.to_bytes().size(), 64u);
  EXPECT_TRUE(ok(claim));
}

TEST_F(BimodalTest, RepeatedPairAcrossChainsIsFalse) {
  SignatureClaim a = sign(key(0), "same", {});
  SignatureClaim twice = a;
  twice.chains.push_back(a.chains[0]);
  twice.sigma = a.sigma + a.sigma;
  EXPECT_FALSE(ok(twice));
}

TEST_F(BimodalTest, DegenerateClaimsAreFalse) {
  EXPECT_FALSE(ok(SignatureClaim{}));
  SignatureClaim a = sign(key(0), "a", {});
  SignatureClaim with_empty = a;
  with_empty.chains.emplace_back();
  EXPECT_FALSE(ok(with_empty));

  // Identity public key: the entry contributes nothing to the product, so sigma alone would check out.
  SignatureClaim rogue = a;
  rogue.chains.push_back({ChainEntry{PublicKeyBytes{}, to_bytes("free")}});
  EXPECT_FALSE(ok(rogue));
}

TEST_F(BimodalTest, TamperingIsDetected) {
  SignatureClaim claim = sign(key(0), "m0", {});
  claim = sign(key(1), "m1", claim, 0);
  claim = sign(key(2), "m2", claim, 0);
  ASSERT_TRUE(ok(claim));

  SignatureClaim m = claim;
  m.chains[0][1].m[0] ^= 0x01;
  EXPECT_FALSE(ok(m));

  SignatureClaim s = claim;
  std::swap(s.chains[0][0], s.chains[0][1]);
  EXPECT_FALSE(ok(s));

  SignatureClaim k = claim;
  k.chains[0][2].pk = key(5).pk_bytes;
  EXPECT_FALSE(ok(k));

  SignatureClaim g = claim;
  g.sigma = g.sigma + G1Point::generator();
  EXPECT_FALSE(ok(g));

  // A flipped bit in the encoded sigma either fails to decode or verifies false.
  Bytes wire = claim.serialize();
  for (int bit : {0, 7, 100, 511}) {
    Bytes t = wire;
    t[static_cast<std::size_t>(bit / 8)] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      EXPECT_FALSE(ok(SignatureClaim::deserialize(t))) << "bit " << bit;
    } catch (const DecodeError&) {
    }
  }
}

TEST_F(BimodalTest, ChainOrderInsideClaimDoesNotMatter) {
  SignatureClaim claim;
  for (int c = 0; c < 4; ++c) {
    SignatureClaim chain = sign(key(c), "c" + std::to_string(c), {});
    chain = sign(key(c + 4), "d" + std::to_string(c), chain, 0);
    claim = agg_sign(claim, chain);
  }
  ASSERT_TRUE(ok(claim));
  std::mt19937 rng(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(claim.chains.begin(), claim.chains.end(), rng);
    EXPECT_TRUE(ok(claim));
  }
}

TEST_F(BimodalTest, SerializationRoundTripAndErrors) {
  SignatureClaim claim = sign(key(0), "", {});
  claim = sign(key(1), std::string(300, 'x'), claim, 0);
  claim = agg_sign(claim, sign(key(2), "z", {}));
  Bytes wire = claim.serialize();
  EXPECT_EQ(wire.size(), 64u + 2 + (2 + 68 + 0 + 68 + 300) + (2 + 68 + 1));
  EXPECT_EQ(SignatureClaim::deserialize(wire), claim);

  Bytes truncated(wire.begin(), wire.end() - 1);
  try {
    SignatureClaim::deserialize(truncated);
    ADD_FAILURE() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), wire.size() - 1);
  }
  Bytes trailing = wire;
  trailing.push_back(0);
  EXPECT_THROW(SignatureClaim::deserialize(trailing), DecodeError);

  SignatureClaim bad_pk = claim;
  bad_pk.chains[0][0].pk[5] ^= 0xff;
  EXPECT_THROW(verify(params(), SignatureClaim::deserialize(bad_pk.serialize())), DecodeError);
}

TEST_F(BimodalTest, RandomInterleavingsVerify) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<SignatureClaim> pool;
    int counter = 0;
    const int steps = 2 + static_cast<int>(rng() % 10);
    for (int s = 0; s < steps; ++s) {
      const auto op = rng() % 3;
      const KeyPair& kp = key(rng() % 8);
      std::string m = "t" + std::to_string(trial) + "-" + std::to_string(counter++);
      if (pool.empty() || op == 0) {
        pool.push_back(sign(kp, m, {}));
      } else if (op == 1) {
        SignatureClaim& c = pool[rng() % pool.size()];
        c = sign(kp, m, c, rng() % c.chains.size());
      } else if (pool.size() >= 2) {
        SignatureClaim b = pool.back();
        pool.pop_back();
        SignatureClaim& a = pool[rng() % pool.size()];
        a = agg_sign(a, b);
      }
    }
    SignatureClaim all;
    for (const auto& c : pool) all = agg_sign(all, c);
    EXPECT_TRUE(ok(all)) << "trial " << trial;
  }
}

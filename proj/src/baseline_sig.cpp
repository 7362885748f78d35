/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/baseline_sig.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/param_build.h>
#include <openssl/sha.h>

#include <algorithm>

namespace apvas::baseline {

namespace {

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, Deleter<BIGNUM, BN_free>>;
using CtxPtr = std::unique_ptr<BN_CTX, Deleter<BN_CTX, BN_CTX_free>>;
using PointPtr = std::unique_ptr<EC_POINT, Deleter<EC_POINT, EC_POINT_free>>;
using SigPtr = std::unique_ptr<ECDSA_SIG, Deleter<ECDSA_SIG, ECDSA_SIG_free>>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, Deleter<EVP_PKEY, EVP_PKEY_free>>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, Deleter<EVP_PKEY_CTX, EVP_PKEY_CTX_free>>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, Deleter<EVP_MD_CTX, EVP_MD_CTX_free>>;
using ParamBldPtr = std::unique_ptr<OSSL_PARAM_BLD, Deleter<OSSL_PARAM_BLD, OSSL_PARAM_BLD_free>>;
using ParamPtr = std::unique_ptr<OSSL_PARAM, Deleter<OSSL_PARAM, OSSL_PARAM_free>>;

void check(bool ok, const char* what) {
  if (!ok) throw Error(std::string("openssl: ") + what + " failed");
}

const EC_GROUP* group() {
  static const EC_GROUP* g = EC_GROUP_new_by_curve_name(NID_secp384r1);
  return g;
}

const BIGNUM* order() { return EC_GROUP_get0_order(group()); }

BnPtr bn_from(ByteView bytes) {
  BnPtr v(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
  check(v != nullptr, "BN_bin2bn");
  return v;
}

std::array<std::uint8_t, kSecretBytes> bn_bytes(const BIGNUM* v) {
  std::array<std::uint8_t, kSecretBytes> out{};
  check(BN_bn2binpad(v, out.data(), static_cast<int>(out.size())) == static_cast<int>(out.size()), "BN_bn2binpad");
  return out;
}

std::array<std::uint8_t, SHA384_DIGEST_LENGTH> hmac(ByteView key, ByteView data) {
  std::array<std::uint8_t, SHA384_DIGEST_LENGTH> out{};
  unsigned int len = 0;
  check(HMAC(EVP_sha384(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(), &len) !=
            nullptr,
        "HMAC");
  return out;
}

Bytes cat(std::initializer_list<ByteView> parts) {
  Bytes out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// HMAC_DRBG stream of RFC 6979 candidates. qlen = hlen = 384, so bits2int is plain big-endian.
class NonceStream {
 public:
  NonceStream(const Secret& d, ByteView digest) {
    BnPtr h = bn_from(digest);
    CtxPtr ctx(BN_CTX_new());
    check(BN_nnmod(h.get(), h.get(), order(), ctx.get()) == 1, "BN_nnmod");
    auto h_octets = bn_bytes(h.get());
    k_.fill(0x00);
    v_.fill(0x01);
    const std::uint8_t zero = 0x00, one = 0x01;
    k_ = hmac(k_, cat({v_, {&zero, 1}, d, h_octets}));
    v_ = hmac(k_, v_);
    k_ = hmac(k_, cat({v_, {&one, 1}, d, h_octets}));
    v_ = hmac(k_, v_);
  }

  BnPtr next() {
    for (;;) {
      if (started_) {
        const std::uint8_t zero = 0x00;
        k_ = hmac(k_, cat({v_, {&zero, 1}}));
        v_ = hmac(k_, v_);
      }
      started_ = true;
      v_ = hmac(k_, v_);
      BnPtr k = bn_from(v_);
      if (!BN_is_zero(k.get()) && BN_cmp(k.get(), order()) < 0) return k;
    }
  }

 private:
  std::array<std::uint8_t, SHA384_DIGEST_LENGTH> k_{}, v_{};
  bool started_ = false;
};

std::array<std::uint8_t, SHA384_DIGEST_LENGTH> sha384(ByteView msg) {
  std::array<std::uint8_t, SHA384_DIGEST_LENGTH> out{};
  SHA384(msg.data(), msg.size(), out.data());
  return out;
}

}  // namespace

bool SigningKey::in_range(const Secret& d) {
  BnPtr v = bn_from(d);
  return !BN_is_zero(v.get()) && BN_cmp(v.get(), order()) < 0;
}

SigningKey SigningKey::from_secret(const Secret& d) {
  if (!in_range(d)) throw RangeError("P-384 secret out of range");
  SigningKey key;
  key.d_ = d;
  BnPtr dv = bn_from(d);
  CtxPtr ctx(BN_CTX_new());
  PointPtr q(EC_POINT_new(group()));
  check(EC_POINT_mul(group(), q.get(), dv.get(), nullptr, nullptr, ctx.get()) == 1, "EC_POINT_mul");
  key.pub_.resize(kPublicKeyBytes);
  check(EC_POINT_point2oct(group(), q.get(), POINT_CONVERSION_UNCOMPRESSED, key.pub_.data(), key.pub_.size(),
                           ctx.get()) == kPublicKeyBytes,
        "EC_POINT_point2oct");
  return key;
}

Bytes deterministic_nonce(const Secret& d, ByteView msg) {
  auto digest = sha384(msg);
  NonceStream stream(d, digest);
  auto k = bn_bytes(stream.next().get());
  return Bytes(k.begin(), k.end());
}

Signature SigningKey::sign(ByteView msg) const {
  auto digest = sha384(msg);
  NonceStream stream(d_, digest);
  CtxPtr ctx(BN_CTX_new());
  BnPtr e = bn_from(digest);
  BnPtr d = bn_from(d_);
  BnPtr r(BN_new()), s(BN_new()), kinv(BN_new()), x(BN_new());
  PointPtr point(EC_POINT_new(group()));
  for (;;) {
    BnPtr k = stream.next();
    check(EC_POINT_mul(group(), point.get(), k.get(), nullptr, nullptr, ctx.get()) == 1, "EC_POINT_mul");
    check(EC_POINT_get_affine_coordinates(group(), point.get(), x.get(), nullptr, ctx.get()) == 1,
          "EC_POINT_get_affine_coordinates");
    check(BN_nnmod(r.get(), x.get(), order(), ctx.get()) == 1, "BN_nnmod");
    if (BN_is_zero(r.get())) continue;
    check(BN_mod_inverse(kinv.get(), k.get(), order(), ctx.get()) != nullptr, "BN_mod_inverse");
    check(BN_mod_mul(s.get(), r.get(), d.get(), order(), ctx.get()) == 1, "BN_mod_mul");
    check(BN_mod_add(s.get(), s.get(), e.get(), order(), ctx.get()) == 1, "BN_mod_add");
    check(BN_mod_mul(s.get(), s.get(), kinv.get(), order(), ctx.get()) == 1, "BN_mod_mul");
    if (BN_is_zero(s.get())) continue;
    break;
  }
  Signature out{};
  auto rb = bn_bytes(r.get());
  auto sb = bn_bytes(s.get());
  std::copy(rb.begin(), rb.end(), out.begin());
  std::copy(sb.begin(), sb.end(), out.begin() + kSecretBytes);
  return out;
}

struct VerifyingKey::Impl {
  PkeyPtr pkey;
};

VerifyingKey VerifyingKey::from_bytes(ByteView public_key) {
  if (public_key.size() != kPublicKeyBytes || public_key[0] != 0x04) {
    throw DecodeError("P-384 public key must be 97 bytes starting with 0x04", 0);
  }
  CtxPtr ctx(BN_CTX_new());
  PointPtr q(EC_POINT_new(group()));
  if (EC_POINT_oct2point(group(), q.get(), public_key.data(), public_key.size(), ctx.get()) != 1) {
    throw DecodeError("P-384 public key not on curve", 1);
  }
  ParamBldPtr bld(OSSL_PARAM_BLD_new());
  check(OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, "secp384r1", 0) == 1, "param group");
  check(OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, public_key.data(), public_key.size()) ==
            1,
        "param pub");
  ParamPtr params(OSSL_PARAM_BLD_to_param(bld.get()));
  PkeyCtxPtr pctx(EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
  check(pctx && EVP_PKEY_fromdata_init(pctx.get()) == 1, "EVP_PKEY_fromdata_init");
  EVP_PKEY* raw = nullptr;
  check(EVP_PKEY_fromdata(pctx.get(), &raw, EVP_PKEY_PUBLIC_KEY, params.get()) == 1, "EVP_PKEY_fromdata");
  VerifyingKey key;
  key.impl_ = std::make_shared<Impl>();
  key.impl_->pkey.reset(raw);
  return key;
}

bool VerifyingKey::verify(ByteView msg, const Signature& sig) const {
  SigPtr s(ECDSA_SIG_new());
  BnPtr r = bn_from(ByteView(sig.data(), kSecretBytes));
  BnPtr sv = bn_from(ByteView(sig.data() + kSecretBytes, kSecretBytes));
  check(ECDSA_SIG_set0(s.get(), r.get(), sv.get()) == 1, "ECDSA_SIG_set0");
  r.release();
  sv.release();
  unsigned char* der = nullptr;
  const int der_len = i2d_ECDSA_SIG(s.get(), &der);
  check(der_len > 0, "i2d_ECDSA_SIG");
  std::unique_ptr<unsigned char, void (*)(unsigned char*)> der_owner(der, [](unsigned char* p) { OPENSSL_free(p); });

  MdCtxPtr md(EVP_MD_CTX_new());
  check(EVP_DigestVerifyInit(md.get(), nullptr, EVP_sha384(), nullptr, impl_->pkey.get()) == 1,
        "EVP_DigestVerifyInit");
  return EVP_DigestVerify(md.get(), der, static_cast<std::size_t>(der_len), msg.data(), msg.size()) == 1;
}

}  // namespace apvas::baseline

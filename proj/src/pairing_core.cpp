/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/pairing_core.hpp"

#include <algorithm>

#include "apvas/pairing/hash_to_curve.hpp"

namespace apvas::bn254 {

namespace {

using Chunk = std::span<const std::uint8_t, 32>;
using OutChunk = std::span<std::uint8_t, 32>;

Fp read_fp(ByteView in, std::size_t at, std::size_t base_offset) {
  auto v = Fp::from_bytes_be(Chunk(in.data() + at, 32));
  if (!v) throw DecodeError("field element not canonical", base_offset + at);
  return *v;
}

bool all_zero(ByteView in) {
  return std::all_of(in.begin(), in.end(), [](std::uint8_t b) { return b == 0; });
}

void require_size(ByteView in, std::size_t n, const char* what) {
  if (in.size() != n) {
    throw DecodeError(std::string(what) + " must be " + std::to_string(n) + " bytes", std::min(in.size(), n));
  }
}

}  // namespace

Scalar Scalar::from_bytes(ByteView in) {
  require_size(in, kScalarBytes, "scalar");
  Limbs v = limbs::from_bytes_be(Chunk(in.data(), 32));
  if (limbs::geq(v, Fr::kModulus)) throw DecodeError("scalar not reduced", 0);
  return Scalar::from_limbs(v);
}

std::array<std::uint8_t, kScalarBytes> Scalar::to_bytes() const {
  std::array<std::uint8_t, kScalarBytes> out{};
  limbs::to_bytes_be(v_.to_limbs(), out);
  return out;
}

G1Point G1Point::from_bytes(ByteView in) {
  require_size(in, kG1Bytes, "G1 element");
  if (all_zero(in)) return G1Point();
  Fp x = read_fp(in, 0, 0);
  Fp y = read_fp(in, 32, 0);
  if (!G1Jac::on_curve_affine(x, y)) throw DecodeError("G1 point not on curve", 0);
  return G1Point(G1Jac::from_affine(x, y));
}

std::array<std::uint8_t, kG1Bytes> G1Point::to_bytes() const {
  std::array<std::uint8_t, kG1Bytes> out{};
  if (p_.is_identity()) return out;
  Fp x, y;
  p_.to_affine(x, y);
  x.to_bytes_be(OutChunk(out.data(), 32));
  y.to_bytes_be(OutChunk(out.data() + 32, 32));
  return out;
}

G2Point G2Point::from_bytes(ByteView in) {
  require_size(in, kG2Bytes, "G2 element");
  if (all_zero(in)) return G2Point();
  std::array<std::uint8_t, kG2Bytes> buf{};
  std::copy(in.begin(), in.end(), buf.begin());
  const bool y_sign = buf[0] & 0x80;
  if (buf[0] & 0x40) throw DecodeError("reserved G2 flag bit set", 0);
  buf[0] &= 0x3f;
  Fp2 x{read_fp(buf, 0, 0), read_fp(buf, 32, 0)};
  auto y = (x.square() * x + G2Curve::b()).sqrt();
  if (!y) throw DecodeError("G2 x-coordinate not on curve", 0);
  Fp2 yy = (y->sgn0() == y_sign) ? *y : -*y;
  if (yy.sgn0() != y_sign) throw DecodeError("G2 sign flag inconsistent", 0);
  G2Jac q = G2Jac::from_affine(x, yy);
  if (!q.mul(Fr::kModulus).is_identity()) throw DecodeError("G2 point outside prime-order subgroup", 0);
  return G2Point(q);
}

std::array<std::uint8_t, kG2Bytes> G2Point::to_bytes() const {
  std::array<std::uint8_t, kG2Bytes> out{};
  if (p_.is_identity()) return out;
  Fp2 x, y;
  p_.to_affine(x, y);
  x.c0.to_bytes_be(OutChunk(out.data(), 32));
  x.c1.to_bytes_be(OutChunk(out.data() + 32, 32));
  if (y.sgn0()) out[0] |= 0x80;
  return out;
}

namespace {

template <class Fn>
void for_each_coeff(const Fp12& f, Fn&& fn) {
  for (const Fp6* half : {&f.c0, &f.c1}) {
    for (const Fp2* c : {&half->c0, &half->c1, &half->c2}) {
      fn(c->c0);
      fn(c->c1);
    }
  }
}

}  // namespace

GtElement GtElement::from_bytes(ByteView in) {
  require_size(in, kGtBytes, "GT element");
  Fp v[12];
  for (std::size_t i = 0; i < 12; ++i) v[i] = read_fp(in, 32 * i, 0);
  Fp12 f{{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}}, {{v[6], v[7]}, {v[8], v[9]}, {v[10], v[11]}}};
  return GtElement(f);
}

std::array<std::uint8_t, kGtBytes> GtElement::to_bytes() const {
  std::array<std::uint8_t, kGtBytes> out{};
  std::size_t at = 0;
  for_each_coeff(f_, [&](const Fp& c) {
    c.to_bytes_be(OutChunk(out.data() + at, 32));
    at += 32;
  });
  return out;
}

G1Point scalar_mul(const Scalar& s, const G1Point& g) { return G1Point(g.raw().mul(s.to_limbs())); }

G2Point scalar_mul(const Scalar& s, const G2Point& g) { return G2Point(g.raw().mul(s.to_limbs())); }

Bytes PublicParams::serialize() const {
  ByteWriter w;
  auto str = [&](const std::string& s) {
    w.u16(static_cast<std::uint16_t>(s.size()));
    w.bytes(to_bytes(s));
  };
  str(curve_id);
  std::array<std::uint8_t, 32> order_bytes{};
  limbs::to_bytes_be(order, order_bytes);
  w.bytes(order_bytes);
  str(source_group_id);
  str(target_group_id);
  str(hash_fn_id);
  w.bytes(generator.point().to_bytes());
  return std::move(w).take();
}

PublicParams setup(std::string_view curve_choice) {
  if (curve_choice != "bn254" && curve_choice != "bn254-like") {
    throw ConfigError("unsupported curve '" + std::string(curve_choice) + "' (supported: bn254)");
  }
  PublicParams params;
  params.curve_id = "bn254";
  params.order = Fr::kModulus;
  params.source_group_id = "bn254.G1/bn254.G2";
  params.target_group_id = "bn254.GT";
  params.hash_fn_id = "BN254G1_XMD:SHA-256_SVDW_RO_/" + std::string(kHashToGroupDst);
  static const PreparedPoint kGenerator{G2Point::generator()};
  params.generator = kGenerator;
  return params;
}

G1Point hash_to_group(const PublicParams& /*params*/, ByteView msg) {
  return G1Point(hash_to_curve_g1(msg, kHashToGroupDst));
}

GtElement pairing(const PublicParams& /*params*/, const G1Point& a, const G2Point& b) {
  return GtElement(ate_pairing(a.raw(), b.raw()));
}

GtElement pairing(const PublicParams& /*params*/, const G1Point& a, const PreparedPoint& b) {
  return GtElement(ate_pairing(a.raw(), b.lines()));
}

}  // namespace apvas::bn254

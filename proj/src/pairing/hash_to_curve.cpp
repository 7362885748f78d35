/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/pairing/hash_to_curve.hpp"

#include <openssl/sha.h>

#include <algorithm>

namespace apvas::bn254 {

namespace {

constexpr std::size_t kHashBytes = 32;
constexpr std::size_t kBlockBytes = 64;

struct SvdwConstants {
  Fp c1;  // g(Z)
  Fp c2;  // -Z / 2
  Fp c3;  // sqrt(-g(Z) * 3 Z^2), sgn0 = 0
  Fp c4;  // -4 g(Z) / (3 Z^2)
  Fp z;
};

const SvdwConstants& svdw() {
  static const SvdwConstants k = [] {
    SvdwConstants c;
    c.z = Fp::one();
    c.c1 = Fp::from_u64(4);
    c.c2 = -Fp::from_u64(2).inverse();
    Fp c3 = (-Fp::from_u64(12)).sqrt().value();
    c.c3 = c3.sgn0() ? -c3 : c3;
    c.c4 = -(Fp::from_u64(16) * Fp::from_u64(3).inverse());
    return c;
  }();
  return k;
}

Fp curve_rhs(const Fp& x) { return x.square() * x + G1Curve::b(); }

}  // namespace

Bytes expand_message_xmd_sha256(ByteView msg, std::string_view dst, std::size_t len_in_bytes) {
  const std::size_t ell = (len_in_bytes + kHashBytes - 1) / kHashBytes;
  if (ell > 255 || len_in_bytes > 65535 || dst.size() > 255) {
    throw RangeError("expand_message_xmd: requested length or DST too long");
  }
  Bytes dst_prime(dst.begin(), dst.end());
  dst_prime.push_back(static_cast<std::uint8_t>(dst.size()));

  Bytes msg_prime(kBlockBytes, 0);
  msg_prime.insert(msg_prime.end(), msg.begin(), msg.end());
  msg_prime.push_back(static_cast<std::uint8_t>(len_in_bytes >> 8));
  msg_prime.push_back(static_cast<std::uint8_t>(len_in_bytes));
  msg_prime.push_back(0);
  msg_prime.insert(msg_prime.end(), dst_prime.begin(), dst_prime.end());

  std::array<std::uint8_t, kHashBytes> b0{};
  SHA256(msg_prime.data(), msg_prime.size(), b0.data());

  Bytes out;
  out.reserve(ell * kHashBytes);
  std::array<std::uint8_t, kHashBytes> prev{};
  Bytes block;
  for (std::size_t i = 1; i <= ell; ++i) {
    block.clear();
    for (std::size_t j = 0; j < kHashBytes; ++j) {
      block.push_back(i == 1 ? b0[j] : static_cast<std::uint8_t>(b0[j] ^ prev[j]));
    }
    block.push_back(static_cast<std::uint8_t>(i));
    block.insert(block.end(), dst_prime.begin(), dst_prime.end());
    SHA256(block.data(), block.size(), prev.data());
    out.insert(out.end(), prev.begin(), prev.end());
  }
  out.resize(len_in_bytes);
  return out;
}

std::array<Fp, 2> hash_to_field_fp(ByteView msg, std::string_view dst) {
  constexpr std::size_t kL = 48;
  Bytes uniform = expand_message_xmd_sha256(msg, dst, 2 * kL);
  std::array<Fp, 2> out;
  for (std::size_t i = 0; i < 2; ++i) {
    out[i] = Fp::from_wide_bytes_be(std::span<const std::uint8_t, kL>(uniform.data() + i * kL, kL));
  }
  return out;
}

G1Jac map_to_curve_svdw(const Fp& u) {
  const SvdwConstants& k = svdw();
  Fp tv1 = u.square() * k.c1;
  Fp tv2 = Fp::one() + tv1;
  tv1 = Fp::one() - tv1;
  Fp tv3 = (tv1 * tv2).inverse();
  Fp tv4 = u * tv1 * tv3 * k.c3;

  Fp x1 = k.c2 - tv4;
  Fp gx1 = curve_rhs(x1);
  Fp x2 = k.c2 + tv4;
  Fp gx2 = curve_rhs(x2);

  Fp x;
  if (gx1.is_square()) {
    x = x1;
  } else if (gx2.is_square()) {
    x = x2;
  } else {
    Fp x3 = (tv2.square() * tv3).square() * k.c4 + k.z;
    x = x3;
  }
  Fp y = curve_rhs(x).sqrt().value();
  if (u.sgn0() != y.sgn0()) y = -y;
  return G1Jac::from_affine(x, y);
}

G1Jac hash_to_curve_g1(ByteView msg, std::string_view dst) {
  auto u = hash_to_field_fp(msg, dst);
  return (map_to_curve_svdw(u[0]) + map_to_curve_svdw(u[1])).normalized();
}

}  // namespace apvas::bn254

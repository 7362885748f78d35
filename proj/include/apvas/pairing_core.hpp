/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

// Pairing group abstraction over BN254 (alt_bn128).
//
// The bimodal signature equations are written for a symmetric pairing
// e: G x G -> GT. On BN254 the pairing is asymmetric, so the roles are fixed:
// signatures and hash outputs live in G1, the generator P and public keys in G2.
// Every group element has a 64-byte encoding:
//   G1: x || y, 32-byte big-endian coordinates, uncompressed.
//   G2: compressed x = x.c0 || x.c1; bit 7 of byte 0 carries sgn0(y).
//   The identity of either group is 64 zero bytes.
// GT elements encode as the 12 Fp coefficients of the tower (384 bytes).

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "apvas/bytes.hpp"
#include "apvas/pairing/ate.hpp"

namespace apvas::bn254 {

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kG1Bytes = 64;
inline constexpr std::size_t kG2Bytes = 64;
inline constexpr std::size_t kGtBytes = 384;

inline constexpr std::string_view kHashToGroupDst = "APVAS-H2G-v1";

class Scalar {
 public:
  Scalar() = default;
  static Scalar from_u64(std::uint64_t v) { return Scalar(Fr::from_u64(v)); }
  // Reduces modulo the group order.
  static Scalar from_limbs(const Limbs& v) { return Scalar(Fr::from_limbs(v)); }
  // Canonical 32-byte big-endian; throws DecodeError if >= group order.
  static Scalar from_bytes(ByteView in);

  std::array<std::uint8_t, kScalarBytes> to_bytes() const;
  Limbs to_limbs() const { return v_.to_limbs(); }

  bool is_zero() const { return v_.is_zero(); }
  friend bool operator==(const Scalar&, const Scalar&) = default;
  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(a.v_ + b.v_); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(a.v_ - b.v_); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(a.v_ * b.v_); }
  Scalar inverse() const { return Scalar(v_.inverse()); }

 private:
  explicit Scalar(const Fr& v) : v_(v) {}
  Fr v_;
};

// Uniform in [1, r) by rejection sampling 254-bit candidates.
template <class Urbg>
Scalar scalar_random(Urbg& rng) {
  static_assert(sizeof(typename Urbg::result_type) >= 4);
  for (;;) {
    Limbs v{};
    for (auto& l : v) {
      std::uint64_t hi = static_cast<std::uint32_t>(rng());
      std::uint64_t lo = static_cast<std::uint32_t>(rng());
      l = (hi << 32) | lo;
    }
    v[3] &= (1ULL << 62) - 1;  // order is a 254-bit number
    if (limbs::geq(v, Fr::kModulus) || limbs::is_zero(v)) continue;
    return Scalar::from_limbs(v);
  }
}

class G1Point {
 public:
  G1Point() = default;  // identity
  explicit G1Point(const G1Jac& p) : p_(p) {}

  static G1Point generator() { return G1Point(g1_generator()); }
  static G1Point from_bytes(ByteView in);  // throws DecodeError
  std::array<std::uint8_t, kG1Bytes> to_bytes() const;

  bool is_identity() const { return p_.is_identity(); }
  const G1Jac& raw() const { return p_; }

  friend bool operator==(const G1Point& a, const G1Point& b) { return a.p_ == b.p_; }
  friend G1Point operator+(const G1Point& a, const G1Point& b) { return G1Point(a.p_ + b.p_); }
  friend G1Point operator-(const G1Point& a, const G1Point& b) { return G1Point(a.p_ - b.p_); }
  G1Point operator-() const { return G1Point(-p_); }
  G1Point& operator+=(const G1Point& o) { return *this = *this + o; }

 private:
  G1Jac p_;
};

class G2Point {
 public:
  G2Point() = default;  // identity
  explicit G2Point(const G2Jac& p) : p_(p) {}

  static G2Point generator() { return G2Point(g2_generator()); }
  // Checks the curve equation and prime-order subgroup membership.
  static G2Point from_bytes(ByteView in);
  std::array<std::uint8_t, kG2Bytes> to_bytes() const;

  bool is_identity() const { return p_.is_identity(); }
  const G2Jac& raw() const { return p_; }

  friend bool operator==(const G2Point& a, const G2Point& b) { return a.p_ == b.p_; }
  friend G2Point operator+(const G2Point& a, const G2Point& b) { return G2Point(a.p_ + b.p_); }
  G2Point operator-() const { return G2Point(-p_); }

 private:
  G2Jac p_;
};

class GtElement {
 public:
  GtElement() : f_(Fp12::one()) {}  // identity
  explicit GtElement(const Fp12& f) : f_(f) {}

  static GtElement identity() { return GtElement(); }
  // Rejects non-canonical coefficients; does not check subgroup membership.
  static GtElement from_bytes(ByteView in);
  std::array<std::uint8_t, kGtBytes> to_bytes() const;

  bool is_identity() const { return f_.is_one(); }
  const Fp12& raw() const { return f_; }

  friend bool operator==(const GtElement& a, const GtElement& b) { return a.f_ == b.f_; }
  friend GtElement operator*(const GtElement& a, const GtElement& b) { return GtElement(a.f_ * b.f_); }
  GtElement& operator*=(const GtElement& o) { return *this = *this * o; }
  GtElement pow(const Scalar& e) const { return GtElement(f_.pow(e.to_limbs())); }

 private:
  Fp12 f_;
};

G1Point scalar_mul(const Scalar& s, const G1Point& g);
G2Point scalar_mul(const Scalar& s, const G2Point& g);

// A G2 point with its Miller-loop lines computed once.
class PreparedPoint {
 public:
  PreparedPoint() = default;
  explicit PreparedPoint(const G2Point& q)
      : point_(q), lines_(std::make_shared<const PreparedG2>(prepare_g2(q.raw()))) {}

  const G2Point& point() const { return point_; }
  const PreparedG2& lines() const { return *lines_; }

 private:
  G2Point point_;
  std::shared_ptr<const PreparedG2> lines_ = std::make_shared<const PreparedG2>();
};

struct PublicParams {
  std::string curve_id;         // "bn254"
  Limbs order{};                // prime group order p
  std::string source_group_id;  // "bn254.G1/bn254.G2"
  std::string target_group_id;  // "bn254.GT"
  std::string hash_fn_id;       // hash-to-curve suite and tag
  PreparedPoint generator;      // P in G2

  // Deterministic self-description: ids, order, generator encoding.
  Bytes serialize() const;
};

// Accepts "bn254" (alias "bn254-like"); anything else throws ConfigError.
PublicParams setup(std::string_view curve_choice);

G1Point hash_to_group(const PublicParams& params, ByteView msg);

GtElement pairing(const PublicParams& params, const G1Point& a, const G2Point& b);
GtElement pairing(const PublicParams& params, const G1Point& a, const PreparedPoint& b);

}  // namespace apvas::bn254

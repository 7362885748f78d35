/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>

#include "apvas/pairing/field.hpp"

// Extension tower used by the BN254 pairing:
//   Fp2  = Fp[i] / (i^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + i
//   Fp12 = Fp6[w] / (w^2 - v)

namespace apvas::bn254 {

struct Fp2 {
  Fp c0, c1;

  static Fp2 zero() { return {}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  friend bool operator==(const Fp2&, const Fp2&) = default;

  friend Fp2 operator+(const Fp2& a, const Fp2& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
  friend Fp2 operator-(const Fp2& a, const Fp2& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }

  friend Fp2 operator*(const Fp2& a, const Fp2& b) {
    Fp v0 = a.c0 * b.c0;
    Fp v1 = a.c1 * b.c1;
    return {v0 - v1, (a.c0 + a.c1) * (b.c0 + b.c1) - v0 - v1};
  }
  Fp2 scale(const Fp& s) const { return {c0 * s, c1 * s}; }

  Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
  Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
  Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

  Fp2 square() const {
    Fp t = c0 * c1;
    return {(c0 + c1) * (c0 - c1), t + t};
  }
  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }
  Fp2 conj() const { return {c0, -c1}; }

  // Multiply by xi = 9 + i.
  Fp2 mul_by_xi() const {
    Fp a8 = c0.dbl().dbl().dbl();
    Fp b8 = c1.dbl().dbl().dbl();
    return {a8 + c0 - c1, b8 + c1 + c0};
  }

  Fp2 inverse() const {
    Fp t = (c0.square() + c1.square()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  Fp2 pow(const Limbs& e) const {
    Fp2 result = one();
    for (int i = limbs::bit_length(e) - 1; i >= 0; --i) {
      result = result.square();
      if (limbs::bit(e, i)) result = result * *this;
    }
    return result;
  }

  // sgn0 as defined for hash-to-curve over quadratic extensions.
  bool sgn0() const {
    bool sign0 = c0.sgn0();
    bool zero0 = c0.is_zero();
    bool sign1 = c1.sgn0();
    return sign0 || (zero0 && sign1);
  }

  std::optional<Fp2> sqrt() const;
};

struct Fp6 {
  Fp2 c0, c1, c2;

  static Fp6 zero() { return {}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  friend bool operator==(const Fp6&, const Fp6&) = default;

  friend Fp6 operator+(const Fp6& a, const Fp6& b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2}; }
  friend Fp6 operator-(const Fp6& a, const Fp6& b) { return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2}; }
  Fp6 operator-() const { return {-c0, -c1, -c2}; }

  friend Fp6 operator*(const Fp6& a, const Fp6& b) {
    Fp2 v0 = a.c0 * b.c0;
    Fp2 v1 = a.c1 * b.c1;
    Fp2 v2 = a.c2 * b.c2;
    return {((a.c1 + a.c2) * (b.c1 + b.c2) - v1 - v2).mul_by_xi() + v0,
            (a.c0 + a.c1) * (b.c0 + b.c1) - v0 - v1 + v2.mul_by_xi(),
            (a.c0 + a.c2) * (b.c0 + b.c2) - v0 - v2 + v1};
  }

  Fp6 square() const {
    Fp2 s0 = c0.square();
    Fp2 s1 = (c0 * c1).dbl();
    Fp2 s2 = (c0 - c1 + c2).square();
    Fp2 s3 = (c1 * c2).dbl();
    Fp2 s4 = c2.square();
    return {s3.mul_by_xi() + s0, s4.mul_by_xi() + s1, s1 + s2 + s3 - s0 - s4};
  }

  Fp6 scale(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }

  // Multiply by v.
  Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

  // Multiply by (b0 + b1 v).
  Fp6 mul_by_01(const Fp2& b0, const Fp2& b1) const {
    return {c0 * b0 + (c2 * b1).mul_by_xi(), c0 * b1 + c1 * b0, c1 * b1 + c2 * b0};
  }

  Fp6 inverse() const {
    Fp2 t0 = c0.square() - (c1 * c2).mul_by_xi();
    Fp2 t1 = c2.square().mul_by_xi() - c0 * c1;
    Fp2 t2 = c1.square() - c0 * c2;
    Fp2 det = c0 * t0 + (c2 * t1).mul_by_xi() + (c1 * t2).mul_by_xi();
    Fp2 inv = det.inverse();
    return {t0 * inv, t1 * inv, t2 * inv};
  }
};

struct Fp12 {
  Fp6 c0, c1;

  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_one() const { return *this == one(); }
  friend bool operator==(const Fp12&, const Fp12&) = default;

  friend Fp12 operator*(const Fp12& a, const Fp12& b) {
    Fp6 aa = a.c0 * b.c0;
    Fp6 bb = a.c1 * b.c1;
    return {aa + bb.mul_by_v(), (a.c0 + a.c1) * (b.c0 + b.c1) - aa - bb};
  }
  Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

  Fp12 square() const {
    Fp6 ab = c0 * c1;
    Fp6 c0n = (c0 + c1) * (c0 + c1.mul_by_v()) - ab - ab.mul_by_v();
    return {c0n, ab + ab};
  }

  // Raising to p^6; the inverse for elements of the cyclotomic subgroup.
  Fp12 conj() const { return {c0, -c1}; }

  Fp12 inverse() const {
    Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  // Multiply by a line value a + b*w + c*w^3.
  Fp12 mul_by_line(const Fp2& a, const Fp2& b, const Fp2& c) const {
    Fp6 t0 = c0.scale(a);
    Fp6 t1 = c1.mul_by_01(b, c);
    Fp6 r1 = (c0 + c1).mul_by_01(a + b, c) - t0 - t1;
    return {t0 + t1.mul_by_v(), r1};
  }

  Fp12 frobenius() const;
  Fp12 frobenius2() const;
  Fp12 frobenius3() const { return frobenius().frobenius2(); }

  // Squaring for elements with f^(p^6+1) = 1 (Granger-Scott).
  Fp12 cyclotomic_square() const;

  Fp12 pow(const Limbs& e) const {
    Fp12 result = one();
    for (int i = limbs::bit_length(e) - 1; i >= 0; --i) {
      result = result.square();
      if (limbs::bit(e, i)) result = result * *this;
    }
    return result;
  }

  // Exponentiation inside the cyclotomic subgroup.
  Fp12 cyclotomic_pow(std::uint64_t e) const;
};

// Frobenius coefficients. gamma1[k] = xi^(k(p-1)/6) for k = 0..5, gamma2[k] = xi^(k(p^2-1)/6).
struct FrobeniusConstants {
  Fp2 gamma1[6];
  Fp2 gamma2[6];
};
const FrobeniusConstants& frobenius_constants();

}  // namespace apvas::bn254

/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/pairing/tower.hpp"

namespace apvas::bn254 {

namespace {

FrobeniusConstants make_frobenius_constants() {
  FrobeniusConstants k;
  const Fp2 xi{Fp::from_u64(9), Fp::one()};
  Limbs e = limbs::div_small(limbs::sub_small(Fp::kModulus, 1), 6);
  Fp2 g = xi.pow(e);
  Fp2 acc = Fp2::one();
  for (int i = 0; i < 6; ++i) {
    k.gamma1[i] = acc;
    // xi^(k(p^2-1)/6) = gamma1[k]^(p+1) = gamma1[k] * conj(gamma1[k])
    k.gamma2[i] = acc * acc.conj();
    acc = acc * g;
  }
  return k;
}

}  // namespace

const FrobeniusConstants& frobenius_constants() {
  static const FrobeniusConstants constants = make_frobenius_constants();
  return constants;
}

// Square root in Fp2 for p = 3 mod 4 (complex method).
std::optional<Fp2> Fp2::sqrt() const {
  if (is_zero()) return zero();
  static const Limbs kP34 = limbs::shr(limbs::sub_small(Fp::kModulus, 3), 2);
  static const Limbs kP12 = limbs::shr(limbs::sub_small(Fp::kModulus, 1), 1);
  Fp2 a1 = pow(kP34);
  Fp2 alpha = a1.square() * *this;
  Fp2 x0 = a1 * *this;
  Fp2 root;
  if (alpha == -one()) {
    root = Fp2{-x0.c1, x0.c0};  // i * x0
  } else {
    Fp2 b = (one() + alpha).pow(kP12);
    root = b * x0;
  }
  if (root.square() == *this) return root;
  return std::nullopt;
}

// Coefficient k of w^k lives at: k=0 c0.c0, 1 c1.c0, 2 c0.c1, 3 c1.c1, 4 c0.c2, 5 c1.c2.
Fp12 Fp12::frobenius() const {
  const auto& g = frobenius_constants().gamma1;
  return {{c0.c0.conj(), c0.c1.conj() * g[2], c0.c2.conj() * g[4]},
          {c1.c0.conj() * g[1], c1.c1.conj() * g[3], c1.c2.conj() * g[5]}};
}

Fp12 Fp12::frobenius2() const {
  const auto& g = frobenius_constants().gamma2;
  return {{c0.c0, c0.c1 * g[2], c0.c2 * g[4]}, {c1.c0 * g[1], c1.c1 * g[3], c1.c2 * g[5]}};
}

namespace {

// (a + b s)^2 in Fp4 = Fp2[s]/(s^2 - xi).
inline void fp4_square(const Fp2& a, const Fp2& b, Fp2& out0, Fp2& out1) {
  Fp2 t0 = a.square();
  Fp2 t1 = b.square();
  out0 = t1.mul_by_xi() + t0;
  out1 = (a + b).square() - t0 - t1;
}

}  // namespace

Fp12 Fp12::cyclotomic_square() const {
  // View as Fp4[t]/(t^3 - s) with s = w^3:
  //   A = z0 + z1 s, B = z2 + z3 s, C = z4 + z5 s.
  Fp2 z0 = c0.c0, z4 = c0.c1, z3 = c0.c2;
  Fp2 z2 = c1.c0, z1 = c1.c1, z5 = c1.c2;

  Fp2 t0, t1, t2, t3;
  fp4_square(z0, z1, t0, t1);
  // A' = 3A^2 - 2 conj(A)
  z0 = t0 - z0;
  z0 = z0.dbl() + t0;
  z1 = t1 + z1;
  z1 = z1.dbl() + t1;

  fp4_square(z2, z3, t0, t1);
  fp4_square(z4, z5, t2, t3);
  // C' = 3B^2 - 2 conj(C)
  z4 = t0 - z4;
  z4 = z4.dbl() + t0;
  z5 = t1 + z5;
  z5 = z5.dbl() + t1;
  // B' = 3 s C^2 + 2 conj(B)
  t0 = t3.mul_by_xi();
  z2 = t0 + z2;
  z2 = z2.dbl() + t0;
  z3 = t2 - z3;
  z3 = z3.dbl() + t2;

  return {{z0, z4, z3}, {z2, z1, z5}};
}

Fp12 Fp12::cyclotomic_pow(std::uint64_t e) const {
  Fp12 result = one();
  for (int i = 63; i >= 0; --i) {
    result = result.cyclotomic_square();
    if ((e >> i) & 1) result = result * *this;
  }
  return result;
}

}  // namespace apvas::bn254

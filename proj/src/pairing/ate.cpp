/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/pairing/ate.hpp"

namespace apvas::bn254 {

namespace {

// 6u + 2 = 0x19d797039be763ba8 (65 bits).
constexpr Limbs ate_loop_count() {
  u128 v = static_cast<u128>(kBnU) * 6 + 2;
  return Limbs{static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64), 0, 0};
}

constexpr Limbs kAteLoop = ate_loop_count();

LineCoeffs doubling_step(G2Jac& t) {
  Fp2 x2 = t.x.square();
  Fp2 y2 = t.y.square();
  Fp2 z2 = t.z.square();
  Fp2 z3 = z2 * t.z;
  LineCoeffs line;
  line.a = (t.y * z3).dbl();
  line.b = -((x2.dbl() + x2) * z2);
  Fp2 x3 = x2 * t.x;
  line.c = x3.dbl() + x3 - y2.dbl();
  t = t.dbl();
  return line;
}

LineCoeffs addition_step(G2Jac& t, const Fp2& qx, const Fp2& qy) {
  Fp2 z2 = t.z.square();
  Fp2 n = qy * z2 * t.z - t.y;
  Fp2 d = t.z * (qx * z2 - t.x);
  LineCoeffs line;
  line.a = d;
  line.b = -n;
  line.c = n * qx - qy * d;
  t += G2Jac::from_affine(qx, qy);
  return line;
}

}  // namespace

G2Jac twist_frobenius(const G2Jac& q) {
  const auto& g = frobenius_constants().gamma1;
  return {q.x.conj() * g[2], q.y.conj() * g[3], q.z.conj()};
}

PreparedG2 prepare_g2(const G2Jac& q_in) {
  PreparedG2 out;
  if (q_in.is_identity()) return out;
  out.infinity = false;
  G2Jac q = q_in.normalized();
  G2Jac t = q;
  out.lines.reserve(90);
  for (int i = limbs::bit_length(kAteLoop) - 2; i >= 0; --i) {
    out.lines.push_back(doubling_step(t));
    if (limbs::bit(kAteLoop, i)) out.lines.push_back(addition_step(t, q.x, q.y));
  }
  G2Jac q1 = twist_frobenius(q).normalized();
  G2Jac q2 = (-twist_frobenius(twist_frobenius(q))).normalized();
  out.lines.push_back(addition_step(t, q1.x, q1.y));
  out.lines.push_back(addition_step(t, q2.x, q2.y));
  return out;
}

Fp12 miller_loop(const G1Jac& p_in, const PreparedG2& q) {
  if (q.infinity || p_in.is_identity()) return Fp12::one();
  Fp px, py;
  p_in.to_affine(px, py);
  auto apply = [&](Fp12& f, const LineCoeffs& l) { f = f.mul_by_line(l.a.scale(py), l.b.scale(px), l.c); };

  Fp12 f = Fp12::one();
  std::size_t idx = 0;
  for (int i = limbs::bit_length(kAteLoop) - 2; i >= 0; --i) {
    f = f.square();
    apply(f, q.lines[idx++]);
    if (limbs::bit(kAteLoop, i)) apply(f, q.lines[idx++]);
  }
  apply(f, q.lines[idx++]);
  apply(f, q.lines[idx++]);
  return f;
}

Fp12 final_exponentiation(const Fp12& in) {
  // Easy part: f^((p^6 - 1)(p^2 + 1)).
  Fp12 t1 = in.conj() * in.inverse();
  t1 = t1.frobenius2() * t1;

  // Hard part: (p^4 - p^2 + 1) / r via the BN addition chain in u.
  Fp12 fp = t1.frobenius();
  Fp12 fp2 = t1.frobenius2();
  Fp12 fp3 = fp2.frobenius();

  Fp12 fu = t1.cyclotomic_pow(kBnU);
  Fp12 fu2 = fu.cyclotomic_pow(kBnU);
  Fp12 fu3 = fu2.cyclotomic_pow(kBnU);

  Fp12 y3 = fu.frobenius();
  Fp12 fu2p = fu2.frobenius();
  Fp12 fu3p = fu3.frobenius();
  Fp12 y2 = fu2.frobenius2();

  Fp12 y0 = fp * fp2 * fp3;
  Fp12 y1 = t1.conj();
  Fp12 y5 = fu2.conj();
  y3 = y3.conj();
  Fp12 y4 = (fu * fu2p).conj();
  Fp12 y6 = (fu3 * fu3p).conj();

  Fp12 t0 = y6.cyclotomic_square() * y4 * y5;
  t1 = y3 * y5 * t0;
  t0 = t0 * y2;
  t1 = (t1.cyclotomic_square() * t0).cyclotomic_square();
  t0 = t1 * y1;
  t1 = t1 * y0;
  t0 = t0.cyclotomic_square() * t1;
  return t0;
}

Fp12 ate_pairing(const G1Jac& p, const PreparedG2& q) { return final_exponentiation(miller_loop(p, q)); }

Fp12 ate_pairing(const G1Jac& p, const G2Jac& q) { return ate_pairing(p, prepare_g2(q)); }

}  // namespace apvas::bn254

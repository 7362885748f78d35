/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "apvas/pairing/tower.hpp"

namespace apvas::bn254 {

// Short Weierstrass curve y^2 = x^3 + b in Jacobian coordinates (x = X/Z^2, y = Y/Z^3).
// Curve supplies `using Field` and `static const Field& b()`.
template <class Curve>
struct Jacobian {
  using F = typename Curve::Field;

  F x = F::one();
  F y = F::one();
  F z = F::zero();

  static Jacobian identity() { return {}; }
  static Jacobian from_affine(const F& ax, const F& ay) { return {ax, ay, F::one()}; }

  bool is_identity() const { return z.is_zero(); }

  static bool on_curve_affine(const F& ax, const F& ay) {
    return ay.square() == ax.square() * ax + Curve::b();
  }

  Jacobian operator-() const { return {x, -y, z}; }

  Jacobian dbl() const {
    if (is_identity()) return *this;
    F a = x.square();
    F b = y.square();
    F c = b.square();
    F d = ((x + b).square() - a - c).dbl();
    F e = a.dbl() + a;
    F f = e.square();
    F x3 = f - d.dbl();
    F c8 = c.dbl().dbl().dbl();
    F y3 = e * (d - x3) - c8;
    F z3 = (y * z).dbl();
    return {x3, y3, z3};
  }

  friend Jacobian operator+(const Jacobian& p, const Jacobian& q) {
    if (p.is_identity()) return q;
    if (q.is_identity()) return p;
    F z1z1 = p.z.square();
    F z2z2 = q.z.square();
    F u1 = p.x * z2z2;
    F u2 = q.x * z1z1;
    F s1 = p.y * q.z * z2z2;
    F s2 = q.y * p.z * z1z1;
    F h = u2 - u1;
    F r = (s2 - s1).dbl();
    if (h.is_zero()) {
      if (r.is_zero()) return p.dbl();
      return identity();
    }
    F i = h.dbl().square();
    F j = h * i;
    F v = u1 * i;
    F x3 = r.square() - j - v.dbl();
    F y3 = r * (v - x3) - (s1 * j).dbl();
    F z3 = ((p.z + q.z).square() - z1z1 - z2z2) * h;
    return {x3, y3, z3};
  }

  friend Jacobian operator-(const Jacobian& p, const Jacobian& q) { return p + (-q); }
  Jacobian& operator+=(const Jacobian& o) { return *this = *this + o; }

  friend bool operator==(const Jacobian& p, const Jacobian& q) {
    if (p.is_identity() || q.is_identity()) return p.is_identity() && q.is_identity();
    F z1z1 = p.z.square();
    F z2z2 = q.z.square();
    if (!(p.x * z2z2 == q.x * z1z1)) return false;
    return p.y * q.z * z2z2 == q.y * p.z * z1z1;
  }

  // Affine coordinates; only meaningful when !is_identity().
  void to_affine(F& ax, F& ay) const {
    F zinv = z.inverse();
    F zinv2 = zinv.square();
    ax = x * zinv2;
    ay = y * zinv2 * zinv;
  }

  Jacobian normalized() const {
    if (is_identity()) return identity();
    F ax, ay;
    to_affine(ax, ay);
    return from_affine(ax, ay);
  }

  Jacobian mul(const Limbs& k) const {
    Jacobian acc = identity();
    for (int i = limbs::bit_length(k) - 1; i >= 0; --i) {
      acc = acc.dbl();
      if (limbs::bit(k, i)) acc += *this;
    }
    return acc;
  }
};

struct G1Curve {
  using Field = Fp;
  static const Fp& b() {
    static const Fp kB = Fp::from_u64(3);
    return kB;
  }
};

// D-type sextic twist: y^2 = x^3 + 3 / xi over Fp2.
struct G2Curve {
  using Field = Fp2;
  static const Fp2& b() {
    static const Fp2 kB = Fp2{Fp::from_u64(3), Fp::zero()} * Fp2{Fp::from_u64(9), Fp::one()}.inverse();
    return kB;
  }
};

using G1Jac = Jacobian<G1Curve>;
using G2Jac = Jacobian<G2Curve>;

G1Jac g1_generator();
G2Jac g2_generator();

}  // namespace apvas::bn254

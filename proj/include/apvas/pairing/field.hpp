/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <type_traits>

#if defined(__x86_64__)
#include <x86intrin.h>
#endif

namespace apvas::bn254 {

using Limbs = std::array<std::uint64_t, 4>;  // little-endian 64-bit limbs
using u128 = unsigned __int128;

namespace detail {

constexpr unsigned char adc(unsigned char c, std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
#if defined(__x86_64__)
  if (!std::is_constant_evaluated()) {
    unsigned long long r;
    c = _addcarry_u64(c, a, b, &r);
    out = r;
    return c;
  }
#endif
  u128 v = static_cast<u128>(a) + b + c;
  out = static_cast<std::uint64_t>(v);
  return static_cast<unsigned char>(v >> 64);
}

constexpr unsigned char sbb(unsigned char c, std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
#if defined(__x86_64__)
  if (!std::is_constant_evaluated()) {
    unsigned long long r;
    c = _subborrow_u64(c, a, b, &r);
    out = r;
    return c;
  }
#endif
  u128 v = static_cast<u128>(a) - b - c;
  out = static_cast<std::uint64_t>(v);
  return static_cast<unsigned char>((v >> 64) & 1);
}

}  // namespace detail

namespace limbs {

constexpr bool geq(const Limbs& a, const Limbs& b) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

constexpr bool is_zero(const Limbs& a) { return (a[0] | a[1] | a[2] | a[3]) == 0; }

// a - b, returns borrow.
constexpr std::uint64_t sub(Limbs& out, const Limbs& a, const Limbs& b) {
  std::uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

constexpr std::uint64_t add(Limbs& out, const Limbs& a, const Limbs& b) {
  std::uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    out[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

constexpr Limbs sub_small(const Limbs& a, std::uint64_t v) {
  Limbs out{};
  sub(out, a, Limbs{v, 0, 0, 0});
  return out;
}

constexpr Limbs add_small(const Limbs& a, std::uint64_t v) {
  Limbs out{};
  add(out, a, Limbs{v, 0, 0, 0});
  return out;
}

constexpr Limbs shr(const Limbs& a, unsigned n) {
  Limbs out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = a[i] >> n;
    if (n != 0 && i < 3) out[i] |= a[i + 1] << (64 - n);
  }
  return out;
}

// Exact division by a small divisor (caller guarantees divisibility where it matters).
constexpr Limbs div_small(const Limbs& a, std::uint64_t d) {
  Limbs out{};
  u128 rem = 0;
  for (int i = 3; i >= 0; --i) {
    u128 cur = (rem << 64) | a[i];
    out[i] = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  return out;
}

constexpr int bit_length(const Limbs& a) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != 0) {
      int b = 64;
      while (((a[i] >> (b - 1)) & 1) == 0) --b;
      return i * 64 + b;
    }
  }
  return 0;
}

constexpr bool bit(const Limbs& a, int i) { return (a[i / 64] >> (i % 64)) & 1; }

inline Limbs from_bytes_be(std::span<const std::uint8_t, 32> in) {
  Limbs out{};
  for (int i = 0; i < 4; ++i) {
    std::uint64_t v = 0;
    for (int j = 0; j < 8; ++j) v = (v << 8) | in[static_cast<std::size_t>((3 - i) * 8 + j)];
    out[i] = v;
  }
  return out;
}

inline void to_bytes_be(const Limbs& a, std::span<std::uint8_t, 32> out) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 8; ++j) {
      out[static_cast<std::size_t>((3 - i) * 8 + j)] =
          static_cast<std::uint8_t>(a[i] >> (56 - 8 * j));
    }
  }
}

}  // namespace limbs

// Prime field in Montgomery representation, R = 2^256. Params supplies kModulus
// (an odd prime below 2^255).
template <class Params>
class MontField {
 public:
  static constexpr Limbs kModulus = Params::kModulus;

 private:
  static constexpr std::uint64_t compute_inv() {
    // Newton iteration for p^-1 mod 2^64, then negate.
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i) inv *= 2 - kModulus[0] * inv;
    return ~inv + 1;
  }

  static constexpr Limbs pow2_mod(int exponent) {
    Limbs x{1, 0, 0, 0};
    for (int i = 0; i < exponent; ++i) {
      Limbs doubled{};
      std::uint64_t carry = limbs::add(doubled, x, x);
      if (carry || limbs::geq(doubled, kModulus)) limbs::sub(doubled, doubled, kModulus);
      x = doubled;
    }
    return x;
  }

 public:
  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr Limbs kR = pow2_mod(256);
  static constexpr Limbs kR2 = pow2_mod(512);
  static constexpr Limbs kR3 = pow2_mod(768);

  constexpr MontField() = default;

  static constexpr MontField zero() { return MontField(); }
  static constexpr MontField one() { return raw(kR); }

  static constexpr MontField from_u64(std::uint64_t v) {
    return raw(mont_mul(Limbs{v, 0, 0, 0}, kR2));
  }

  // Any 256-bit value; reduced modulo p.
  static constexpr MontField from_limbs(const Limbs& v) {
    Limbs r = v;
    while (limbs::geq(r, kModulus)) limbs::sub(r, r, kModulus);
    return raw(mont_mul(r, kR2));
  }

  // Canonical big-endian bytes; rejects values >= p.
  static std::optional<MontField> from_bytes_be(std::span<const std::uint8_t, 32> in) {
    Limbs v = limbs::from_bytes_be(in);
    if (limbs::geq(v, kModulus)) return std::nullopt;
    return from_limbs(v);
  }

  // Reduce a 384-bit big-endian integer (hi 128 bits, lo 256 bits) modulo p.
  static MontField from_wide_bytes_be(std::span<const std::uint8_t, 48> in) {
    std::array<std::uint8_t, 32> hi_bytes{};
    std::memcpy(hi_bytes.data() + 16, in.data(), 16);
    Limbs hi = limbs::from_bytes_be(hi_bytes);
    Limbs lo = limbs::from_bytes_be(std::span<const std::uint8_t, 32>(in.data() + 16, 32));
    return raw(mont_mul(hi, kR3)) + from_limbs(lo);
  }

  static constexpr MontField raw(const Limbs& mont) {
    MontField f;
    f.v_ = mont;
    return f;
  }

  constexpr const Limbs& mont_limbs() const { return v_; }

  constexpr Limbs to_limbs() const { return mont_mul(v_, Limbs{1, 0, 0, 0}); }

  void to_bytes_be(std::span<std::uint8_t, 32> out) const { limbs::to_bytes_be(to_limbs(), out); }

  constexpr bool is_zero() const { return limbs::is_zero(v_); }
  constexpr bool is_one() const { return v_ == kR; }

  // Parity of the canonical representative.
  constexpr bool sgn0() const { return to_limbs()[0] & 1; }

  friend constexpr bool operator==(const MontField& a, const MontField& b) { return a.v_ == b.v_; }

  // Both operands are below p < 2^254, so the raw sum never overflows 256 bits.
  friend constexpr MontField operator+(const MontField& a, const MontField& b) {
    Limbs s, d;
    unsigned char c = detail::adc(0, a.v_[0], b.v_[0], s[0]);
    c = detail::adc(c, a.v_[1], b.v_[1], s[1]);
    c = detail::adc(c, a.v_[2], b.v_[2], s[2]);
    detail::adc(c, a.v_[3], b.v_[3], s[3]);
    unsigned char br = detail::sbb(0, s[0], kModulus[0], d[0]);
    br = detail::sbb(br, s[1], kModulus[1], d[1]);
    br = detail::sbb(br, s[2], kModulus[2], d[2]);
    br = detail::sbb(br, s[3], kModulus[3], d[3]);
    const std::uint64_t keep = 0 - static_cast<std::uint64_t>(br);
    for (int k = 0; k < 4; ++k) d[k] = (s[k] & keep) | (d[k] & ~keep);
    return raw(d);
  }

  friend constexpr MontField operator-(const MontField& a, const MontField& b) {
    Limbs d;
    unsigned char br = detail::sbb(0, a.v_[0], b.v_[0], d[0]);
    br = detail::sbb(br, a.v_[1], b.v_[1], d[1]);
    br = detail::sbb(br, a.v_[2], b.v_[2], d[2]);
    br = detail::sbb(br, a.v_[3], b.v_[3], d[3]);
    const std::uint64_t mask = 0 - static_cast<std::uint64_t>(br);
    unsigned char c = detail::adc(0, d[0], kModulus[0] & mask, d[0]);
    c = detail::adc(c, d[1], kModulus[1] & mask, d[1]);
    c = detail::adc(c, d[2], kModulus[2] & mask, d[2]);
    detail::adc(c, d[3], kModulus[3] & mask, d[3]);
    return raw(d);
  }

  constexpr MontField operator-() const { return zero() - *this; }

  friend constexpr MontField operator*(const MontField& a, const MontField& b) {
    return raw(mont_mul(a.v_, b.v_));
  }

  MontField& operator+=(const MontField& o) { return *this = *this + o; }
  MontField& operator-=(const MontField& o) { return *this = *this - o; }
  MontField& operator*=(const MontField& o) { return *this = *this * o; }

  constexpr MontField dbl() const { return *this + *this; }
  constexpr MontField square() const { return *this * *this; }

  constexpr MontField pow(const Limbs& e) const {
    MontField result = one();
    for (int i = limbs::bit_length(e) - 1; i >= 0; --i) {
      result = result.square();
      if (limbs::bit(e, i)) result = result * *this;
    }
    return result;
  }

  // Zero maps to zero.
  MontField inverse() const { return pow(limbs::sub_small(kModulus, 2)); }

  // Euler criterion; zero counts as a square.
  bool is_square() const {
    if (is_zero()) return true;
    return pow(limbs::shr(limbs::sub_small(kModulus, 1), 1)).is_one();
  }

  // Requires p = 3 mod 4.
  std::optional<MontField> sqrt() const {
    static_assert((kModulus[0] & 3) == 3, "sqrt needs p = 3 mod 4");
    MontField root = pow(limbs::shr(limbs::add_small(kModulus, 1), 2));
    if (root.square() == *this) return root;
    return std::nullopt;
  }

 private:
  // CIOS Montgomery multiplication, "no-carry" form: valid because the top
  // modulus limb is below 2^63 - 1, so the running value never needs a fifth limb.
  static_assert(kModulus[3] < 0x7fffffffffffffffULL);

  static constexpr void mac(std::uint64_t& hi, std::uint64_t& lo, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c, std::uint64_t d) {
    u128 v = static_cast<u128>(a) * b;
    std::uint64_t l = static_cast<std::uint64_t>(v);
    std::uint64_t h = static_cast<std::uint64_t>(v >> 64);
    detail::adc(detail::adc(0, l, c, l), h, 0, h);
    detail::adc(detail::adc(0, l, d, l), h, 0, h);
    lo = l;
    hi = h;
  }

  static constexpr Limbs mont_mul(const Limbs& a, const Limbs& b) {
    std::uint64_t t0 = 0, t1 = 0, t2 = 0, t3 = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint64_t A = 0, C = 0, lo = 0;
      mac(A, t0, a[0], b[i], t0, 0);
      const std::uint64_t m = t0 * kInv;
      mac(C, lo, m, kModulus[0], t0, 0);
      mac(A, t1, a[1], b[i], t1, A);
      mac(C, t0, m, kModulus[1], t1, C);
      mac(A, t2, a[2], b[i], t2, A);
      mac(C, t1, m, kModulus[2], t2, C);
      mac(A, t3, a[3], b[i], t3, A);
      mac(C, t2, m, kModulus[3], t3, C);
      t3 = C + A;
    }
    Limbs out{t0, t1, t2, t3};
    if (limbs::geq(out, kModulus)) limbs::sub(out, out, kModulus);
    return out;
  }

  Limbs v_{};
};

struct Bn254BaseParams {
  // 0x30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd47
  static constexpr Limbs kModulus = {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL,
                                     0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

struct Bn254ScalarParams {
  // 0x30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001
  static constexpr Limbs kModulus = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                     0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

using Fp = MontField<Bn254BaseParams>;
using Fr = MontField<Bn254ScalarParams>;

// BN parameter u; the optimal ate loop runs over 6u + 2.
inline constexpr std::uint64_t kBnU = 0x44e992b44a6909f1ULL;

}  // namespace apvas::bn254

/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/pairing/curve.hpp"

namespace apvas::bn254 {

namespace {

Fp fp_from_limbs(std::uint64_t l3, std::uint64_t l2, std::uint64_t l1, std::uint64_t l0) {
  return Fp::from_limbs(Limbs{l0, l1, l2, l3});
}

}  // namespace

G1Jac g1_generator() { return G1Jac::from_affine(Fp::from_u64(1), Fp::from_u64(2)); }

// The standard alt_bn128 G2 generator.
G2Jac g2_generator() {
  static const G2Jac kGen = G2Jac::from_affine(
      Fp2{fp_from_limbs(0x1800deef121f1e76ULL, 0x426a00665e5c4479ULL, 0x674322d4f75edaddULL,
                        0x46debd5cd992f6edULL),
          fp_from_limbs(0x198e9393920d483aULL, 0x7260bfb731fb5d25ULL, 0xf1aa493335a9e712ULL,
                        0x97e485b7aef312c2ULL)},
      Fp2{fp_from_limbs(0x12c85ea5db8c6debULL, 0x4aab71808dcb408fULL, 0xe3d1e7690c43d37bULL,
                        0x4ce6cc0166fa7daaULL),
          fp_from_limbs(0x090689d0585ff075ULL, 0xec9e99ad690c3395ULL, 0xbc4b313370b38ef3ULL,
                        0x55acdadcd122975bULL)});
  return kGen;
}

}  // namespace apvas::bn254

/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <vector>

#include "apvas/pairing/curve.hpp"

namespace apvas::bn254 {

// Line coefficients for one Miller-loop step. Evaluated at P = (xp, yp) the line is
//   (a * yp) + (b * xp) w + c w^3
// up to an Fp2 factor, which the final exponentiation removes.
struct LineCoeffs {
  Fp2 a, b, c;
};

// Precomputed Miller-loop lines for a fixed G2 point.
struct PreparedG2 {
  bool infinity = true;
  std::vector<LineCoeffs> lines;
};

PreparedG2 prepare_g2(const G2Jac& q);

// f_{6u+2,Q}(P) times the two Frobenius correction lines; no final exponentiation.
Fp12 miller_loop(const G1Jac& p, const PreparedG2& q);

Fp12 final_exponentiation(const Fp12& f);

// Optimal ate pairing e: G1 x G2 -> GT.
Fp12 ate_pairing(const G1Jac& p, const PreparedG2& q);
Fp12 ate_pairing(const G1Jac& p, const G2Jac& q);

// Frobenius endomorphism on the twist.
G2Jac twist_frobenius(const G2Jac& q);

}  // namespace apvas::bn254

/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string_view>

#include "apvas/bytes.hpp"
#include "apvas/pairing/curve.hpp"

// Hash-to-curve for BN254 G1 following RFC 9380: expand_message_xmd with SHA-256,
// hash_to_field with L = 48, and the Shallue-van de Woestijne map with Z = 1.
// G1 has cofactor 1, so no clearing step is needed.

namespace apvas::bn254 {

Bytes expand_message_xmd_sha256(ByteView msg, std::string_view dst, std::size_t len_in_bytes);

std::array<Fp, 2> hash_to_field_fp(ByteView msg, std::string_view dst);

// Returns an affine point (z = 1).
G1Jac map_to_curve_svdw(const Fp& u);

G1Jac hash_to_curve_g1(ByteView msg, std::string_view dst);

}  // namespace apvas::bn254

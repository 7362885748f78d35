/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "apvas/bytes.hpp"

#include <cctype>

namespace apvas {

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  int high = -1;
  std::size_t digits = 0;
  for (std::size_t i = 0; i < hex.size(); ++i) {
    char c = hex[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int n = nibble(c);
    if (n < 0) throw DecodeError("invalid hex digit", i);
    ++digits;
    if (high < 0) {
      high = n;
    } else {
      out.push_back(static_cast<std::uint8_t>((high << 4) | n));
      high = -1;
    }
  }
  if (high >= 0) throw DecodeError("odd number of hex digits", digits);
  return out;
}

}  // namespace apvas

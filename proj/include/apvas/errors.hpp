/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apvas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unsupported curve, bad topology, malformed config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes; offset is the position where parsing stopped.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A value violates its type invariant and cannot be serialized; names the field.
class EncodeError : public Error {
 public:
  EncodeError(const std::string& field, const std::string& what)
      : Error(field + ": " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The same (public key, message) pair would appear twice in a claim.
class DuplicateEntryError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace apvas

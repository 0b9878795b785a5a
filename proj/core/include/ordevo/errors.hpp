// Copyright 2026 The ordevo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ordevo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (length mismatch, k > N, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A configuration value is well-formed but violates an invariant,
/// e.g. a population size that is not divisible by k.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configuration value could not be interpreted (unknown target name,
/// unknown key, malformed number).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A genome entry became NaN or infinite.
class OverflowError : public Error {
 public:
  OverflowError(std::optional<std::uint64_t> generation,
                std::optional<std::uint64_t> slot);

  std::optional<std::uint64_t> generation() const noexcept { return generation_; }
  std::optional<std::uint64_t> slot() const noexcept { return slot_; }

 private:
  std::optional<std::uint64_t> generation_;
  std::optional<std::uint64_t> slot_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordevo

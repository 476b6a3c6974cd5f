// Copyright 2026 The qpulse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpulse {

/// Malformed argument or violated precondition.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Hilbert-space dimension above the configured cap.
class CapacityError : public std::runtime_error {
public:
  CapacityError(std::size_t requested, std::size_t cap)
      : std::runtime_error("state dimension " + std::to_string(requested) +
                           " exceeds capacity " + std::to_string(cap)),
        requested_(requested), cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t requested_;
  std::size_t cap_;
};

/// Two dressed states overlap a bare label equally well.
class DegeneracyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The state has (numerically) no weight in the computational subspace.
class SingularProjectionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The objective produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Text-file syntax error; the message carries path and line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &path, int line, const std::string &what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace qpulse

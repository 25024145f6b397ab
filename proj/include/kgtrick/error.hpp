// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgtrick contributors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kgtrick {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors caused by the caller's input or configuration. The CLI maps these
// to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// A verbalizer field contains the reserved " | " delimiter.
class DelimiterError : public InputError {
 public:
  using InputError::InputError;
};

// Generated text that cannot be read as a target surface.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

// A metric was asked to average over nothing.
class UndefinedInputError : public InputError {
 public:
  using InputError::InputError;
};

class MissingLexicalizationError : public InputError {
 public:
  using InputError::InputError;
};

// The remote backend could not be reached (or timed out) for some requests.
// No partial results accompany this error.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::vector<std::size_t> failed)
      : Error(what), failed_indices_(std::move(failed)) {}

  const std::vector<std::size_t>& failed_indices() const noexcept { return failed_indices_; }

 private:
  std::vector<std::size_t> failed_indices_;
};

// The remote backend answered, but not in the wire format.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgtrick

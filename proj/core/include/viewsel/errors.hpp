#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace viewsel {

/// Base class for problems with user-supplied input (files, SQL, statistics).
/// Anything derived from std::logic_error signals a broken internal invariant.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : InputError(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace viewsel

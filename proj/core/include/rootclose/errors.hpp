#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rootclose {

/// Bad arguments: out-of-range indices, mismatched contexts, non-prime moduli.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical guarantee failed to hold. Seeing one of these means the
/// library is wrong, not the input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PrecisionExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation stopped because it outgrew a configured resource budget.
class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HypothesisNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepthExhausted : public std::runtime_error {
 public:
  DepthExhausted(const std::string& what, std::size_t achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  std::size_t achieved() const noexcept { return achieved_; }

 private:
  std::size_t achieved_;
};

/// Raised by the expression parser; `position` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace rootclose

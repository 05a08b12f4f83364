#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <ostream>

namespace rootclose {

/// A rational prime. Construction checks primality.
class Prime {
 public:
  explicit Prime(std::uint32_t value);
  std::uint32_t value() const noexcept { return value_; }
  operator std::uint32_t() const noexcept { return value_; }

 private:
  std::uint32_t value_;
};

/// p-adic valuation of an integer; the valuation of zero is +infinity.
class Valuation {
 public:
  static Valuation infinite() { return Valuation(); }
  static Valuation finite(std::uint64_t v) { return Valuation(v); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful when finite.
  std::uint64_t value() const noexcept { return v_; }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.v_ == b.v_);
  }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.v_ + b.v_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Valuation& v) {
    if (v.infinite_) return os << "inf";
    return os << v.v_;
  }

 private:
  Valuation() : infinite_(true), v_(0) {}
  explicit Valuation(std::uint64_t v) : infinite_(false), v_(v) {}

  bool infinite_;
  std::uint64_t v_;
};

bool is_prime(std::uint64_t n);

Valuation vp(const Prime& p, const mpz_class& n);

/// Exact binomial coefficient; throws DomainError when k > n.
mpz_class binom(std::uint64_t n, std::uint64_t k);

/// Valuation of binom(p^m, i) by the closed form m - vp(i).
/// Requires 1 <= i <= p^m.
Valuation binom_valuation(const Prime& p, std::uint32_t m, const mpz_class& i);

/// p^e as an arbitrary-precision integer.
mpz_class ipow(std::uint32_t p, std::uint64_t e);

/// p^e as a machine word; throws DomainError on overflow.
std::uint64_t upow(std::uint32_t p, std::uint64_t e);

}  // namespace rootclose

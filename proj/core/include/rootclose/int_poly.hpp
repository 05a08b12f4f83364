#pragma once

// Sparse multivariate polynomials over Z in a fixed number of variables.
// Only what the universal Witt polynomials need.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rootclose {

class IntPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;

  explicit IntPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static IntPoly constant(std::size_t nvars, const mpz_class& c);
  static IntPoly variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Exponents, mpz_class>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  mpz_class coeff(const Exponents& e) const;
  std::uint32_t total_degree() const;

  /// Adds c to the coefficient of e, dropping it if it becomes zero.
  void add_term(const Exponents& e, const mpz_class& c);

  IntPoly& operator+=(const IntPoly& o);
  IntPoly& operator-=(const IntPoly& o);
  friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
  friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  IntPoly scaled(const mpz_class& c) const;
  IntPoly pow(std::uint64_t e) const;

  /// Divides every coefficient by d. Throws InvariantViolation if some
  /// coefficient is not a multiple of d.
  IntPoly divided_exact(const mpz_class& d) const;

  /// Evaluation at integer points (exact).
  mpz_class eval(const std::vector<mpz_class>& point) const;

  friend bool operator==(const IntPoly& a, const IntPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Human-readable form with the given variable names.
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void check_compatible(const IntPoly& o) const;

  std::size_t nvars_;
  std::map<Exponents, mpz_class> terms_;
};

}  // namespace rootclose

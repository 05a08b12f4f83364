#pragma once

// Exact arithmetic in the level-n root towers
//
//   S_n = Z[Π, X, Y] / (Π^{p^n} - p)                                (Free)
//   R_n = Z[Π, X, Y] / (Π^{p^n} - p, p^d + X^{d p^n} + Y^{d p^n})   (Quotient)
//
// where Π, X, Y stand for p^{1/p^n}, x^{1/p^n}, y^{1/p^n}. In Quotient mode the
// extra relation is p^d + x^d + y^d = 0, i.e. Y^{d p^n} = -p^d - X^{d p^n}.
//
// Elements are kept in normal form with respect to the two rewrite rules
//   Π^{p^n}   -> p
//   Y^{d p^n} -> -p^d - X^{d p^n}
// Their leading terms live in disjoint variables and have unit coefficients,
// so the rules are confluent and the normal form is canonical. The ring is a
// free Z-module on {Π^a X^b Y^c : a < p^n, c < d p^n (Quotient only)}.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace rootclose {

enum class TowerMode { Free, Quotient };

class TowerCtx {
 public:
  TowerCtx(std::uint32_t p, std::uint32_t level, std::uint32_t degree,
           TowerMode mode);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t level() const noexcept { return level_; }
  std::uint32_t degree() const noexcept { return degree_; }
  TowerMode mode() const noexcept { return mode_; }

  /// p^level: the Π-exponent at which Π^q = p.
  std::uint64_t q() const noexcept { return q_; }
  /// d * p^level: the Y-exponent bound in Quotient mode.
  std::uint64_t y_bound() const noexcept { return degree_ * q_; }
  /// p^d, the constant term of the Y-rewrite.
  const mpz_class& p_to_degree() const noexcept { return pd_; }

  TowerCtx at_level(std::uint32_t level) const;
  TowerCtx with_mode(TowerMode mode) const;
  /// Same p, degree and mode; levels may differ.
  bool same_family(const TowerCtx& other) const noexcept;

  friend bool operator==(const TowerCtx& a, const TowerCtx& b) noexcept {
    return a.p_ == b.p_ && a.level_ == b.level_ && a.degree_ == b.degree_ &&
           a.mode_ == b.mode_;
  }

  std::string to_string() const;

 private:
  std::uint32_t p_;
  std::uint32_t level_;
  std::uint32_t degree_;
  TowerMode mode_;
  std::uint64_t q_;
  mpz_class pd_;
};

/// Exponents of Π, X and Y. Ordered lexicographically with Y > X > Π.
struct Monomial {
  std::uint64_t pi = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) {
    return std::tie(a.y, a.x, a.pi) <=> std::tie(b.y, b.x, b.pi);
  }
  std::string to_string() const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = m.pi * 0x9E3779B97F4A7C15ULL;
    h ^= m.x + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= m.y + 0x85EBCA77C2B2AE63ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct Term {
  Monomial mono;
  mpz_class coeff;
};

/// An element of S_n or R_n in normal form.
class TowerElem {
 public:
  explicit TowerElem(const TowerCtx& ctx) : ctx_(ctx) {}

  static TowerElem constant(const TowerCtx& ctx, const mpz_class& c);
  /// c * Π^a X^b Y^c with arbitrary exponents; the result is normalized.
  static TowerElem monomial(const TowerCtx& ctx, const Monomial& m,
                            const mpz_class& c = 1);
  static TowerElem pi(const TowerCtx& ctx) { return monomial(ctx, {1, 0, 0}); }
  static TowerElem x(const TowerCtx& ctx) { return monomial(ctx, {0, 1, 0}); }
  static TowerElem y(const TowerCtx& ctx) { return monomial(ctx, {0, 0, 1}); }

  const TowerCtx& ctx() const noexcept { return ctx_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  /// Coefficient of a normal-form monomial (zero if absent).
  mpz_class coeff(const Monomial& m) const;

  TowerElem operator-() const;
  TowerElem& operator+=(const TowerElem& o);
  TowerElem& operator-=(const TowerElem& o);
  TowerElem& operator*=(const TowerElem& o);
  friend TowerElem operator+(TowerElem a, const TowerElem& b) { return a += b; }
  friend TowerElem operator-(TowerElem a, const TowerElem& b) { return a -= b; }
  friend TowerElem operator*(const TowerElem& a, const TowerElem& b);
  TowerElem scaled(const mpz_class& c) const;

  /// Repeated squaring, normalizing after every product.
  TowerElem pow(std::uint64_t e) const;

  friend bool operator==(const TowerElem& a, const TowerElem& b) {
    if (!(a.ctx_ == b.ctx_) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].mono != b.terms_[i].mono ||
          a.terms_[i].coeff != b.terms_[i].coeff) {
        return false;
      }
    }
    return true;
  }

  std::string to_string() const;

  /// Builds from terms that are already in normal form, sorted and nonzero.
  /// Unchecked apart from debug assertions.
  static TowerElem from_normal_terms(const TowerCtx& ctx, std::vector<Term> terms);

 private:
  TowerCtx ctx_;
  std::vector<Term> terms_;  // sorted ascending, no zero coefficients
};

/// Fully reduces an arbitrary term list under the two rewrite rules.
TowerElem normalize(const std::vector<Term>& raw, const TowerCtx& ctx);

/// Level embedding R_n -> R_m (m >= n): Π, X, Y map to their p^{m-n}-th powers.
TowerElem embed(const TowerElem& e, std::uint32_t to_level);

/// Brings a and b to their common (maximum) level.
std::pair<TowerElem, TowerElem> align(const TowerElem& a, const TowerElem& b);

struct NotDivisible {
  Monomial offending;
};

/// q with Π^j q = e, or the first monomial obstructing divisibility.
std::variant<TowerElem, NotDivisible> pi_divide(const TowerElem& e,
                                                std::uint64_t j);
/// Division by p = Π^{p^n}.
std::variant<TowerElem, NotDivisible> p_divide(const TowerElem& e);

/// Largest j with Π^j dividing e (std::nullopt for zero).
std::optional<std::uint64_t> pi_valuation(const TowerElem& e);

/// Canonical representative of e modulo Π^s R: the coefficient of Π^a is
/// reduced into [0, p^{ceil((s-a)/q)}).
TowerElem reduce_mod_pi_power(const TowerElem& e, std::uint64_t s);

/// Coefficientwise reduction modulo p^k (the ideal p^k R).
TowerElem reduce_mod_p_power(const TowerElem& e, std::uint64_t k);

/// Element of R/pR: a normal form with coefficients in [0, p).
class ResidueElem {
 public:
  explicit ResidueElem(const TowerCtx& ctx) : rep_(ctx) {}

  static ResidueElem from_lift(const TowerElem& e);

  const TowerCtx& ctx() const noexcept { return rep_.ctx(); }
  /// The canonical integer lift (coefficients in [0, p)).
  const TowerElem& lift() const noexcept { return rep_; }
  const std::vector<Term>& terms() const noexcept { return rep_.terms(); }
  bool is_zero() const noexcept { return rep_.is_zero(); }

  ResidueElem operator-() const;
  friend ResidueElem operator+(const ResidueElem& a, const ResidueElem& b);
  friend ResidueElem operator-(const ResidueElem& a, const ResidueElem& b);
  friend ResidueElem operator*(const ResidueElem& a, const ResidueElem& b);
  ResidueElem pow(std::uint64_t e) const;

  friend bool operator==(const ResidueElem& a, const ResidueElem& b) {
    return a.rep_ == b.rep_;
  }
  std::string to_string() const { return rep_.to_string(); }

 private:
  explicit ResidueElem(TowerElem rep) : rep_(std::move(rep)) {}
  TowerElem rep_;
};

ResidueElem reduce_mod_p(const TowerElem& e);
ResidueElem embed(const ResidueElem& e, std::uint32_t to_level);
std::pair<ResidueElem, ResidueElem> align(const ResidueElem& a,
                                          const ResidueElem& b);

/// e^p in R/pR, computed by actual exponentiation.
ResidueElem frobenius_residue(const ResidueElem& e);

/// Component of e on the Π^0 fibre, reduced mod p: the image of e in R/ΠR,
/// returned as a Free-mode residue with only X, Y exponents.
ResidueElem reduce_mod_pi(const TowerElem& e);

/// Divisibility of g by h in F_p[X, Y] (no tower relations applied).
/// Both operands must have zero Π-exponents. Single-divisor division with
/// lex order Y > X, which is exact over a field. Returns the quotient as a
/// Free-mode residue, or std::nullopt when h does not divide g.
std::optional<ResidueElem> poly_divides(const ResidueElem& h,
                                        const ResidueElem& g);

}  // namespace rootclose

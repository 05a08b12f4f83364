#pragma once

// Root closure C(R) = { x in R[1/p] : x^{p^m} in R for some m }.
//
// Elements of R[1/p] are written num / Π^j with Π = p^{1/p^n}; since
// p = Π^{p^n} every p-power denominator is a Π-power. Membership claims are
// backed by certificates that can be re-checked from scratch.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "rootclose/tower.hpp"

namespace rootclose {

/// num / Π^j at num's level. Canonical form has the smallest possible j.
class LocalElem {
 public:
  explicit LocalElem(TowerElem num, std::uint64_t denom_exp = 0);

  static LocalElem integral(const TowerElem& e) { return LocalElem(e, 0); }

  const TowerElem& num() const noexcept { return num_; }
  std::uint64_t denom_exp() const noexcept { return j_; }
  const TowerCtx& ctx() const noexcept { return num_.ctx(); }
  std::uint32_t level() const noexcept { return num_.ctx().level(); }
  bool is_integral() const noexcept { return j_ == 0; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  LocalElem at_level(std::uint32_t level) const;
  /// Divides by Π^e (raises the denominator).
  LocalElem divided_by_pi(std::uint64_t e) const;
  /// Representative of the class modulo p Π^j R; keeps coefficients bounded
  /// without changing the class modulo p C(R).
  LocalElem reduced_mod_p() const;

  LocalElem operator-() const;
  friend LocalElem operator+(const LocalElem& a, const LocalElem& b);
  friend LocalElem operator-(const LocalElem& a, const LocalElem& b);
  friend LocalElem operator*(const LocalElem& a, const LocalElem& b);
  LocalElem pow(std::uint64_t e) const;

  /// Equality in R[1/p] (levels are aligned first).
  friend bool operator==(const LocalElem& a, const LocalElem& b);

  std::string to_string() const;

 private:
  TowerElem num_;
  std::uint64_t j_;
};

/// Witness that elem^{p^m} lies in R: witness * Π^{j p^m} = num^{p^m}.
struct ClosureCert {
  LocalElem elem;
  std::uint32_t m;
  TowerElem witness;
};

struct NotMember {
  std::uint32_t m_max;
};

/// Search gave up because an intermediate power exceeded the term budget.
struct BudgetExceeded {
  std::uint32_t reached_m;
  std::size_t terms;
};

using MembershipResult = std::variant<ClosureCert, NotMember, BudgetExceeded>;

inline constexpr std::size_t kDefaultTermBudget = 400000;

/// Smallest m <= m_max with c^{p^m} in R, searched in increasing order.
/// NotMember only records that no certificate exists up to m_max.
MembershipResult membership(const LocalElem& c, std::uint32_t m_max,
                            std::size_t term_budget = kDefaultTermBudget);

/// Recomputes num^{p^m} and its division by Π^{j p^m} independently of the
/// search that produced the certificate.
bool verify_certificate(const ClosureCert& cert);

/// Proof of non-membership. If c = num/Π^j with j >= 1 canonical lies in
/// C(R) then num is nilpotent in R/ΠR. In Free mode R/ΠR = F_p[X, Y] is
/// reduced; in Quotient mode R/ΠR = F_p[X, Y]/((X^d + Y^d)^{p^n}) whose
/// nilradical is (X^d + Y^d) because gcd(d, p) = 1. Returns true when the
/// obstruction applies, i.e. c is certainly not in C(R).
bool structural_nonmember(const LocalElem& c);

/// The exponent bound 2 k p^n + n + 1 for a sum of two certified elements,
/// with n the larger certificate exponent and k the larger p-adic
/// denominator exponent ceil(j / p^level).
std::uint64_t closure_add_bound(const ClosureCert& s, const ClosureCert& t);

/// Certificate for s + t. The search runs up to closure_add_bound and is
/// guaranteed to succeed; exhausting it throws InvariantViolation.
ClosureCert closure_add(const ClosureCert& s, const ClosureCert& t);

/// Constructive kernel lemma: for a with a^{p^n} in pR, returns the
/// certificate for a / p^{1/p^n} in C(R) with m <= n. Throws
/// HypothesisNotMet if a^{p^n} is not divisible by p, and InvariantViolation
/// if no certificate with m <= n exists.
ClosureCert kernel_lemma_factor(const TowerElem& a, std::uint32_t n);

}  // namespace rootclose

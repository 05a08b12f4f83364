#pragma once

// Truncated Fontaine ring: sequences (r_0, ..., r_N) of residues with
// r_{i+1}^p = r_i. Component i lives at tower level >= i; operations embed
// operands to a common level as needed.
//
// Two modes:
//   PlainR        components are classes in R/pR (integral, reduced mod p).
//   ClosureCerts  components are classes in C(R)/pC(R), represented by
//                 LocalElems. Equality there is only semi-decidable: a
//                 difference is zero iff it divides by p inside C(R), which
//                 is confirmed by a certificate, refuted by the structural
//                 nilpotency test, or left Undetermined.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rootclose/closure.hpp"
#include "rootclose/tower.hpp"

namespace rootclose {

enum class ClosureMode { PlainR, ClosureCerts };

enum class Truth { True, False, Undetermined };

const char* to_string(Truth t);
const char* to_string(ClosureMode m);

/// Conjunction over a three-valued logic: any False wins, then Undetermined.
Truth operator&&(Truth a, Truth b);

struct ClosureSettings {
  std::uint32_t m_max = 5;
  std::size_t term_budget = kDefaultTermBudget;
};

/// Π_level^exp, e.g. p = {0, 1} and p^{1 - 1/p^n} = {n, p^n - 1}.
struct PiPower {
  std::uint32_t level;
  std::uint64_t exp;
};

/// Outcome of deciding whether (lhs - rhs) / modulus lies in R (PlainR) or
/// C(R) (ClosureCerts).
struct CongruenceCheck {
  std::string label;
  LocalElem lhs;
  LocalElem rhs;
  PiPower modulus;
  Truth result;
  std::optional<ClosureCert> cert;  // set iff result == True
  bool structural = false;          // False was proven structurally
};

CongruenceCheck check_congruence(const LocalElem& lhs, const LocalElem& rhs,
                                 PiPower modulus, ClosureMode mode,
                                 const ClosureSettings& settings,
                                 std::string label = {});

class FontaineElem {
 public:
  /// `family` fixes p, the relation and the mode; its level is ignored.
  FontaineElem(const TowerCtx& family, ClosureMode mode, std::vector<LocalElem> components);

  static FontaineElem constant(const TowerCtx& family, ClosureMode mode, std::size_t depth,
                               const mpz_class& c);

  std::size_t depth() const noexcept { return comps_.size() - 1; }
  ClosureMode mode() const noexcept { return mode_; }
  const TowerCtx& family() const noexcept { return family_; }
  const LocalElem& component(std::size_t i) const { return comps_.at(i); }
  const std::vector<LocalElem>& components() const noexcept { return comps_; }
  bool all_integral() const;
  /// Component i as an element of R/pR; requires it to be integral.
  ResidueElem residue(std::size_t i) const;

  FontaineElem truncated(std::size_t depth) const;
  FontaineElem with_mode(ClosureMode mode) const;

  FontaineElem operator-() const;
  friend FontaineElem operator+(const FontaineElem& a, const FontaineElem& b);
  friend FontaineElem operator-(const FontaineElem& a, const FontaineElem& b);
  friend FontaineElem operator*(const FontaineElem& a, const FontaineElem& b);
  FontaineElem pow(std::uint64_t e) const;

  /// Same representatives component by component (after level alignment).
  /// Sufficient for equality; necessary only in PlainR mode.
  bool same_representatives(const FontaineElem& other) const;

  std::string to_string() const;

 private:
  TowerCtx family_;
  ClosureMode mode_;
  std::vector<LocalElem> comps_;
};

/// Equality at the smaller of the two depths.
Truth equal(const FontaineElem& a, const FontaineElem& b, const ClosureSettings& settings = {});
Truth is_zero(const FontaineElem& e, const ClosureSettings& settings = {});

/// r_{i+1}^p == r_i for every consecutive pair.
Truth check_compat(const FontaineElem& e, const ClosureSettings& settings = {});

struct Generators {
  FontaineElem P;
  FontaineElem X;
  FontaineElem Y;
};

/// P = (p^{1/p^n})_n, X = (x^{1/p^n})_n, Y = (y^{1/p^n})_n with component n at level n.
Generators generators(const TowerCtx& family, std::size_t depth,
                      ClosureMode mode = ClosureMode::PlainR);

/// Componentwise p-th power. Keeps the depth.
FontaineElem frobenius(const FontaineElem& e);
/// p-th root: drops r_0, so the depth decreases by one.
FontaineElem proot(const FontaineElem& e);
FontaineElem proot(const FontaineElem& e, std::size_t times);

/// r_0: the image of e under E(R)/P -> R/pR.
ResidueElem bar_u(const FontaineElem& e);

/// An element of R known modulo p^K.
struct PadicValue {
  TowerElem value;
  std::uint64_t modulus_exp;

  std::uint32_t level() const { return value.ctx().level(); }
  bool is_zero() const { return value.is_zero(); }
};

PadicValue make_padic(const TowerElem& v, std::uint64_t modulus_exp);
/// Equality modulo p^{min(K_a, K_b)} after level alignment.
bool operator==(const PadicValue& a, const PadicValue& b);
PadicValue operator+(const PadicValue& a, const PadicValue& b);
PadicValue operator*(const PadicValue& a, const PadicValue& b);

/// lift^{p^n} mod p^K, normalizing and reducing after every product.
PadicValue theta_from_lift(const TowerElem& lift, std::uint32_t n, std::uint64_t K);

/// lim r_n^{p^n} modulo p^K. The limit is fixed modulo p^{n+1} by r_n, so
/// the computation uses r_{K-1}. Requires 1 <= K <= depth + 1 and an
/// integral component K - 1; throws PrecisionExceeded otherwise.
PadicValue theta(const FontaineElem& e, std::uint64_t K);

struct DivideByPResult {
  enum class Status { Ok, NotDivisible, Undetermined };

  Status status = Status::Ok;
  std::size_t index = 0;              // failing component
  std::optional<Monomial> offending;  // PlainR obstruction to Π-divisibility
  bool structural = false;            // ClosureCerts failure proven structurally
  std::optional<FontaineElem> quotient;
  std::vector<ClosureCert> factor_certs;     // s_n in C(R), ClosureCerts mode
  std::vector<CongruenceCheck> congruences;  // the checks of steps 3 to 5

  bool ok() const { return status == Status::Ok; }
};

const char* to_string(DivideByPResult::Status s);

/// Writes e = P * t following the injectivity argument for E(R)/P -> R/pR:
///  1. factor r_n = Π_n s_n (plain Π-division in PlainR mode, the kernel
///     lemma / closure certificates in ClosureCerts mode);
///  2. t_n = s_{n+1}^p;
///  3. check s_{n+1}^p == s_n modulo p^{1 - 1/p^n};
///  4. check t_n^p == t_{n-1} modulo p;
///  5. check Π_n t_n == r_n modulo p.
/// The quotient has depth one less than e. Requires depth >= 1 and a
/// compatible input; a refuted check in steps 3 to 5 throws InvariantViolation.
DivideByPResult divide_by_P(const FontaineElem& e, const ClosureSettings& settings = {});

}  // namespace rootclose

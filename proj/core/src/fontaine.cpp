#include "rootclose/fontaine.hpp"

#include <algorithm>
#include <sstream>

#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

namespace rootclose {

const char* to_string(Truth t) {
  switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(ClosureMode m) {
  return m == ClosureMode::PlainR ? "plain" : "closure";
}

Truth operator&&(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::Undetermined || b == Truth::Undetermined) return Truth::Undetermined;
  return Truth::True;
}

CongruenceCheck check_congruence(const LocalElem& lhs, const LocalElem& rhs, PiPower modulus,
                                 ClosureMode mode, const ClosureSettings& settings,
                                 std::string label) {
  CongruenceCheck out{std::move(label), lhs, rhs, modulus, Truth::Undetermined, std::nullopt, false};
  const std::uint32_t level = std::max({lhs.level(), rhs.level(), modulus.level});
  const std::uint64_t e = modulus.exp * upow(lhs.ctx().p(), level - modulus.level);
  const LocalElem diff = (lhs.at_level(level) - rhs.at_level(level)).divided_by_pi(e);
  if (diff.is_integral()) {
    out.result = Truth::True;
    out.cert = ClosureCert{diff, 0, diff.num()};
    return out;
  }
  if (mode == ClosureMode::PlainR) {
    out.result = Truth::False;
    return out;
  }
  if (structural_nonmember(diff)) {
    out.result = Truth::False;
    out.structural = true;
    return out;
  }
  MembershipResult r = membership(diff, settings.m_max, settings.term_budget);
  if (auto* cert = std::get_if<ClosureCert>(&r)) {
    out.result = Truth::True;
    out.cert = std::move(*cert);
  }
  return out;
}

FontaineElem::FontaineElem(const TowerCtx& family, ClosureMode mode,
                           std::vector<LocalElem> components)
    : family_(family.at_level(0)), mode_(mode) {
  if (components.empty()) throw DomainError("FontaineElem: needs at least r_0");
  comps_.reserve(components.size());
  for (auto& c : components) {
    if (!c.ctx().same_family(family_)) throw DomainError("FontaineElem: component family mismatch");
    if (mode_ == ClosureMode::PlainR && !c.is_integral()) {
      throw DomainError("FontaineElem: PlainR components must lie in R");
    }
    comps_.push_back(c.reduced_mod_p());
  }
}

FontaineElem FontaineElem::constant(const TowerCtx& family, ClosureMode mode, std::size_t depth,
                                    const mpz_class& c) {
  const TowerCtx base = family.at_level(0);
  std::vector<LocalElem> comps(depth + 1, LocalElem::integral(TowerElem::constant(base, c)));
  return FontaineElem(base, mode, std::move(comps));
}

bool FontaineElem::all_integral() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const LocalElem& c) { return c.is_integral(); });
}

ResidueElem FontaineElem::residue(std::size_t i) const {
  const LocalElem& c = comps_.at(i);
  if (!c.is_integral()) throw DomainError("FontaineElem::residue: component is not in R");
  return reduce_mod_p(c.num());
}

FontaineElem FontaineElem::truncated(std::size_t depth) const {
  if (depth > this->depth()) throw DomainError("FontaineElem::truncated: depth too large");
  return FontaineElem(family_, mode_, {comps_.begin(), comps_.begin() + depth + 1});
}

FontaineElem FontaineElem::with_mode(ClosureMode mode) const {
  return FontaineElem(family_, mode, comps_);
}

FontaineElem FontaineElem::operator-() const {
  std::vector<LocalElem> out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(-c);
  return FontaineElem(family_, mode_, std::move(out));
}

namespace {

template <class Op>
FontaineElem componentwise(const FontaineElem& a, const FontaineElem& b, Op op) {
  if (a.mode() != b.mode()) throw DomainError("FontaineElem: mode mismatch");
  if (!a.family().same_family(b.family())) throw DomainError("FontaineElem: family mismatch");
  const std::size_t depth = std::min(a.depth(), b.depth());
  std::vector<LocalElem> out;
  out.reserve(depth + 1);
  for (std::size_t i = 0; i <= depth; ++i) out.push_back(op(a.component(i), b.component(i)));
  return FontaineElem(a.family(), a.mode(), std::move(out));
}

}  // namespace

FontaineElem operator+(const FontaineElem& a, const FontaineElem& b) {
  return componentwise(a, b, [](const LocalElem& x, const LocalElem& y) { return x + y; });
}

FontaineElem operator-(const FontaineElem& a, const FontaineElem& b) {
  return componentwise(a, b, [](const LocalElem& x, const LocalElem& y) { return x - y; });
}

FontaineElem operator*(const FontaineElem& a, const FontaineElem& b) {
  return componentwise(a, b, [](const LocalElem& x, const LocalElem& y) { return x * y; });
}

FontaineElem FontaineElem::pow(std::uint64_t e) const {
  FontaineElem result = constant(family_, mode_, depth(), 1);
  FontaineElem base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

bool FontaineElem::same_representatives(const FontaineElem& other) const {
  const std::size_t depth = std::min(this->depth(), other.depth());
  for (std::size_t i = 0; i <= depth; ++i) {
    if (!(comps_[i] == other.comps_[i])) return false;
  }
  return true;
}

std::string FontaineElem::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (i > 0) os << ", ";
    os << comps_[i].to_string() << " @" << comps_[i].level();
  }
  os << ")";
  return os.str();
}

Truth equal(const FontaineElem& a, const FontaineElem& b, const ClosureSettings& settings) {
  if (a.mode() != b.mode()) throw DomainError("equal: mode mismatch");
  const std::size_t depth = std::min(a.depth(), b.depth());
  Truth acc = Truth::True;
  for (std::size_t i = 0; i <= depth; ++i) {
    if (a.component(i) == b.component(i)) continue;
    if (a.mode() == ClosureMode::PlainR) return Truth::False;
    const CongruenceCheck c = check_congruence(a.component(i), b.component(i), {0, 1},
                                               ClosureMode::ClosureCerts, settings);
    if (c.result == Truth::False) return Truth::False;
    acc = acc && c.result;
  }
  return acc;
}

Truth is_zero(const FontaineElem& e, const ClosureSettings& settings) {
  return equal(e, FontaineElem::constant(e.family(), e.mode(), e.depth(), 0), settings);
}

Truth check_compat(const FontaineElem& e, const ClosureSettings& settings) {
  const std::uint32_t p = e.family().p();
  Truth acc = Truth::True;
  for (std::size_t i = 0; i < e.depth(); ++i) {
    if (e.mode() == ClosureMode::PlainR) {
      auto [lhs, rhs] = align(frobenius_residue(e.residue(i + 1)), e.residue(i));
      if (!(lhs == rhs)) return Truth::False;
      continue;
    }
    const CongruenceCheck c = check_congruence(e.component(i + 1).pow(p), e.component(i), {0, 1},
                                               ClosureMode::ClosureCerts, settings);
    if (c.result == Truth::False) return Truth::False;
    acc = acc && c.result;
  }
  return acc;
}

Generators generators(const TowerCtx& family, std::size_t depth, ClosureMode mode) {
  std::vector<LocalElem> P, X, Y;
  for (std::size_t i = 0; i <= depth; ++i) {
    const TowerCtx ctx = family.at_level(static_cast<std::uint32_t>(i));
    P.push_back(LocalElem::integral(TowerElem::pi(ctx)));
    X.push_back(LocalElem::integral(TowerElem::x(ctx)));
    Y.push_back(LocalElem::integral(TowerElem::y(ctx)));
  }
  return Generators{FontaineElem(family, mode, std::move(P)), FontaineElem(family, mode, std::move(X)),
                    FontaineElem(family, mode, std::move(Y))};
}

FontaineElem frobenius(const FontaineElem& e) {
  std::vector<LocalElem> out;
  out.reserve(e.depth() + 1);
  for (std::size_t i = 0; i <= e.depth(); ++i) {
    if (e.mode() == ClosureMode::PlainR) {
      out.push_back(LocalElem::integral(frobenius_residue(e.residue(i)).lift()));
    } else {
      out.push_back(e.component(i).pow(e.family().p()));
    }
  }
  return FontaineElem(e.family(), e.mode(), std::move(out));
}

FontaineElem proot(const FontaineElem& e) {
  if (e.depth() == 0) throw DepthExhausted("proot: no components left to shift", 0);
  return FontaineElem(e.family(), e.mode(), {e.components().begin() + 1, e.components().end()});
}

FontaineElem proot(const FontaineElem& e, std::size_t times) {
  if (times > e.depth()) throw DepthExhausted("proot: depth exhausted", e.depth());
  return FontaineElem(e.family(), e.mode(),
                      {e.components().begin() + static_cast<std::ptrdiff_t>(times), e.components().end()});
}

ResidueElem bar_u(const FontaineElem& e) { return e.residue(0); }

PadicValue make_padic(const TowerElem& v, std::uint64_t modulus_exp) {
  if (modulus_exp == 0) throw DomainError("PadicValue: modulus exponent must be positive");
  return PadicValue{reduce_mod_p_power(v, modulus_exp), modulus_exp};
}

bool operator==(const PadicValue& a, const PadicValue& b) {
  const std::uint64_t k = std::min(a.modulus_exp, b.modulus_exp);
  auto [x, y] = align(a.value, b.value);
  return reduce_mod_p_power(x, k) == reduce_mod_p_power(y, k);
}

PadicValue operator+(const PadicValue& a, const PadicValue& b) {
  auto [x, y] = align(a.value, b.value);
  return make_padic(x + y, std::min(a.modulus_exp, b.modulus_exp));
}

PadicValue operator*(const PadicValue& a, const PadicValue& b) {
  auto [x, y] = align(a.value, b.value);
  return make_padic(x * y, std::min(a.modulus_exp, b.modulus_exp));
}

namespace {

TowerElem pow_mod_p_power(const TowerElem& base, std::uint64_t e, std::uint64_t K) {
  TowerElem result = TowerElem::constant(base.ctx(), 1);
  TowerElem b = base;
  while (e > 0) {
    if (e & 1U) result = reduce_mod_p_power(result * b, K);
    e >>= 1U;
    if (e > 0) b = reduce_mod_p_power(b * b, K);
  }
  return result;
}

}  // namespace

PadicValue theta_from_lift(const TowerElem& lift, std::uint32_t n, std::uint64_t K) {
  if (K == 0) throw DomainError("theta: precision must be positive");
  TowerElem v = reduce_mod_p_power(lift, K);
  for (std::uint32_t i = 0; i < n; ++i) v = pow_mod_p_power(v, lift.ctx().p(), K);
  return PadicValue{std::move(v), K};
}

PadicValue theta(const FontaineElem& e, std::uint64_t K) {
  if (K == 0) throw DomainError("theta: precision must be positive");
  if (K > e.depth() + 1) {
    throw PrecisionExceeded("theta: precision p^" + std::to_string(K) + " needs depth " +
                            std::to_string(K - 1) + ", have " + std::to_string(e.depth()));
  }
  const LocalElem& r = e.component(K - 1);
  if (!r.is_integral()) throw DomainError("theta: component is not in R");
  return theta_from_lift(r.num(), static_cast<std::uint32_t>(K - 1), K);
}

const char* to_string(DivideByPResult::Status s) {
  switch (s) {
    case DivideByPResult::Status::Ok: return "ok";
    case DivideByPResult::Status::NotDivisible: return "not_divisible";
    case DivideByPResult::Status::Undetermined: return "undetermined";
  }
  return "?";
}

DivideByPResult divide_by_P(const FontaineElem& e, const ClosureSettings& settings) {
  DivideByPResult out;
  if (e.depth() == 0) throw DepthExhausted("divide_by_P: needs depth >= 1", 0);
  const std::size_t depth = e.depth();
  const ClosureMode mode = e.mode();
  const TowerCtx& family = e.family();
  const std::uint32_t p = family.p();
  const LocalElem zero = LocalElem::integral(TowerElem(family));

  auto fail = [&](DivideByPResult::Status status, std::size_t index) {
    out.status = status;
    out.index = index;
    return out;
  };

  // r_0 must vanish.
  if (mode == ClosureMode::PlainR) {
    const ResidueElem r0 = e.residue(0);
    if (!r0.is_zero()) {
      out.offending = r0.terms().front().mono;
      return fail(DivideByPResult::Status::NotDivisible, 0);
    }
  } else {
    CongruenceCheck c = check_congruence(e.component(0), zero, {0, 1}, mode, settings, "r_0 == 0 mod p");
    out.structural = c.structural;
    const Truth verdict = c.result;
    out.congruences.push_back(std::move(c));
    if (verdict == Truth::False) return fail(DivideByPResult::Status::NotDivisible, 0);
    if (verdict == Truth::Undetermined) return fail(DivideByPResult::Status::Undetermined, 0);
  }

  // Step 1: r_n = Π_n s_n.
  std::vector<LocalElem> s(depth + 1, zero);
  for (std::size_t n = 1; n <= depth; ++n) {
    const auto nn = static_cast<std::uint32_t>(n);
    const std::uint32_t level = std::max(e.component(n).level(), nn);
    const LocalElem r = e.component(n).at_level(level);
    const std::uint64_t j = upow(p, level - nn);
    if (mode == ClosureMode::PlainR) {
      auto q = pi_divide(r.num(), j);
      if (auto* bad = std::get_if<NotDivisible>(&q)) {
        out.offending = bad->offending;
        return fail(DivideByPResult::Status::NotDivisible, n);
      }
      s[n] = LocalElem::integral(std::get<TowerElem>(q));
      continue;
    }
    std::optional<ClosureCert> cert;
    if (r.is_integral()) {
      try {
        cert = kernel_lemma_factor(r.num(), nn);
      } catch (const HypothesisNotMet&) {
        // r_n^{p^n} only vanishes modulo pC(R); fall through to the search.
      }
    }
    if (!cert) {
      const LocalElem candidate = r.divided_by_pi(j);
      if (structural_nonmember(candidate)) {
        out.structural = true;
        return fail(DivideByPResult::Status::NotDivisible, n);
      }
      MembershipResult m = membership(candidate, settings.m_max, settings.term_budget);
      if (auto* c = std::get_if<ClosureCert>(&m)) {
        cert = std::move(*c);
      } else {
        return fail(DivideByPResult::Status::Undetermined, n);
      }
    }
    s[n] = cert->elem;
    out.factor_certs.push_back(std::move(*cert));
  }

  // Step 2.
  std::vector<LocalElem> t;
  t.reserve(depth);
  for (std::size_t n = 0; n < depth; ++n) t.push_back(s[n + 1].pow(p));

  auto record = [&](CongruenceCheck c, std::size_t n) -> bool {
    const Truth verdict = c.result;
    const std::string label = c.label;
    out.congruences.push_back(std::move(c));
    if (verdict == Truth::False) {
      throw InvariantViolation("divide_by_P: refuted congruence " + label +
                               " (is the input compatible?)");
    }
    if (verdict == Truth::Undetermined) {
      fail(DivideByPResult::Status::Undetermined, n);
      return false;
    }
    return true;
  };

  // Step 3: s_{n+1}^p == s_n modulo p^{1 - 1/p^n}.
  for (std::size_t n = 1; n < depth; ++n) {
    const auto nn = static_cast<std::uint32_t>(n);
    if (!record(check_congruence(t[n], s[n], {nn, upow(p, nn) - 1}, mode, settings,
                                 "s_" + std::to_string(n + 1) + "^p == s_" + std::to_string(n) +
                                     " mod p^(1-1/p^" + std::to_string(n) + ")"),
                n)) {
      return out;
    }
  }
  // Step 4: t_n^p == t_{n-1} modulo p.
  for (std::size_t n = 1; n < depth; ++n) {
    if (!record(check_congruence(t[n].pow(p), t[n - 1], {0, 1}, mode, settings,
                                 "t_" + std::to_string(n) + "^p == t_" + std::to_string(n - 1) + " mod p"),
                n)) {
      return out;
    }
  }
  // Step 5: Π_n t_n == r_n modulo p.
  for (std::size_t n = 0; n < depth; ++n) {
    const LocalElem pi_n =
        LocalElem::integral(TowerElem::pi(family.at_level(static_cast<std::uint32_t>(n))));
    if (!record(check_congruence(pi_n * t[n], e.component(n), {0, 1}, mode, settings,
                                 "P*t_" + std::to_string(n) + " == r_" + std::to_string(n) + " mod p"),
                n)) {
      return out;
    }
  }

  out.quotient = FontaineElem(family, mode, std::move(t));
  out.status = DivideByPResult::Status::Ok;
  return out;
}

}  // namespace rootclose

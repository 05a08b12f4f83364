#include "rootclose/closure.hpp"

#include <algorithm>
#include <sstream>

#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

namespace rootclose {

namespace {

TowerElem pi_power(const TowerCtx& ctx, std::uint64_t e) {
  return TowerElem::monomial(ctx, Monomial{e, 0, 0});
}

TowerElem expect_quotient(std::variant<TowerElem, NotDivisible> r, const char* where) {
  if (auto* q = std::get_if<TowerElem>(&r)) return std::move(*q);
  throw InvariantViolation(std::string(where) + ": expected exact division");
}

std::uint64_t p_adic_denominator(const LocalElem& c) {
  const std::uint64_t q = c.ctx().q();
  return (c.denom_exp() + q - 1) / q;
}

}  // namespace

LocalElem::LocalElem(TowerElem num, std::uint64_t denom_exp)
    : num_(std::move(num)), j_(denom_exp) {
  if (num_.is_zero()) {
    j_ = 0;
    return;
  }
  if (j_ == 0) return;
  const std::uint64_t v = *pi_valuation(num_);
  const std::uint64_t cancel = std::min(v, j_);
  if (cancel > 0) {
    num_ = expect_quotient(pi_divide(num_, cancel), "LocalElem canonical form");
    j_ -= cancel;
  }
}

LocalElem LocalElem::at_level(std::uint32_t level) const {
  if (level == this->level()) return *this;
  if (level < this->level()) throw DomainError("LocalElem::at_level: cannot lower the level");
  const std::uint64_t f = upow(ctx().p(), level - this->level());
  return LocalElem(embed(num_, level), j_ * f);
}

LocalElem LocalElem::divided_by_pi(std::uint64_t e) const { return LocalElem(num_, j_ + e); }

LocalElem LocalElem::reduced_mod_p() const {
  return LocalElem(reduce_mod_pi_power(num_, ctx().q() + j_), j_);
}

LocalElem LocalElem::operator-() const { return LocalElem(-num_, j_); }

LocalElem operator+(const LocalElem& a, const LocalElem& b) {
  if (!a.ctx().same_family(b.ctx())) throw DomainError("LocalElem add: different families");
  const std::uint32_t level = std::max(a.level(), b.level());
  const LocalElem x = a.at_level(level);
  const LocalElem y = b.at_level(level);
  const std::uint64_t j = std::max(x.j_, y.j_);
  const TowerCtx& ctx = x.ctx();
  TowerElem num = x.num_ * pi_power(ctx, j - x.j_) + y.num_ * pi_power(ctx, j - y.j_);
  return LocalElem(std::move(num), j);
}

LocalElem operator-(const LocalElem& a, const LocalElem& b) { return a + (-b); }

LocalElem operator*(const LocalElem& a, const LocalElem& b) {
  if (!a.ctx().same_family(b.ctx())) throw DomainError("LocalElem mul: different families");
  const std::uint32_t level = std::max(a.level(), b.level());
  const LocalElem x = a.at_level(level);
  const LocalElem y = b.at_level(level);
  return LocalElem(x.num_ * y.num_, x.j_ + y.j_);
}

LocalElem LocalElem::pow(std::uint64_t e) const { return LocalElem(num_.pow(e), j_ * e); }

bool operator==(const LocalElem& a, const LocalElem& b) {
  if (!a.ctx().same_family(b.ctx())) return false;
  const std::uint32_t level = std::max(a.level(), b.level());
  const LocalElem x = a.at_level(level);
  const LocalElem y = b.at_level(level);
  return x.j_ == y.j_ && x.num_ == y.num_;
}

std::string LocalElem::to_string() const {
  if (j_ == 0) return num_.to_string();
  std::ostringstream os;
  os << "(" << num_.to_string() << ")/Pi^" << j_;
  return os.str();
}

MembershipResult membership(const LocalElem& c, std::uint32_t m_max,
                            std::size_t term_budget) {
  if (c.is_integral()) return ClosureCert{c, 0, c.num()};
  const std::uint32_t p = c.ctx().p();
  TowerElem power = c.num();
  std::uint64_t required = c.denom_exp();
  for (std::uint32_t m = 0; m <= m_max; ++m) {
    if (m > 0) {
      // power <- power^p, one factor at a time so the budget is enforced early.
      const TowerElem base = power;
      for (std::uint32_t i = 1; i < p; ++i) {
        // The schoolbook product touches |power| * |base| pairs before it
        // collapses; refuse products that would dwarf the budget.
        if (power.size() * base.size() > 64 * term_budget) return BudgetExceeded{m, power.size()};
        power = power * base;
        if (power.size() > term_budget) return BudgetExceeded{m, power.size()};
      }
      required *= p;
    }
    auto q = pi_divide(power, required);
    if (auto* w = std::get_if<TowerElem>(&q)) return ClosureCert{c, m, std::move(*w)};
  }
  return NotMember{m_max};
}

bool verify_certificate(const ClosureCert& cert) {
  const LocalElem& c = cert.elem;
  if (!(cert.witness.ctx() == c.ctx())) return false;
  const std::uint64_t e = upow(c.ctx().p(), cert.m);
  const TowerElem power = c.num().pow(e);
  auto q = pi_divide(power, c.denom_exp() * e);
  const auto* w = std::get_if<TowerElem>(&q);
  return w != nullptr && *w == cert.witness;
}

bool structural_nonmember(const LocalElem& c) {
  if (c.is_integral()) return false;
  const ResidueElem g = reduce_mod_pi(c.num());
  if (c.ctx().mode() == TowerMode::Free) return !g.is_zero();
  const TowerCtx free_ctx = c.ctx().with_mode(TowerMode::Free);
  const std::uint64_t d = c.ctx().degree();
  const ResidueElem h = ResidueElem::from_lift(
      TowerElem::monomial(free_ctx, {0, d, 0}) + TowerElem::monomial(free_ctx, {0, 0, d}));
  return !poly_divides(h, g).has_value();
}

std::uint64_t closure_add_bound(const ClosureCert& s, const ClosureCert& t) {
  const std::uint32_t n = std::max(s.m, t.m);
  const std::uint64_t k = std::max(p_adic_denominator(s.elem), p_adic_denominator(t.elem));
  return 2 * k * upow(s.elem.ctx().p(), n) + n + 1;
}

ClosureCert closure_add(const ClosureCert& s, const ClosureCert& t) {
  const std::uint64_t bound = closure_add_bound(s, t);
  const LocalElem sum = s.elem + t.elem;
  const auto m_max = static_cast<std::uint32_t>(std::min<std::uint64_t>(bound, UINT32_MAX));
  MembershipResult r = membership(sum, m_max);
  if (auto* cert = std::get_if<ClosureCert>(&r)) return std::move(*cert);
  if (auto* b = std::get_if<BudgetExceeded>(&r)) {
    throw ResourceLimitExceeded("closure_add: term budget exceeded at m = " +
                                std::to_string(b->reached_m));
  }
  throw InvariantViolation("closure_add: no certificate for s + t up to m = " +
                           std::to_string(bound));
}

ClosureCert kernel_lemma_factor(const TowerElem& a, std::uint32_t n) {
  const TowerCtx& ctx = a.ctx();
  if (n == 0) throw DomainError("kernel_lemma_factor: n must be positive");
  if (ctx.level() < n) {
    throw DomainError("kernel_lemma_factor: element level " + std::to_string(ctx.level()) +
                      " does not contain p^{1/p^" + std::to_string(n) + "}");
  }
  const std::uint64_t pn = upow(ctx.p(), n);
  // a^{p^n} in pR  <=>  (a mod p)^{p^n} = 0 in R/pR.
  if (!reduce_mod_p(a).pow(pn).is_zero()) {
    throw HypothesisNotMet("kernel_lemma_factor: a^{p^" + std::to_string(n) +
                           "} is not divisible by p");
  }
  const LocalElem quotient(a, upow(ctx.p(), ctx.level() - n));
  MembershipResult r = membership(quotient, n);
  if (auto* cert = std::get_if<ClosureCert>(&r)) return std::move(*cert);
  throw InvariantViolation("kernel_lemma_factor: a/p^{1/p^n} has no certificate with m <= n");
}

}  // namespace rootclose

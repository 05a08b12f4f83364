#include <gtest/gtest.h>

#include "rootclose/closure.hpp"
#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

using namespace rootclose;

namespace {

TowerCtx quot(std::uint32_t level) { return TowerCtx(5, level, 3, TowerMode::Quotient); }

TowerElem mono(const TowerCtx& c, std::uint64_t a, std::uint64_t b, std::uint64_t e, const mpz_class& k = 1) {
  return TowerElem::monomial(c, {a, b, e}, k);
}

// Π^3 + X^3 + Y^3 at the given level.
TowerElem r(std::uint32_t level) {
  const auto c = quot(level);
  return mono(c, 3, 0, 0) + mono(c, 0, 3, 0) + mono(c, 0, 0, 3);
}

mpz_class factorial(unsigned n) {
  mpz_class f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// (Π^3 + X^3 + Y^3)^n by the multinomial theorem, one monomial at a time.
TowerElem multinomial_cube_sum(const TowerCtx& c, unsigned n) {
  TowerElem acc(c);
  for (unsigned i = 0; i <= n; ++i) {
    for (unsigned j = 0; i + j <= n; ++j) {
      const unsigned k = n - i - j;
      const mpz_class coeff = factorial(n) / (factorial(i) * factorial(j) * factorial(k));
      acc += mono(c, 3 * i, 3 * j, 3 * k, coeff);
    }
  }
  return acc;
}

ClosureCert cert_of(const MembershipResult& m) {
  if (!std::holds_alternative<ClosureCert>(m)) throw std::runtime_error("expected a certificate");
  return std::get<ClosureCert>(m);
}

}  // namespace

TEST(LocalElem, CanonicalDenominator) {
  const auto c = quot(1);
  const LocalElem a(mono(c, 2, 1, 0), 3);
  EXPECT_EQ(a.denom_exp(), 1U);
  EXPECT_EQ(a.num(), TowerElem::x(c));
  EXPECT_EQ(LocalElem(TowerElem::constant(c, 5), 1), LocalElem::integral(mono(c, 4, 0, 0)));
  EXPECT_TRUE(LocalElem(TowerElem(c), 7).is_integral());
  // 1/p at level 0 equals Π^{-5} at level 1.
  EXPECT_EQ(LocalElem(TowerElem::constant(quot(0), 1), 1), LocalElem(TowerElem::constant(quot(1), 1), 5));
}

TEST(Closure, FirstRootHasExponentOne) {
  const LocalElem c1(r(1), 1);
  const ClosureCert cert = cert_of(membership(c1, 5));
  EXPECT_EQ(cert.m, 1U);
  EXPECT_TRUE(verify_certificate(cert));
  // witness * Π^5 = witness * 5 must be the expanded fifth power.
  EXPECT_EQ(cert.witness.scaled(5), multinomial_cube_sum(quot(1), 5));
  // Nothing smaller works: c1 itself is not integral.
  EXPECT_TRUE(std::holds_alternative<NotMember>(membership(c1, 0)));
}

TEST(Closure, SecondRootHasExponentTwo) {
  const LocalElem c2(r(2), 1);
  const ClosureCert cert = cert_of(membership(c2, 5));
  EXPECT_EQ(cert.m, 2U);
  EXPECT_TRUE(verify_certificate(cert));
  EXPECT_TRUE(std::holds_alternative<NotMember>(membership(c2, 1)));
}

TEST(Closure, IntegralElementsNeedNoPower) {
  const auto c = quot(1);
  const ClosureCert cert = cert_of(membership(LocalElem::integral(TowerElem::x(c) + mono(c, 3, 0, 0)), 5));
  EXPECT_EQ(cert.m, 0U);
  EXPECT_TRUE(verify_certificate(cert));
}

TEST(Closure, NonMemberIsReportedAndProvenStructurally) {
  const auto c = quot(1);
  const LocalElem bad(TowerElem::x(c), 1);
  const auto res = membership(bad, 3);
  ASSERT_TRUE(std::holds_alternative<NotMember>(res));
  EXPECT_EQ(std::get<NotMember>(res).m_max, 3U);
  EXPECT_TRUE(structural_nonmember(bad));
  EXPECT_FALSE(structural_nonmember(LocalElem(r(1), 1)));
}

TEST(Closure, TamperedCertificateIsRejected) {
  ClosureCert cert = cert_of(membership(LocalElem(r(1), 1), 5));
  cert.witness += TowerElem::constant(cert.witness.ctx(), 1);
  EXPECT_FALSE(verify_certificate(cert));
  ClosureCert wrong_m = cert_of(membership(LocalElem(r(1), 1), 5));
  wrong_m.m = 2;
  EXPECT_FALSE(verify_certificate(wrong_m));
}

TEST(Closure, BudgetIsReported) {
  const auto res = membership(LocalElem(r(2), 1), 5, 10);
  EXPECT_TRUE(std::holds_alternative<BudgetExceeded>(res));
}

TEST(ClosureAdd, Examples) {
  const auto c = quot(1);
  const ClosureCert c1 = cert_of(membership(LocalElem(r(1), 1), 5));
  const ClosureCert x = cert_of(membership(LocalElem::integral(TowerElem::x(c)), 5));

  const ClosureCert s = closure_add(c1, x);
  EXPECT_EQ(s.m, 1U);
  EXPECT_EQ(s.elem, c1.elem + x.elem);
  EXPECT_TRUE(verify_certificate(s));

  const ClosureCert d = closure_add(c1, c1);
  EXPECT_EQ(d.m, 1U);
  EXPECT_TRUE(verify_certificate(d));

  // k = ceil(1/5) = 1, n = 1.
  EXPECT_EQ(closure_add_bound(c1, c1), 2U * 1 * 5 + 1 + 1);
  EXPECT_EQ(closure_add(x, x).m, 0U);
}

TEST(KernelLemma, Examples) {
  const auto c = quot(1);
  const ClosureCert pi = kernel_lemma_factor(TowerElem::pi(c), 1);
  EXPECT_EQ(pi.m, 0U);
  EXPECT_EQ(pi.elem, LocalElem::integral(TowerElem::constant(c, 1)));

  const ClosureCert u = kernel_lemma_factor(r(1), 1);
  EXPECT_EQ(u.m, 1U);
  EXPECT_EQ(u.elem, LocalElem(r(1), 1));
  EXPECT_TRUE(verify_certificate(u));

  EXPECT_THROW(kernel_lemma_factor(TowerElem::x(c), 1), HypothesisNotMet);
}

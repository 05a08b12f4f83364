#include <gtest/gtest.h>

#include "rootclose/errors.hpp"
#include "rootclose/fontaine.hpp"

using namespace rootclose;

namespace {

const TowerCtx kFamily(5, 0, 3, TowerMode::Quotient);

TowerElem mono(const TowerCtx& c, std::uint64_t a, std::uint64_t b, std::uint64_t e) {
  return TowerElem::monomial(c, {a, b, e});
}

FontaineElem eta(std::size_t depth, ClosureMode mode) {
  const Generators g = generators(kFamily, depth, mode);
  return g.P.pow(3) + g.X.pow(3) + g.Y.pow(3);
}

}  // namespace

TEST(Fontaine, GeneratorComponents) {
  const Generators g = generators(kFamily, 3);
  for (std::size_t n = 0; n <= 3; ++n) {
    const TowerCtx c = kFamily.at_level(static_cast<std::uint32_t>(n));
    EXPECT_EQ(g.X.component(n), LocalElem::integral(TowerElem::x(c)));
    EXPECT_EQ(g.P.residue(n), reduce_mod_p(TowerElem::pi(c)));
  }
  // Π_0 = p vanishes in R/pR.
  EXPECT_TRUE(bar_u(g.P).is_zero());
}

TEST(Fontaine, Compatibility) {
  const Generators g = generators(kFamily, 3);
  EXPECT_EQ(check_compat(g.P), Truth::True);
  EXPECT_EQ(check_compat(eta(3, ClosureMode::PlainR)), Truth::True);
  const FontaineElem bad(kFamily, ClosureMode::PlainR,
                         {LocalElem::integral(TowerElem::x(kFamily.at_level(0))),
                          LocalElem::integral(TowerElem::y(kFamily.at_level(1)))});
  EXPECT_EQ(check_compat(bad), Truth::False);
}

TEST(Fontaine, FrobeniusAndRoot) {
  const FontaineElem e = eta(3, ClosureMode::PlainR);
  const FontaineElem f = frobenius(e);
  EXPECT_TRUE(f.same_representatives(e * e * e * e * e));
  EXPECT_EQ(equal(proot(f), e.truncated(2)), Truth::True);
  const Generators g = generators(kFamily, 3);
  // proot(P)_n = Π_{n+1}, so P = proot(P)^5.
  EXPECT_EQ(equal(proot(g.P).pow(5), g.P.truncated(2)), Truth::True);
  EXPECT_EQ(proot(e, 2).depth(), 1U);
}

TEST(Fontaine, BarU) {
  const Generators g = generators(kFamily, 2);
  EXPECT_TRUE(bar_u(eta(2, ClosureMode::PlainR)).is_zero());
  EXPECT_EQ(bar_u(g.X), reduce_mod_p(TowerElem::x(kFamily.at_level(0))));
  EXPECT_TRUE(bar_u(g.P * g.X).is_zero());
}

TEST(Fontaine, Theta) {
  const Generators g = generators(kFamily, 3);
  const TowerCtx c0 = kFamily.at_level(0);
  EXPECT_EQ(theta(g.P, 3), make_padic(TowerElem::constant(c0, 5), 3));
  EXPECT_EQ(theta(g.X, 2), make_padic(TowerElem::x(c0), 2));
  EXPECT_TRUE(theta(FontaineElem::constant(kFamily, ClosureMode::PlainR, 3, 0), 2).is_zero());
  EXPECT_THROW(theta(g.X, 5), PrecisionExceeded);
  // theta is multiplicative.
  EXPECT_EQ(theta(g.P * g.X, 3), theta(g.P, 3) * theta(g.X, 3));
}

TEST(Fontaine, DivideExactMultiple) {
  const Generators g = generators(kFamily, 3);
  const DivideByPResult res = divide_by_P(g.P * g.X);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(equal(*res.quotient, g.X.truncated(2)), Truth::True);
}

TEST(Fontaine, EtaNeedsTheClosure) {
  const DivideByPResult plain = divide_by_P(eta(3, ClosureMode::PlainR));
  EXPECT_EQ(plain.status, DivideByPResult::Status::NotDivisible);
  EXPECT_EQ(plain.index, 1U);
  ASSERT_TRUE(plain.offending.has_value());
  EXPECT_EQ(*plain.offending, (Monomial{0, 3, 0}));

  const FontaineElem e = eta(3, ClosureMode::ClosureCerts);
  const DivideByPResult res = divide_by_P(e);
  ASSERT_TRUE(res.ok());
  // One certificate per component r_1 .. r_3, with exponent n for r_n.
  ASSERT_EQ(res.factor_certs.size(), 3U);
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_EQ(res.factor_certs[n - 1].m, n);
    EXPECT_TRUE(verify_certificate(res.factor_certs[n - 1]));
  }
  for (const auto& c : res.congruences) EXPECT_EQ(c.result, Truth::True) << c.label;
  // t_n = s_{n+1}^5 with s_n = r_n / Π_n.
  for (std::size_t n = 0; n < 3; ++n) {
    const TowerCtx c = kFamily.at_level(static_cast<std::uint32_t>(n + 1));
    const LocalElem s(mono(c, 3, 0, 0) + mono(c, 0, 3, 0) + mono(c, 0, 0, 3), 1);
    const CongruenceCheck chk = check_congruence(res.quotient->component(n), s.pow(5), PiPower{0, 1},
                                                 ClosureMode::ClosureCerts, {});
    EXPECT_EQ(chk.result, Truth::True) << n;
  }
  const Generators g = generators(kFamily, 3, ClosureMode::ClosureCerts);
  EXPECT_EQ(equal(g.P.truncated(2) * *res.quotient, e), Truth::True);
}

TEST(FontaineProperty, RingIdentities) {
  const Generators g = generators(kFamily, 3);
  const std::vector<FontaineElem> xs = {g.P, g.X, g.Y, g.P + g.X, g.X * g.Y - g.P};
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      EXPECT_EQ(check_compat(a * b), Truth::True);
      EXPECT_EQ(check_compat(a + b), Truth::True);
      EXPECT_EQ(equal(a * b, b * a), Truth::True);
      EXPECT_EQ(bar_u(a * b), bar_u(a) * bar_u(b));
      EXPECT_EQ(bar_u(a + b), bar_u(a) + bar_u(b));
    }
  }
}

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

#include "rootclose/errors.hpp"
#include "rootclose/witt.hpp"

using namespace rootclose;

namespace {

const TowerCtx kFamily(5, 0, 3, TowerMode::Quotient);

// Ghost components computed straight from the definition.
std::vector<mpz_class> ghost_oracle(const std::vector<mpz_class>& a, unsigned long p) {
  std::vector<mpz_class> w;
  for (std::size_t n = 0; n < a.size(); ++n) {
    mpz_class s = 0, pj = 1;
    for (std::size_t j = 0; j <= n; ++j) {
      mpz_class t;
      unsigned long e = 1;
      for (std::size_t k = j; k < n; ++k) e *= p;
      mpz_pow_ui(t.get_mpz_t(), a[j].get_mpz_t(), e);
      s += pj * t;
      pj *= p;
    }
    w.push_back(s);
  }
  return w;
}

std::vector<mpz_class> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> d(-30, 30);
  std::vector<mpz_class> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(d(rng));
  return v;
}

IntPoly var(std::size_t i) { return IntPoly::variable(4, i); }

}  // namespace

TEST(WittPolys, LowDegreeAtTwo) {
  const auto polys = witt_polynomials(2, 2);
  const IntPoly X0 = var(0), X1 = var(1), Y0 = var(2), Y1 = var(3);
  EXPECT_EQ(polys->sum[0], X0 + Y0);
  EXPECT_EQ(polys->prod[0], X0 * Y0);
  EXPECT_EQ(polys->diff[0], X0 - Y0);
  // (X0^2 + Y0^2 - (X0 + Y0)^2) / 2 + X1 + Y1
  EXPECT_EQ(polys->sum[1], X1 + Y1 - X0 * Y0);
  // (X0^2 + 2 X1)(Y0^2 + 2 Y1) = X0^2 Y0^2 + 2 M_1
  EXPECT_EQ(polys->prod[1], X0.pow(2) * Y1 + X1 * Y0.pow(2) + (X1 * Y1).scaled(2));
}

TEST(WittPolys, CacheIsSharedAcrossThreads) {
  std::vector<std::shared_ptr<const WittPolys>> got(8);
  std::vector<std::thread> ts;
  for (std::size_t i = 0; i < got.size(); ++i) ts.emplace_back([&, i] { got[i] = witt_polynomials(7, 2); });
  for (auto& t : ts) t.join();
  for (const auto& g : got) EXPECT_EQ(g.get(), got[0].get());
  EXPECT_GE(witt_cache_size(), 1U);
  EXPECT_THROW(witt_polynomials(4, 2), DomainError);
}

TEST(WittPolys, InexactDivisionIsAnInvariantViolation) {
  const IntPoly odd = var(0) + IntPoly::constant(4, 1);
  EXPECT_THROW(odd.divided_exact(2), InvariantViolation);
  EXPECT_EQ(odd.scaled(6).divided_exact(3), odd.scaled(2));
}

TEST(WittInt, GhostOfTeichmuller) {
  const WittCtx ctx(3, 3);
  const auto w = ghost(teichmuller(ctx, mpz_class(2)));
  EXPECT_EQ(w, (std::vector<mpz_class>{2, 8, 512}));
}

TEST(WittInt, GhostMapIsARingMap) {
  std::mt19937_64 rng(3);
  for (auto [p, n] : {std::pair{2U, std::size_t{3}}, {3U, 3}, {5U, 2}}) {
    const WittCtx ctx(p, n);
    for (int s = 0; s < 50; ++s) {
      const auto a = random_vec(rng, n), b = random_vec(rng, n);
      const WittVec<mpz_class> x(ctx, a), y(ctx, b);
      const auto ga = ghost_oracle(a, p), gb = ghost_oracle(b, p);
      const auto gs = ghost_oracle((x + y).components(), p);
      const auto gd = ghost_oracle((x - y).components(), p);
      const auto gm = ghost_oracle((x * y).components(), p);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(gs[i], ga[i] + gb[i]);
        EXPECT_EQ(gd[i], ga[i] - gb[i]);
        EXPECT_EQ(gm[i], ga[i] * gb[i]);
      }
      EXPECT_EQ(x + WittVec<mpz_class>::zero(ctx, 0), x);
    }
  }
}

TEST(WittInt, TamperedPolynomialsBreakTheGhostMap) {
  const WittCtx ctx(rootclose::testing::tampered_witt_polynomials(2, 3));
  std::mt19937_64 rng(4);
  int broken = 0;
  for (int s = 0; s < 20; ++s) {
    const auto a = random_vec(rng, 3), b = random_vec(rng, 3);
    const auto gs = ghost_oracle((WittVec<mpz_class>(ctx, a) + WittVec<mpz_class>(ctx, b)).components(), 2);
    const auto ga = ghost_oracle(a, 2), gb = ghost_oracle(b, 2);
    broken += gs[1] != ga[1] + gb[1];
  }
  EXPECT_GT(broken, 0);
}

TEST(WittFp, OneAddedToItself) {
  const WittCtx ctx(2, 2);
  const auto one = WittVec<Fp>::one(ctx, Fp{2, 0});
  EXPECT_EQ(one + one, WittVec<Fp>(ctx, {Fp{2, 0}, Fp{2, 1}}));
  for (auto [p, n, order] : {std::tuple{2U, std::size_t{3}, 8U}, {3U, 3, 27U}, {5U, 2, 25U}}) {
    EXPECT_EQ(additive_order_of_one(WittCtx(p, n), 1000), std::optional<std::uint64_t>(order));
  }
}

TEST(WittFp, TeichmullerIsMultiplicative) {
  const WittCtx ctx(5, 3);
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t b = 0; b < 5; ++b) {
      EXPECT_EQ(teichmuller(ctx, Fp{5, a}) * teichmuller(ctx, Fp{5, b}), teichmuller(ctx, Fp{5, a * b % 5}));
    }
  }
}

TEST(WittFp, PTimesIsShiftedFrobenius) {
  const WittCtx ctx(3, 3);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 10; ++s) {
    std::vector<Fp> a;
    for (int i = 0; i < 3; ++i) a.push_back(Fp{3, static_cast<std::uint32_t>(rng() % 3)});
    const WittVec<Fp> x(ctx, a);
    EXPECT_EQ(repeated_sum(x, 3), verschiebung(witt_frobenius(x)));
  }
  EXPECT_TRUE(verschiebung(WittVec<Fp>::zero(ctx, Fp{3, 0})).exact_zero());
}

TEST(WittFontaine, PTimesTeichmuller) {
  const WittCtx ctx(5, 2);
  const Generators g = generators(kFamily, 2);
  const FontaineWitt t = teichmuller(ctx, g.X);
  const FontaineWitt shifted = p_power_teichmuller(ctx, g.X, 1);
  EXPECT_EQ(witt_equal(repeated_sum(t, 5), shifted), Truth::True);
  EXPECT_EQ(shifted[1].component(0), g.X.pow(5).component(0));
  const auto back = p_divide_witt(shifted);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(witt_equal(*back, t), Truth::True);
  EXPECT_FALSE(p_divide_witt(t).has_value());
}

TEST(WittFontaine, UMap) {
  const WittCtx ctx(5, 2);
  const Generators g = generators(kFamily, 3);
  const TowerCtx c0 = kFamily.at_level(0);
  EXPECT_EQ(u_map(teichmuller(ctx, g.P), 2), make_padic(TowerElem::constant(c0, 5), 2));
  EXPECT_TRUE(u_map(P_minus_p(ctx, kFamily, 3, ClosureMode::PlainR), 2).is_zero());
  EXPECT_TRUE(u_map(FontaineWitt::zero(ctx, g.P), 2).is_zero());
  EXPECT_THROW(u_map(teichmuller(ctx, g.P), 3), PrecisionExceeded);
}

TEST(WittFontaine, DivisionRoundTrip) {
  const WittCtx ctx(5, 2);
  const Generators g = generators(kFamily, 4, ClosureMode::ClosureCerts);
  const FontaineWitt w = teichmuller(ctx, g.X) + p_power_teichmuller(ctx, g.Y, 1);
  const FontaineWitt x = P_minus_p(ctx, kFamily, 4, ClosureMode::ClosureCerts) * w;
  const WittDivisionResult res = divide_by_P_minus_p(x, 2);
  ASSERT_TRUE(res.ok()) << to_string(res.status);
  EXPECT_EQ(res.verified, Truth::True);
  EXPECT_EQ(witt_equal(*res.quotient, w), Truth::True);

  const WittDivisionResult z = divide_by_P_minus_p(FontaineWitt::zero(ctx, g.P), 2);
  ASSERT_TRUE(z.ok());
  EXPECT_TRUE(z.quotient->exact_zero());
}

TEST(WittFontaine, DivisionHypotheses) {
  const WittCtx ctx(5, 2);
  const Generators g = generators(kFamily, 4);
  EXPECT_THROW(divide_by_P_minus_p(teichmuller(ctx, g.X), 1), HypothesisNotMet);
  EXPECT_THROW(divide_by_P_minus_p(P_minus_p(ctx, kFamily, 1, ClosureMode::PlainR), 1), DepthExhausted);
}

TEST(WittFontaine, TeichmullerOfEtaIsNotAMultiple) {
  const WittCtx ctx(5, 2);
  const Generators g = generators(kFamily, 3);
  const FontaineElem eta = g.P.pow(3) + g.X.pow(3) + g.Y.pow(3);
  const FontaineWitt x = teichmuller(ctx, eta);
  EXPECT_TRUE(u_map(x, 1).is_zero());
  const WittDivisionResult res = divide_by_P_minus_p(x, 1);
  EXPECT_EQ(res.status, WittDivisionResult::Status::NotDivisible);
  EXPECT_EQ(res.step, 0U);
  ASSERT_TRUE(res.failure.has_value());
  EXPECT_EQ(res.failure->index, 1U);
}

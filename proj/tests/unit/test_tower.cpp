#include <gtest/gtest.h>

#include <map>
#include <random>

#include "rootclose/errors.hpp"
#include "rootclose/tower.hpp"
#include "rootclose/valuation.hpp"

using namespace rootclose;

namespace {

TowerCtx quot(std::uint32_t level) { return TowerCtx(5, level, 3, TowerMode::Quotient); }
TowerCtx free_ctx(std::uint32_t level) { return TowerCtx(5, level, 3, TowerMode::Free); }

TowerElem mono(const TowerCtx& c, std::uint64_t a, std::uint64_t b, std::uint64_t e, long coeff = 1) {
  return TowerElem::monomial(c, {a, b, e}, coeff);
}

// A point of the tower ring mod a small prime M: Π -> pi, X -> x, Y -> y with
// pi^q = p and, for the quotient, p^d + x^{dq} + y^{dq} = 0. Evaluation at such
// a point is a ring map, so it has to agree before and after normalization.
struct Point {
  std::uint64_t M = 0, pi = 0, x = 0, y = 0;
};

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

Point find_point(const TowerCtx& c) {
  const std::uint64_t q = c.q();
  const std::uint64_t dq = c.y_bound();
  for (std::uint64_t M = 101;; ++M) {
    if (!is_prime(M) || M % c.p() == 0) continue;
    for (std::uint64_t pi = 2; pi < M; ++pi) {
      if (powmod(pi, q, M) != c.p() % M) continue;
      if (c.mode() == TowerMode::Free) return {M, pi, 3, 7};
      std::map<std::uint64_t, std::uint64_t> root;
      for (std::uint64_t y = 1; y < M; ++y) root.emplace(powmod(y, dq, M), y);
      const std::uint64_t pd = powmod(c.p(), c.degree(), M);
      for (std::uint64_t x = 2; x < M; ++x) {
        const std::uint64_t target = (2 * M - pd - powmod(x, dq, M)) % M;
        auto it = root.find(target);
        if (it != root.end()) return {M, pi, x, it->second};
      }
    }
  }
}

std::uint64_t eval_terms(const std::vector<Term>& terms, const Point& pt) {
  mpz_class acc = 0;
  for (const auto& t : terms) {
    mpz_class c = t.coeff % static_cast<unsigned long>(pt.M);
    c *= static_cast<unsigned long>(powmod(pt.pi, t.mono.pi, pt.M) * powmod(pt.x, t.mono.x, pt.M) % pt.M);
    c *= static_cast<unsigned long>(powmod(pt.y, t.mono.y, pt.M));
    acc += c;
  }
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), acc.get_mpz_t(), pt.M);
  return r.get_ui();
}

std::vector<Term> random_raw(std::mt19937_64& rng, std::size_t n, std::uint64_t max_exp) {
  std::uniform_int_distribution<std::uint64_t> e(0, max_exp);
  std::uniform_int_distribution<long> c(-20, 20);
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({{e(rng), e(rng), e(rng)}, c(rng)});
  return out;
}

bool is_normal(const TowerElem& e) {
  for (std::size_t i = 0; i < e.terms().size(); ++i) {
    const auto& t = e.terms()[i];
    if (t.coeff == 0 || t.mono.pi >= e.ctx().q()) return false;
    if (e.ctx().mode() == TowerMode::Quotient && t.mono.y >= e.ctx().y_bound()) return false;
    if (i > 0 && !(e.terms()[i - 1].mono < t.mono)) return false;
  }
  return true;
}

}  // namespace

TEST(Tower, RewriteExamples) {
  const auto c = quot(1);
  EXPECT_EQ(mono(c, 5, 0, 0), TowerElem::constant(c, 5));
  EXPECT_EQ(mono(c, 0, 0, 15), TowerElem::constant(c, -125) - mono(c, 0, 15, 0));
  EXPECT_EQ(mono(c, 6, 0, 0), mono(c, 1, 0, 0, 5));
  EXPECT_EQ(TowerElem::pi(c) * mono(c, 4, 0, 0), TowerElem::constant(c, 5));
  // Free mode leaves Y alone.
  EXPECT_EQ(mono(free_ctx(1), 0, 0, 15).terms().size(), 1U);
}

TEST(Tower, BinomialCoefficientByWordCount) {
  const auto c = quot(1);
  const TowerElem s = (TowerElem::x(c) + TowerElem::y(c)).pow(5);
  // Count words in {X, Y}^5 with three X's.
  long words = 0;
  for (int mask = 0; mask < 32; ++mask) words += __builtin_popcount(mask) == 3;
  EXPECT_EQ(s.coeff({0, 3, 2}), words);
  EXPECT_EQ(words, 10);
}

TEST(Tower, Embedding) {
  EXPECT_EQ(embed(TowerElem::pi(quot(0)), 1), mono(quot(1), 5, 0, 0));
  EXPECT_EQ(embed(TowerElem::pi(quot(0)), 1), TowerElem::constant(quot(1), 5));
  EXPECT_EQ(embed(mono(quot(1), 0, 0, 3), 2), mono(quot(2), 0, 0, 15));
  EXPECT_THROW(embed(TowerElem::pi(quot(2)), 1), DomainError);
}

TEST(Tower, PiDivide) {
  const auto c = quot(1);
  auto q = pi_divide(TowerElem::constant(c, 5), 1);
  ASSERT_TRUE(std::holds_alternative<TowerElem>(q));
  EXPECT_EQ(std::get<TowerElem>(q), mono(c, 4, 0, 0));

  q = pi_divide(mono(c, 1, 1, 0), 1);
  ASSERT_TRUE(std::holds_alternative<TowerElem>(q));
  EXPECT_EQ(std::get<TowerElem>(q), TowerElem::x(c));

  q = pi_divide(TowerElem::x(c), 1);
  ASSERT_TRUE(std::holds_alternative<NotDivisible>(q));
  EXPECT_EQ(std::get<NotDivisible>(q).offending, (Monomial{0, 1, 0}));

  EXPECT_EQ(pi_valuation(mono(c, 3, 1, 0, 25)), std::optional<std::uint64_t>(13));
  EXPECT_EQ(pi_valuation(TowerElem(c)), std::nullopt);
}

TEST(Tower, PDivide) {
  const auto c = quot(1);
  auto q = p_divide(TowerElem::x(c).scaled(10));
  ASSERT_TRUE(std::holds_alternative<TowerElem>(q));
  EXPECT_EQ(std::get<TowerElem>(q), TowerElem::x(c).scaled(2));
  EXPECT_TRUE(std::holds_alternative<NotDivisible>(p_divide(TowerElem::pi(c))));
  q = p_divide(TowerElem(c));
  ASSERT_TRUE(std::holds_alternative<TowerElem>(q));
  EXPECT_TRUE(std::get<TowerElem>(q).is_zero());
}

TEST(Tower, Reductions) {
  const auto c = quot(1);
  EXPECT_EQ(reduce_mod_p(TowerElem::constant(c, 5) + TowerElem::x(c)).lift(), TowerElem::x(c));
  EXPECT_EQ(reduce_mod_p(TowerElem::y(c).scaled(7)).lift(), TowerElem::y(c).scaled(2));
  const TowerElem r = mono(c, 3, 0, 0) + mono(c, 0, 3, 0) + mono(c, 0, 0, 3);
  EXPECT_EQ(reduce_mod_p(r).lift(), r);
  // Modulo Π only the Π^0 fibre survives.
  const ResidueElem m = reduce_mod_pi(r);
  EXPECT_EQ(m.ctx().mode(), TowerMode::Free);
  EXPECT_EQ(m.terms().size(), 2U);
  EXPECT_EQ(reduce_mod_pi_power(mono(c, 2, 1, 0) + TowerElem::x(c), 2), TowerElem::x(c));
  EXPECT_EQ(reduce_mod_p_power(TowerElem::x(c).scaled(26), 2), TowerElem::x(c));
}

TEST(Tower, FrobeniusResidue) {
  const auto c = quot(1);
  EXPECT_EQ(frobenius_residue(reduce_mod_p(TowerElem::x(c))), reduce_mod_p(mono(c, 0, 5, 0)));
  EXPECT_EQ(frobenius_residue(reduce_mod_p(TowerElem::x(c) + TowerElem::y(c))),
            reduce_mod_p(mono(c, 0, 5, 0) + mono(c, 0, 0, 5)));
}

TEST(Tower, PolyDivides) {
  const auto f = free_ctx(1);
  const TowerElem h = mono(f, 0, 3, 0) + mono(f, 0, 0, 3);
  auto q = poly_divides(reduce_mod_p(h), reduce_mod_p(h.pow(5)));
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, reduce_mod_p(h.pow(4)));

  const TowerElem h15 = mono(f, 0, 15, 0) + mono(f, 0, 0, 15);
  EXPECT_FALSE(poly_divides(reduce_mod_p(h15), reduce_mod_p(h)).has_value());

  q = poly_divides(reduce_mod_p(h), ResidueElem(f));
  ASSERT_TRUE(q.has_value());
  EXPECT_TRUE(q->is_zero());
}

TEST(Tower, ContextMismatchIsRejected) {
  EXPECT_THROW(TowerElem::x(quot(1)) + TowerElem::x(free_ctx(1)), DomainError);
  EXPECT_THROW(TowerCtx(4, 1, 3, TowerMode::Free), DomainError);
  EXPECT_THROW(TowerCtx(5, 1, 5, TowerMode::Quotient), DomainError);
}

// Normalization and products agree with evaluation at a point of the ring.
TEST(TowerProperty, NormalFormMatchesPointEvaluation) {
  std::mt19937_64 rng(11);
  const std::vector<TowerCtx> ctxs = {quot(1), free_ctx(1), TowerCtx(2, 2, 3, TowerMode::Quotient),
                                      TowerCtx(3, 1, 2, TowerMode::Quotient)};
  for (const auto& c : ctxs) {
    const Point pt = find_point(c);
    for (int trial = 0; trial < 40; ++trial) {
      const auto raw_a = random_raw(rng, 6, 3 * c.y_bound());
      const auto raw_b = random_raw(rng, 4, c.y_bound());
      const TowerElem a = normalize(raw_a, c);
      const TowerElem b = normalize(raw_b, c);
      ASSERT_TRUE(is_normal(a)) << c.to_string();
      EXPECT_EQ(eval_terms(a.terms(), pt), eval_terms(raw_a, pt)) << c.to_string();
      const TowerElem ab = a * b;
      ASSERT_TRUE(is_normal(ab));
      EXPECT_EQ(eval_terms(ab.terms(), pt), eval_terms(raw_a, pt) * eval_terms(raw_b, pt) % pt.M);
      EXPECT_EQ(eval_terms((a - b).terms(), pt), (eval_terms(raw_a, pt) + pt.M - eval_terms(raw_b, pt)) % pt.M);
    }
  }
}

TEST(TowerProperty, RingAxioms) {
  std::mt19937_64 rng(5);
  const auto c = quot(1);
  for (int trial = 0; trial < 30; ++trial) {
    const TowerElem a = normalize(random_raw(rng, 4, 20), c);
    const TowerElem b = normalize(random_raw(rng, 4, 20), c);
    const TowerElem d = normalize(random_raw(rng, 3, 20), c);
    EXPECT_EQ((a * b) * d, a * (b * d));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + d), a * b + a * d);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(a.pow(3), a * a * a);
  }
}

TEST(TowerProperty, EmbeddingIsARingMap) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const TowerElem a = normalize(random_raw(rng, 3, 10), quot(0));
    const TowerElem b = normalize(random_raw(rng, 3, 10), quot(0));
    EXPECT_EQ(embed(a * b, 1), embed(a, 1) * embed(b, 1));
    EXPECT_EQ(embed(a + b, 1), embed(a, 1) + embed(b, 1));
  }
}

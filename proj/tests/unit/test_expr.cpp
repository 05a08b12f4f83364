#include <gtest/gtest.h>

#include "rootclose/errors.hpp"
#include "rootclose/expr.hpp"

using namespace rootclose;

namespace {

TowerCtx quot(std::uint32_t level) { return TowerCtx(5, level, 3, TowerMode::Quotient); }

TowerElem mono(const TowerCtx& c, std::uint64_t a, std::uint64_t b, std::uint64_t e) {
  return TowerElem::monomial(c, {a, b, e});
}

std::size_t error_position(const std::string& text) {
  try {
    parse_expr(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no ParseError for " << text;
  return 0;
}

}  // namespace

TEST(Expr, RationalPowerOfP) {
  const LocalElem e = parse_local("p^(3/5)");
  EXPECT_EQ(e.level(), 1U);
  EXPECT_EQ(e, LocalElem::integral(mono(quot(1), 3, 0, 0)));
  EXPECT_EQ(infer_level("x^(1/25) + p", 5), 2U);
  EXPECT_EQ(infer_level("x + y", 5), 0U);
}

TEST(Expr, RootOfTheRelation) {
  const LocalElem c1 = parse_local("(p^(3/5) + x^(3/5) + y^(3/5)) / p^(1/5)");
  const TowerElem r = mono(quot(1), 3, 0, 0) + mono(quot(1), 0, 3, 0) + mono(quot(1), 0, 0, 3);
  EXPECT_EQ(c1, LocalElem(r, 1));
  EXPECT_EQ(parse_local("2/p"), LocalElem(TowerElem::constant(quot(0), 2), 1));
  EXPECT_EQ(parse_local("x*x - x^2"), LocalElem::integral(TowerElem(quot(0))));
  EXPECT_EQ(parse_local("−x + x"), LocalElem::integral(TowerElem(quot(0))));
}

TEST(Expr, FontaineGenerators) {
  const ParsedExpr e = parse_expr("P^3 + X^3 + Y^3");
  ASSERT_TRUE(std::holds_alternative<FontaineElem>(e));
  const Generators g = generators(quot(0), 3);
  EXPECT_EQ(equal(std::get<FontaineElem>(e), g.P.pow(3) + g.X.pow(3) + g.Y.pow(3)), Truth::True);
  EXPECT_THROW(parse_local("P + X"), ParseError);
}

TEST(Expr, Errors) {
  EXPECT_EQ(error_position("x^(1/3)"), 5U);
  EXPECT_THROW(parse_expr("x / y"), ParseError);
  EXPECT_THROW(parse_expr("(p + x"), ParseError);
  EXPECT_THROW(parse_expr("x +"), ParseError);
  EXPECT_THROW(parse_expr("x ^ -1"), ParseError);
  EXPECT_THROW(parse_expr("P + x"), ParseError);
  EXPECT_THROW(parse_expr("z"), ParseError);
  EXPECT_EQ(error_position("x $ y"), 2U);
}

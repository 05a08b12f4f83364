#pragma once

// Expression syntax for tower and Fontaine elements.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   primary := integer | 'p' | 'x' | 'y' | 'P' | 'X' | 'Y' | '(' expr ')'
//   exponent:= integer | '(' ['-'] integer ['/' integer] ')'
//
// Lowercase p, x, y denote elements of the tower; a rational exponent a/b
// is allowed on them when b is a power of the prime, and the level is the
// smallest one containing every such root. Division is only by terms of the
// form ±p^k Π^a. Uppercase P, X, Y denote the Fontaine generators; those
// expressions use ring operations and integer exponents only.

#include <cstdint>
#include <string_view>
#include <variant>

#include "rootclose/closure.hpp"
#include "rootclose/fontaine.hpp"
#include "rootclose/tower.hpp"

namespace rootclose {

struct ExprOptions {
  std::uint32_t p = 5;
  std::uint32_t degree = 3;
  TowerMode tower_mode = TowerMode::Quotient;
  std::size_t fontaine_depth = 3;
  ClosureMode closure_mode = ClosureMode::PlainR;
};

using ParsedExpr = std::variant<LocalElem, FontaineElem>;

/// Throws ParseError (with a byte offset) on malformed or unsupported input.
ParsedExpr parse_expr(std::string_view text, const ExprOptions& opts = {});

/// Like parse_expr but requires a tower expression.
LocalElem parse_local(std::string_view text, const ExprOptions& opts = {});

/// Smallest level n such that every rational exponent denominator divides p^n.
std::uint32_t infer_level(std::string_view text, std::uint32_t p);

}  // namespace rootclose

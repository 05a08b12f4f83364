#include "rootclose/expr.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

namespace rootclose {

namespace {

enum class Tok { Int, Var, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, i, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    if (std::isalpha(c)) {
      if (i + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[i + 1]))) {
        throw ParseError("unknown symbol '" + std::string(s.substr(i, 2)) + "...'", i);
      }
      if (std::string_view("pxyPXY").find(static_cast<char>(c)) == std::string_view::npos) {
        throw ParseError(std::string("unknown variable '") + static_cast<char>(c) + "'", i);
      }
      out.push_back({Tok::Var, i, std::string(1, static_cast<char>(c))});
      ++i;
      continue;
    }
    // U+2212 MINUS SIGN
    if (s.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back({Tok::Minus, i, "-"});
      i += 3;
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default: throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
    }
    out.push_back({kind, i, std::string(1, static_cast<char>(c))});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

// Exponent k with b = p^k, or nullopt if b is not a power of p.
std::optional<std::uint32_t> log_p(const mpz_class& b, std::uint32_t p) {
  if (b <= 0) return std::nullopt;
  mpz_class v = b;
  std::uint32_t k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  if (v != 1) return std::nullopt;
  return k;
}

std::uint32_t scan_level(const std::vector<Token>& toks, std::uint32_t p) {
  std::uint32_t level = 0;
  for (std::size_t i = 0; i + 5 < toks.size(); ++i) {
    if (toks[i].kind != Tok::Caret || toks[i + 1].kind != Tok::LParen) continue;
    std::size_t j = i + 2;
    if (toks[j].kind == Tok::Minus) ++j;
    if (j + 2 >= toks.size() || toks[j].kind != Tok::Int || toks[j + 1].kind != Tok::Slash ||
        toks[j + 2].kind != Tok::Int) {
      continue;
    }
    const Token& den = toks[j + 2];
    auto k = log_p(mpz_class(den.text), p);
    if (!k) throw ParseError("denominator " + den.text + " is not a power of p = " + std::to_string(p), den.pos);
    level = std::max(level, *k);
  }
  return level;
}

// A value during evaluation. Integers stay symbolic until they meet an element.
struct Value {
  std::variant<mpz_class, LocalElem, FontaineElem> v;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const ExprOptions& opts, std::uint32_t level)
      : toks_(std::move(toks)),
        opts_(opts),
        ctx_(opts.p, level, opts.degree, opts.tower_mode),
        family_(ctx_.at_level(0)) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return v;
  }

  const TowerCtx& ctx() const { return ctx_; }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      throw ParseError(std::string("expected ") + what +
                           (peek().kind == Tok::End ? " but input ended" : ", found '" + peek().text + "'"),
                       peek().pos);
    }
    return next();
  }

  Value expr() {
    Value acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& op = next();
      Value rhs = term();
      acc = combine(acc, rhs, op);
    }
    return acc;
  }

  Value term() {
    Value acc = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& op = next();
      Value rhs = unary();
      acc = op.kind == Tok::Star ? combine(acc, rhs, op) : divide(acc, rhs, op.pos);
    }
    return acc;
  }

  Value unary() {
    if (accept(Tok::Minus)) return negate(unary());
    return power();
  }

  Value power() {
    const std::size_t start = peek().pos;
    const bool bare_var = peek().kind == Tok::Var;
    const std::string var = bare_var ? peek().text : "";
    Value base = primary();
    if (!accept(Tok::Caret)) return base;
    const std::size_t exp_pos = peek().pos;
    if (peek().kind == Tok::Int) {
      return raise(base, mpz_class(next().text), exp_pos);
    }
    expect(Tok::LParen, "an exponent");
    const bool neg = accept(Tok::Minus);
    mpz_class a(expect(Tok::Int, "an integer exponent").text);
    if (neg) a = -a;
    mpz_class b = 1;
    std::size_t den_pos = 0;
    if (accept(Tok::Slash)) {
      den_pos = peek().pos;
      b = mpz_class(expect(Tok::Int, "a denominator").text);
    }
    expect(Tok::RParen, "')'");
    if (b == 1) return raise(base, a, exp_pos);
    if (!bare_var || std::isupper(static_cast<unsigned char>(var[0]))) {
      throw ParseError("rational exponents are only supported on p, x and y", start);
    }
    if (a < 0) throw ParseError("negative rational exponents are unsupported; divide instead", exp_pos);
    auto k = log_p(b, opts_.p);
    if (!k) throw ParseError("denominator " + b.get_str() + " is not a power of p", den_pos);
    // var^(a/p^k) = V^{a p^{n-k}} with V the level-n root.
    const mpz_class e = a * ipow(opts_.p, ctx_.level() - *k);
    if (!e.fits_ulong_p()) throw ParseError("exponent too large", exp_pos);
    return Value{LocalElem::integral(root_power(var[0], e.get_ui()))};
  }

  Value primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
        next();
        return Value{mpz_class(t.text)};
      case Tok::Var: {
        next();
        const char c = t.text[0];
        if (std::isupper(static_cast<unsigned char>(c))) {
          const Generators g = generators(family_, opts_.fontaine_depth, opts_.closure_mode);
          return Value{c == 'P' ? g.P : c == 'X' ? g.X : g.Y};
        }
        // At level n the bare symbol is the p^n-th power of the root.
        return Value{LocalElem::integral(root_power(c, ctx_.q()))};
      }
      case Tok::LParen: {
        next();
        Value v = expr();
        expect(Tok::RParen, "')'");
        return v;
      }
      default:
        throw ParseError(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'", t.pos);
    }
  }

  TowerElem root_power(char var, std::uint64_t e) const {
    switch (var) {
      case 'p': return TowerElem::monomial(ctx_, {e, 0, 0});
      case 'x': return TowerElem::monomial(ctx_, {0, e, 0});
      default: return TowerElem::monomial(ctx_, {0, 0, e});
    }
  }

  LocalElem as_local(const Value& v, std::size_t pos) const {
    if (auto* c = std::get_if<mpz_class>(&v.v)) return LocalElem::integral(TowerElem::constant(ctx_, *c));
    if (auto* l = std::get_if<LocalElem>(&v.v)) return *l;
    throw ParseError("cannot mix Fontaine variables with p, x, y", pos);
  }

  FontaineElem as_fontaine(const Value& v, std::size_t pos) const {
    if (auto* c = std::get_if<mpz_class>(&v.v)) {
      return FontaineElem::constant(family_, opts_.closure_mode, opts_.fontaine_depth, *c);
    }
    if (auto* f = std::get_if<FontaineElem>(&v.v)) return *f;
    throw ParseError("cannot mix Fontaine variables with p, x, y", pos);
  }

  Value combine(const Value& a, const Value& b, const Token& op) {
    auto* ia = std::get_if<mpz_class>(&a.v);
    auto* ib = std::get_if<mpz_class>(&b.v);
    if (ia && ib) {
      if (op.kind == Tok::Plus) return Value{mpz_class(*ia + *ib)};
      if (op.kind == Tok::Minus) return Value{mpz_class(*ia - *ib)};
      return Value{mpz_class(*ia * *ib)};
    }
    const bool fontaine = std::holds_alternative<FontaineElem>(a.v) || std::holds_alternative<FontaineElem>(b.v);
    if (fontaine) {
      FontaineElem x = as_fontaine(a, op.pos), y = as_fontaine(b, op.pos);
      if (op.kind == Tok::Plus) return Value{x + y};
      if (op.kind == Tok::Minus) return Value{x - y};
      return Value{x * y};
    }
    LocalElem x = as_local(a, op.pos), y = as_local(b, op.pos);
    if (op.kind == Tok::Plus) return Value{x + y};
    if (op.kind == Tok::Minus) return Value{x - y};
    return Value{x * y};
  }

  Value negate(const Value& v) {
    if (auto* c = std::get_if<mpz_class>(&v.v)) return Value{mpz_class(-*c)};
    if (auto* l = std::get_if<LocalElem>(&v.v)) return Value{-*l};
    return Value{-std::get<FontaineElem>(v.v)};
  }

  Value raise(const Value& base, const mpz_class& e, std::size_t pos) {
    if (e < 0) throw ParseError("negative exponents are unsupported; divide instead", pos);
    if (!e.fits_ulong_p()) throw ParseError("exponent too large", pos);
    const unsigned long k = e.get_ui();
    if (auto* c = std::get_if<mpz_class>(&base.v)) {
      mpz_class r;
      mpz_pow_ui(r.get_mpz_t(), c->get_mpz_t(), k);
      return Value{r};
    }
    if (auto* l = std::get_if<LocalElem>(&base.v)) return Value{l->pow(k)};
    return Value{std::get<FontaineElem>(base.v).pow(k)};
  }

  Value divide(const Value& a, const Value& b, std::size_t pos) {
    if (std::holds_alternative<FontaineElem>(a.v) || std::holds_alternative<FontaineElem>(b.v)) {
      throw ParseError("division is unsupported for Fontaine expressions", pos);
    }
    const LocalElem d = as_local(b, pos);
    const LocalElem x = as_local(a, pos);
    // d must be ±p^k Π^a / Π^j.
    const auto& terms = d.num().terms();
    if (terms.size() != 1 || terms[0].mono.x != 0 || terms[0].mono.y != 0) {
      throw ParseError("unsupported divisor " + d.to_string() + ": only ±p^k * p^(a/b) terms can divide", pos);
    }
    const mpz_class mag = abs(terms[0].coeff);
    const Valuation k = vp(Prime(opts_.p), mag);
    if (mag != ipow(opts_.p, k.value())) {
      throw ParseError("unsupported divisor " + d.to_string() + ": coefficient is not a power of p", pos);
    }
    const std::int64_t shift = static_cast<std::int64_t>(x.denom_exp()) +
                               static_cast<std::int64_t>(k.value() * ctx_.q() + terms[0].mono.pi) -
                               static_cast<std::int64_t>(d.denom_exp());
    TowerElem num = terms[0].coeff < 0 ? -x.num() : x.num();
    if (shift >= 0) return Value{LocalElem(num, static_cast<std::uint64_t>(shift))};
    num *= TowerElem::monomial(ctx_, {static_cast<std::uint64_t>(-shift), 0, 0});
    return Value{LocalElem(num, 0)};
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  ExprOptions opts_;
  TowerCtx ctx_;
  TowerCtx family_;
};

}  // namespace

std::uint32_t infer_level(std::string_view text, std::uint32_t p) {
  return scan_level(tokenize(text), p);
}

ParsedExpr parse_expr(std::string_view text, const ExprOptions& opts) {
  std::vector<Token> toks = tokenize(text);
  if (toks.size() == 1) throw ParseError("empty expression", 0);
  const std::uint32_t level = scan_level(toks, opts.p);
  Parser parser(std::move(toks), opts, level);
  Value v = parser.parse();
  if (auto* c = std::get_if<mpz_class>(&v.v)) return LocalElem::integral(TowerElem::constant(parser.ctx(), *c));
  if (auto* l = std::get_if<LocalElem>(&v.v)) return *l;
  return std::get<FontaineElem>(v.v);
}

LocalElem parse_local(std::string_view text, const ExprOptions& opts) {
  ParsedExpr e = parse_expr(text, opts);
  if (auto* l = std::get_if<LocalElem>(&e)) return *l;
  throw ParseError("expected an expression in p, x, y", 0);
}

}  // namespace rootclose

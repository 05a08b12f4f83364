#include "rootclose/tower.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"

namespace rootclose {

namespace {

using Accumulator = std::unordered_map<Monomial, mpz_class, MonomialHash>;

std::vector<Term> collect(Accumulator& acc) {
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.push_back(Term{m, std::move(c)});
  }
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  return out;
}

// Adds coeff * Π^a X^b Y^c to acc after rewriting it into normal form.
void add_reduced(Accumulator& acc, const TowerCtx& ctx, std::uint64_t a,
                 std::uint64_t b, std::uint64_t c, const mpz_class& coeff) {
  if (coeff == 0) return;
  mpz_class k = coeff;
  const std::uint64_t q = ctx.q();
  if (a >= q) {
    k *= ipow(ctx.p(), a / q);
    a %= q;
  }
  if (ctx.mode() == TowerMode::Quotient && c >= ctx.y_bound()) {
    // Y^{c} = Y^{r} (Y^{dq})^{t} = Y^{r} (-1)^t (p^d + X^{dq})^t
    const std::uint64_t t = c / ctx.y_bound();
    const std::uint64_t r = c % ctx.y_bound();
    const bool negate = (t % 2) == 1;
    for (std::uint64_t i = 0; i <= t; ++i) {
      mpz_class term = k * binom(t, i) * ipow(ctx.p(), ctx.degree() * (t - i));
      if (negate) term = -term;
      acc[Monomial{a, b + ctx.y_bound() * i, r}] += term;
    }
    return;
  }
  acc[Monomial{a, b, c}] += k;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

TowerCtx::TowerCtx(std::uint32_t p, std::uint32_t level, std::uint32_t degree,
                   TowerMode mode)
    : p_(p), level_(level), degree_(degree), mode_(mode) {
  if (!is_prime(p)) throw DomainError("tower: " + std::to_string(p) + " is not prime");
  if (degree == 0) throw DomainError("tower: relation degree must be positive");
  if (mode == TowerMode::Quotient && std::gcd(degree, p) != 1) {
    throw DomainError("tower: relation degree must be coprime to p");
  }
  q_ = upow(p, level);
  if (q_ > (1ULL << 40)) throw DomainError("tower: level too large");
  pd_ = ipow(p, degree);
}

TowerCtx TowerCtx::at_level(std::uint32_t level) const {
  return TowerCtx(p_, level, degree_, mode_);
}

TowerCtx TowerCtx::with_mode(TowerMode mode) const {
  return TowerCtx(p_, level_, degree_, mode);
}

bool TowerCtx::same_family(const TowerCtx& other) const noexcept {
  return p_ == other.p_ && degree_ == other.degree_ && mode_ == other.mode_;
}

std::string TowerCtx::to_string() const {
  std::ostringstream os;
  os << (mode_ == TowerMode::Quotient ? "R" : "S") << "_" << level_
     << "(p=" << p_ << ", d=" << degree_ << ")";
  return os.str();
}

std::string Monomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto put = [&](const char* name, std::uint64_t e) {
    if (e == 0) return;
    if (!first) os << "*";
    os << name;
    if (e != 1) os << "^" << e;
    first = false;
  };
  put("Pi", pi);
  put("X", x);
  put("Y", y);
  if (first) os << "1";
  return os.str();
}

TowerElem TowerElem::constant(const TowerCtx& ctx, const mpz_class& c) {
  TowerElem out(ctx);
  if (c != 0) out.terms_.push_back(Term{Monomial{}, c});
  return out;
}

TowerElem TowerElem::monomial(const TowerCtx& ctx, const Monomial& m,
                              const mpz_class& c) {
  return normalize({Term{m, c}}, ctx);
}

TowerElem TowerElem::from_normal_terms(const TowerCtx& ctx, std::vector<Term> terms) {
  TowerElem out(ctx);
  out.terms_ = std::move(terms);
#ifndef NDEBUG
  for (std::size_t i = 0; i < out.terms_.size(); ++i) {
    assert(out.terms_[i].coeff != 0);
    assert(out.terms_[i].mono.pi < ctx.q());
    assert(ctx.mode() == TowerMode::Free || out.terms_[i].mono.y < ctx.y_bound());
    if (i > 0) assert(out.terms_[i - 1].mono < out.terms_[i].mono);
  }
#endif
  return out;
}

mpz_class TowerElem::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& k) { return t.mono < k; });
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return 0;
}

TowerElem TowerElem::operator-() const {
  TowerElem out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

TowerElem& TowerElem::operator+=(const TowerElem& o) {
  if (!(ctx_ == o.ctx_)) throw DomainError("tower add: context mismatch");
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && terms_[i].mono < o.terms_[j].mono)) {
      merged.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].mono < terms_[i].mono) {
      merged.push_back(o.terms_[j++]);
    } else {
      mpz_class s = terms_[i].coeff + o.terms_[j].coeff;
      if (s != 0) merged.push_back(Term{terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

TowerElem& TowerElem::operator-=(const TowerElem& o) { return *this += -o; }

TowerElem& TowerElem::operator*=(const TowerElem& o) {
  *this = *this * o;
  return *this;
}

TowerElem operator*(const TowerElem& a, const TowerElem& b) {
  if (!(a.ctx_ == b.ctx_)) throw DomainError("tower mul: context mismatch");
  const TowerCtx& ctx = a.ctx_;
  if (a.is_zero() || b.is_zero()) return TowerElem(ctx);
  const std::uint64_t q = ctx.q();
  const std::uint64_t yb = ctx.y_bound();
  const bool quotient = ctx.mode() == TowerMode::Quotient;
  const mpz_class p = ctx.p();
  const mpz_class neg_pd = -ctx.p_to_degree();

  Accumulator acc;
  acc.reserve(a.size() * b.size() / 2 + 16);
  mpz_class prod;
  // Each factor is normal, so a single carry per variable suffices.
  for (const Term& s : a.terms_) {
    for (const Term& t : b.terms_) {
      std::uint64_t pi = s.mono.pi + t.mono.pi;
      const std::uint64_t x = s.mono.x + t.mono.x;
      std::uint64_t y = s.mono.y + t.mono.y;
      mpz_mul(prod.get_mpz_t(), s.coeff.get_mpz_t(), t.coeff.get_mpz_t());
      if (pi >= q) {
        pi -= q;
        prod *= p;
      }
      if (quotient && y >= yb) {
        y -= yb;
        mpz_class& c0 = acc[Monomial{pi, x, y}];
        mpz_addmul(c0.get_mpz_t(), prod.get_mpz_t(), neg_pd.get_mpz_t());
        mpz_class& c1 = acc[Monomial{pi, x + yb, y}];
        mpz_sub(c1.get_mpz_t(), c1.get_mpz_t(), prod.get_mpz_t());
      } else {
        mpz_class& c = acc[Monomial{pi, x, y}];
        mpz_add(c.get_mpz_t(), c.get_mpz_t(), prod.get_mpz_t());
      }
    }
  }
  TowerElem out(ctx);
  out.terms_ = collect(acc);
  return out;
}

TowerElem TowerElem::scaled(const mpz_class& c) const {
  if (c == 0) return TowerElem(ctx_);
  TowerElem out = *this;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

TowerElem TowerElem::pow(std::uint64_t e) const {
  TowerElem result = constant(ctx_, 1);
  if (e == 0) return result;
  TowerElem base = *this;
  bool first = true;
  while (e > 0) {
    if (e & 1U) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

std::string TowerElem::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const mpz_class& c = it->coeff;
    const bool unit_mono = it->mono == Monomial{};
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const mpz_class mag = abs(c);
    if (unit_mono) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << it->mono.to_string();
    }
    first = false;
  }
  return os.str();
}

TowerElem normalize(const std::vector<Term>& raw, const TowerCtx& ctx) {
  Accumulator acc;
  for (const Term& t : raw) {
    add_reduced(acc, ctx, t.mono.pi, t.mono.x, t.mono.y, t.coeff);
  }
  return TowerElem::from_normal_terms(ctx, collect(acc));
}

TowerElem embed(const TowerElem& e, std::uint32_t to_level) {
  const TowerCtx& ctx = e.ctx();
  if (to_level < ctx.level()) {
    throw DomainError("embed: target level " + std::to_string(to_level) +
                      " below source level " + std::to_string(ctx.level()));
  }
  if (to_level == ctx.level()) return e;
  const std::uint64_t f = upow(ctx.p(), to_level - ctx.level());
  std::vector<Term> terms;
  terms.reserve(e.size());
  for (const Term& t : e.terms()) {
    terms.push_back(Term{Monomial{t.mono.pi * f, t.mono.x * f, t.mono.y * f}, t.coeff});
  }
  // Scaling every exponent by f keeps both bounds and the monomial order.
  return TowerElem::from_normal_terms(ctx.at_level(to_level), std::move(terms));
}

std::pair<TowerElem, TowerElem> align(const TowerElem& a, const TowerElem& b) {
  if (!a.ctx().same_family(b.ctx())) throw DomainError("align: different tower families");
  const std::uint32_t level = std::max(a.ctx().level(), b.ctx().level());
  return {embed(a, level), embed(b, level)};
}

std::variant<TowerElem, NotDivisible> pi_divide(const TowerElem& e, std::uint64_t j) {
  const TowerCtx& ctx = e.ctx();
  if (j == 0) return e;
  const std::uint64_t q = ctx.q();
  // Π^j maps the basis element Π^a m to p^k Π^{(a+j) mod q} m, so divisibility
  // can be decided term by term: the term c Π^a m needs p^k | c where k is the
  // number of wraps needed to reach exponent a - j + kq >= 0.
  std::vector<Term> out;
  out.reserve(e.size());
  mpz_class r;
  for (const Term& t : e.terms()) {
    std::uint64_t k = 0;
    if (t.mono.pi < j) k = ceil_div(j - t.mono.pi, q);
    const std::uint64_t new_pi = t.mono.pi + k * q - j;
    mpz_class c = t.coeff;
    if (k > 0) {
      const mpz_class pk = ipow(ctx.p(), k);
      if (!mpz_divisible_p(c.get_mpz_t(), pk.get_mpz_t())) {
        return NotDivisible{t.mono};
      }
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
    }
    out.push_back(Term{Monomial{new_pi, t.mono.x, t.mono.y}, std::move(c)});
  }
  std::sort(out.begin(), out.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  return TowerElem::from_normal_terms(ctx, std::move(out));
}

std::variant<TowerElem, NotDivisible> p_divide(const TowerElem& e) {
  return pi_divide(e, e.ctx().q());
}

std::optional<std::uint64_t> pi_valuation(const TowerElem& e) {
  if (e.is_zero()) return std::nullopt;
  const Prime p(e.ctx().p());
  std::uint64_t best = UINT64_MAX;
  for (const Term& t : e.terms()) {
    const std::uint64_t v = e.ctx().q() * vp(p, t.coeff).value() + t.mono.pi;
    best = std::min(best, v);
  }
  return best;
}

TowerElem reduce_mod_pi_power(const TowerElem& e, std::uint64_t s) {
  const TowerCtx& ctx = e.ctx();
  std::vector<Term> out;
  out.reserve(e.size());
  for (const Term& t : e.terms()) {
    if (t.mono.pi >= s) continue;
    const std::uint64_t k = ceil_div(s - t.mono.pi, ctx.q());
    const mpz_class mod = ipow(ctx.p(), k);
    mpz_class c;
    mpz_fdiv_r(c.get_mpz_t(), t.coeff.get_mpz_t(), mod.get_mpz_t());
    if (c != 0) out.push_back(Term{t.mono, std::move(c)});
  }
  return TowerElem::from_normal_terms(ctx, std::move(out));
}

TowerElem reduce_mod_p_power(const TowerElem& e, std::uint64_t k) {
  const mpz_class mod = ipow(e.ctx().p(), k);
  std::vector<Term> out;
  out.reserve(e.size());
  for (const Term& t : e.terms()) {
    mpz_class c;
    mpz_fdiv_r(c.get_mpz_t(), t.coeff.get_mpz_t(), mod.get_mpz_t());
    if (c != 0) out.push_back(Term{t.mono, std::move(c)});
  }
  return TowerElem::from_normal_terms(e.ctx(), std::move(out));
}

ResidueElem ResidueElem::from_lift(const TowerElem& e) {
  return ResidueElem(reduce_mod_p_power(e, 1));
}

ResidueElem ResidueElem::operator-() const { return from_lift(-rep_); }

ResidueElem operator+(const ResidueElem& a, const ResidueElem& b) {
  return ResidueElem::from_lift(a.rep_ + b.rep_);
}

ResidueElem operator-(const ResidueElem& a, const ResidueElem& b) {
  return ResidueElem::from_lift(a.rep_ - b.rep_);
}

ResidueElem operator*(const ResidueElem& a, const ResidueElem& b) {
  return ResidueElem::from_lift(a.rep_ * b.rep_);
}

ResidueElem ResidueElem::pow(std::uint64_t e) const {
  ResidueElem result = from_lift(TowerElem::constant(ctx(), 1));
  ResidueElem base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

ResidueElem reduce_mod_p(const TowerElem& e) { return ResidueElem::from_lift(e); }

ResidueElem embed(const ResidueElem& e, std::uint32_t to_level) {
  return ResidueElem::from_lift(embed(e.lift(), to_level));
}

std::pair<ResidueElem, ResidueElem> align(const ResidueElem& a, const ResidueElem& b) {
  auto [x, y] = align(a.lift(), b.lift());
  return {ResidueElem::from_lift(x), ResidueElem::from_lift(y)};
}

ResidueElem frobenius_residue(const ResidueElem& e) { return e.pow(e.ctx().p()); }

ResidueElem reduce_mod_pi(const TowerElem& e) {
  const TowerCtx free_ctx = e.ctx().with_mode(TowerMode::Free);
  std::vector<Term> out;
  for (const Term& t : e.terms()) {
    if (t.mono.pi == 0) out.push_back(t);
  }
  return ResidueElem::from_lift(TowerElem::from_normal_terms(free_ctx, std::move(out)));
}

std::optional<ResidueElem> poly_divides(const ResidueElem& h, const ResidueElem& g) {
  if (h.is_zero()) throw DomainError("poly_divides: zero divisor");
  if (h.ctx().p() != g.ctx().p()) throw DomainError("poly_divides: different primes");
  const std::uint64_t p = h.ctx().p();
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (Y, X): lex with Y > X
  using Poly = std::map<Key, std::uint64_t>;
  auto to_poly = [p](const ResidueElem& e) {
    Poly out;
    for (const Term& t : e.terms()) {
      if (t.mono.pi != 0) throw DomainError("poly_divides: operand involves Pi");
      out[{t.mono.y, t.mono.x}] = mpz_class(t.coeff % p).get_ui();
    }
    return out;
  };
  auto modinv = [p](std::uint64_t a) {
    // p is prime: a^{p-2}.
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e > 0) {
      if (e & 1U) r = r * b % p;
      b = b * b % p;
      e >>= 1U;
    }
    return r;
  };

  const Poly hp = to_poly(h);
  Poly rest = to_poly(g);
  const auto [lead_key, lead_coeff] = *hp.rbegin();
  const std::uint64_t lead_inv = modinv(lead_coeff);
  Poly quotient;
  bool remainder_nonzero = false;
  while (!rest.empty()) {
    const auto [key, coeff] = *rest.rbegin();
    if (key.first < lead_key.first || key.second < lead_key.second) {
      // Leading term not divisible: it stays in the remainder for good.
      remainder_nonzero = true;
      break;
    }
    const Key shift{key.first - lead_key.first, key.second - lead_key.second};
    const std::uint64_t factor = coeff * lead_inv % p;
    quotient[shift] = (quotient[shift] + factor) % p;
    for (const auto& [hk, hc] : hp) {
      const Key target{hk.first + shift.first, hk.second + shift.second};
      std::uint64_t& slot = rest[target];
      slot = (slot + p - factor * hc % p) % p;
      if (slot == 0) rest.erase(target);
    }
  }
  if (remainder_nonzero) return std::nullopt;

  const TowerCtx free_ctx = g.ctx().with_mode(TowerMode::Free);
  std::vector<Term> terms;
  for (const auto& [k, c] : quotient) {
    if (c != 0) terms.push_back(Term{Monomial{0, k.second, k.first}, mpz_class(c)});
  }
  return ResidueElem::from_lift(normalize(terms, free_ctx));
}

}  // namespace rootclose

#include "rootclose/witt.hpp"

#include <algorithm>
#include <mutex>
#include <utility>

#include "rootclose/valuation.hpp"

namespace rootclose {

namespace {

// Ghost polynomial w_i in the variables offset..offset+N-1.
IntPoly ghost_poly(std::uint32_t p, std::size_t n, std::size_t i, std::size_t offset) {
  IntPoly w(2 * n);
  for (std::size_t j = 0; j <= i; ++j) {
    w += IntPoly::variable(2 * n, offset + j).pow(upow(p, i - j)).scaled(ipow(p, j));
  }
  return w;
}

// (lhs_i - sum_{j<i} p^j Q_j^{p^{i-j}}) / p^i for i = 0..N-1.
template <class Lhs>
std::vector<IntPoly> solve_ghost(std::uint32_t p, std::size_t n, Lhs lhs) {
  std::vector<IntPoly> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    IntPoly acc = lhs(i);
    for (std::size_t j = 0; j < i; ++j) acc -= out[j].pow(upow(p, i - j)).scaled(ipow(p, j));
    out.push_back(acc.divided_exact(ipow(p, i)));
  }
  return out;
}

std::shared_ptr<const WittPolys> compute_polys(std::uint32_t p, std::size_t n) {
  std::vector<IntPoly> gx, gy;
  for (std::size_t i = 0; i < n; ++i) {
    gx.push_back(ghost_poly(p, n, i, 0));
    gy.push_back(ghost_poly(p, n, i, n));
  }
  auto polys = std::make_shared<WittPolys>();
  polys->p = p;
  polys->length = n;
  polys->sum = solve_ghost(p, n, [&](std::size_t i) { return gx[i] + gy[i]; });
  polys->diff = solve_ghost(p, n, [&](std::size_t i) { return gx[i] - gy[i]; });
  polys->prod = solve_ghost(p, n, [&](std::size_t i) { return gx[i] * gy[i]; });
  return polys;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::uint32_t, std::size_t>, std::shared_ptr<const WittPolys>>& cache() {
  static std::map<std::pair<std::uint32_t, std::size_t>, std::shared_ptr<const WittPolys>> c;
  return c;
}

}  // namespace

std::shared_ptr<const WittPolys> witt_polynomials(std::uint32_t p, std::size_t length) {
  if (!is_prime(p)) throw DomainError("witt_polynomials: p must be prime");
  if (length == 0) throw DomainError("witt_polynomials: length must be positive");
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& c = cache();
  auto it = c.find({p, length});
  if (it != c.end()) return it->second;
  auto polys = compute_polys(p, length);
  c.emplace(std::make_pair(p, length), polys);
  return polys;
}

std::size_t witt_cache_size() {
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache().size();
}

namespace testing {

std::shared_ptr<const WittPolys> tampered_witt_polynomials(std::uint32_t p, std::size_t length) {
  if (length < 2) throw DomainError("tampered_witt_polynomials: needs length >= 2");
  auto copy = std::make_shared<WittPolys>(*witt_polynomials(p, length));
  IntPoly::Exponents e(2 * length, 0);
  e[1] = 1;  // the X_1 term of S_1
  copy->sum[1].add_term(e, 1);
  return copy;
}

}  // namespace testing

WittCtx::WittCtx(std::uint32_t p, std::size_t length) : polys_(witt_polynomials(p, length)) {}

WittCtx::WittCtx(std::shared_ptr<const WittPolys> polys) : polys_(std::move(polys)) {
  if (!polys_) throw DomainError("WittCtx: null polynomial table");
}

Fp Fp::make(std::uint32_t p, const mpz_class& c) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
  return Fp{p, static_cast<std::uint32_t>(r.get_ui())};
}

std::vector<mpz_class> ghost(const WittVec<mpz_class>& w) {
  const std::uint32_t p = w.ctx().p();
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < w.length(); ++i) {
    mpz_class s = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      s += ipow(p, j) * WittComponent<mpz_class>::pow(w[j], upow(p, i - j));
    }
    out.push_back(s);
  }
  return out;
}

std::optional<std::uint64_t> additive_order_of_one(const WittCtx& ctx, std::uint64_t limit) {
  const Fp proto{ctx.p(), 0};
  const auto one = WittVec<Fp>::one(ctx, proto);
  auto acc = one;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (acc.exact_zero()) return n;
    acc = acc + one;
  }
  return std::nullopt;
}

Truth witt_equal(const FontaineWitt& a, const FontaineWitt& b, const ClosureSettings& settings) {
  if (!(a.ctx() == b.ctx())) throw DomainError("witt_equal: context mismatch");
  Truth acc = Truth::True;
  for (std::size_t i = 0; i < a.length(); ++i) {
    acc = acc && equal(a[i], b[i], settings);
    if (acc == Truth::False) return acc;
  }
  return acc;
}

FontaineWitt P_minus_p(const WittCtx& ctx, const TowerCtx& family, std::size_t depth, ClosureMode mode) {
  const Generators g = generators(family, depth, mode);
  const FontaineElem zero = FontaineElem::constant(family, mode, depth, 0);
  std::vector<FontaineElem> p_one(ctx.length(), zero);
  if (ctx.length() > 1) p_one[1] = FontaineElem::constant(family, mode, depth, 1);
  return teichmuller(ctx, g.P) - FontaineWitt(ctx, std::move(p_one));
}

std::uint64_t max_u_precision(const FontaineWitt& x) {
  std::int64_t best = static_cast<std::int64_t>(x.length());
  for (std::size_t i = 0; i < x.length(); ++i) {
    best = std::min(best, static_cast<std::int64_t>(x[i].depth()) - static_cast<std::int64_t>(i) + 1);
  }
  return best < 0 ? 0 : static_cast<std::uint64_t>(best);
}

PadicValue u_map(const FontaineWitt& x, std::uint64_t K) {
  if (K == 0) throw DomainError("u_map: precision must be positive");
  if (K > x.length()) {
    throw PrecisionExceeded("u_map: precision p^" + std::to_string(K) + " exceeds the Witt length " +
                            std::to_string(x.length()));
  }
  if (K > max_u_precision(x)) {
    throw PrecisionExceeded("u_map: component depth only supports precision p^" +
                            std::to_string(max_u_precision(x)));
  }
  const std::uint32_t p = x.ctx().p();
  TowerElem sum(x[0].family());
  for (std::size_t i = 0; i < std::min<std::uint64_t>(x.length(), K); ++i) {
    const PadicValue t = theta(proot(x[i], i), K - i);
    auto [s, v] = align(sum, t.value);
    sum = s + v.scaled(ipow(p, i));
  }
  return make_padic(sum, K);
}

const char* to_string(WittDivisionResult::Status s) {
  switch (s) {
    case WittDivisionResult::Status::Ok: return "ok";
    case WittDivisionResult::Status::NotDivisible: return "not_divisible";
    case WittDivisionResult::Status::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

std::size_t min_depth(const FontaineWitt& x) {
  std::size_t d = x[0].depth();
  for (const auto& c : x.components()) d = std::min(d, c.depth());
  return d;
}

}  // namespace

WittDivisionResult divide_by_P_minus_p(const FontaineWitt& x, std::uint64_t K,
                                       const ClosureSettings& settings) {
  if (!u_map(x, K).is_zero()) {
    throw HypothesisNotMet("divide_by_P_minus_p: u(x) is not 0 mod p^" + std::to_string(K));
  }
  const WittCtx& ctx = x.ctx();
  const std::size_t n = ctx.length();
  const TowerCtx& family = x[0].family();
  const ClosureMode mode = x[0].mode();
  const FontaineWitt pmp = P_minus_p(ctx, family, min_depth(x), mode);

  WittDivisionResult out;
  std::optional<FontaineWitt> w;
  FontaineWitt v = x;
  for (std::size_t k = 0; k < n; ++k) {
    if (v[0].depth() == 0) {
      throw DepthExhausted("divide_by_P_minus_p: component depth exhausted at step " + std::to_string(k), k);
    }
    DivideByPResult f = divide_by_P(v[0], settings);
    if (!f.ok()) {
      out.status = f.status == DivideByPResult::Status::NotDivisible
                       ? WittDivisionResult::Status::NotDivisible
                       : WittDivisionResult::Status::Undetermined;
      out.step = k;
      out.failure = std::move(f);
      return out;
    }
    const FontaineElem& fk = *f.quotient;
    const FontaineWitt term = p_power_teichmuller(ctx, fk, k);
    w = w ? *w + term : term;
    if (k + 1 == n) break;

    // Zero representatives count as exact in Witt arithmetic, so v has to be
    // cut down to the precision of the product before subtracting.
    const FontaineWitt prod = pmp * teichmuller(ctx, fk);
    std::vector<FontaineElem> cut;
    for (std::size_t i = 0; i < n; ++i) cut.push_back(v[i].truncated(std::min(v[i].depth(), prod[i].depth())));
    FontaineWitt rest = FontaineWitt(ctx, std::move(cut)) - prod;
    const Truth lead = is_zero(rest[0], settings);
    if (lead == Truth::False) {
      throw InvariantViolation("divide_by_P_minus_p: leading coordinate survived at step " + std::to_string(k));
    }
    if (lead == Truth::Undetermined) {
      out.status = WittDivisionResult::Status::Undetermined;
      out.step = k;
      return out;
    }
    rest = rest.with_component(0, WittComponent<FontaineElem>::from_int(rest[0], 0));
    for (std::size_t i = 1; i < n; ++i) {
      if (rest[i].depth() == 0) {
        throw DepthExhausted("divide_by_P_minus_p: component depth exhausted at step " + std::to_string(k + 1),
                             k + 1);
      }
    }
    v = *p_divide_witt(rest);
  }

  out.quotient = *w;
  out.quotient_depth = min_depth(*w);
  out.verified = witt_equal(pmp * *w, x, settings);
  if (out.verified == Truth::False) {
    throw InvariantViolation("divide_by_P_minus_p: (P - p) * w differs from x");
  }
  out.status = out.verified == Truth::True ? WittDivisionResult::Status::Ok
                                           : WittDivisionResult::Status::Undetermined;
  return out;
}

}  // namespace rootclose

#pragma once

// Truncated Witt vectors W_N(A).
//
// Arithmetic is given by the universal integer polynomials S_i (sum),
// D_i (difference) and M_i (product) in the variables X_0..X_{N-1},
// Y_0..Y_{N-1}, obtained from the ghost components
//   w_i = sum_{j <= i} p^j T_j^{p^{i-j}}.
// WittVec<T> evaluates them in a component ring T. Supported components:
// mpz_class (exact, torsion-free; used as the ghost oracle), Fp, ResidueElem
// and FontaineElem (characteristic p).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rootclose/errors.hpp"
#include "rootclose/fontaine.hpp"
#include "rootclose/int_poly.hpp"
#include "rootclose/tower.hpp"

namespace rootclose {

struct WittPolys {
  std::uint32_t p;
  std::size_t length;
  std::vector<IntPoly> sum;
  std::vector<IntPoly> diff;
  std::vector<IntPoly> prod;
};

/// Universal polynomials for (p, N). Computed once per (p, N) and shared;
/// the returned object is never modified. Safe to call concurrently.
std::shared_ptr<const WittPolys> witt_polynomials(std::uint32_t p, std::size_t length);

/// Number of (p, N) pairs currently cached.
std::size_t witt_cache_size();

namespace testing {
/// A copy of the universal polynomials with one coefficient of S_1 off by one.
/// Used as a negative control for the ghost oracle.
std::shared_ptr<const WittPolys> tampered_witt_polynomials(std::uint32_t p, std::size_t length);
}  // namespace testing

class WittCtx {
 public:
  WittCtx(std::uint32_t p, std::size_t length);
  /// Uses the given polynomials instead of the cached ones.
  explicit WittCtx(std::shared_ptr<const WittPolys> polys);

  std::uint32_t p() const noexcept { return polys_->p; }
  std::size_t length() const noexcept { return polys_->length; }
  const WittPolys& polys() const noexcept { return *polys_; }

  friend bool operator==(const WittCtx& a, const WittCtx& b) noexcept {
    return a.polys_ == b.polys_;
  }

 private:
  std::shared_ptr<const WittPolys> polys_;
};

/// The field with p elements.
struct Fp {
  std::uint32_t p = 2;
  std::uint32_t v = 0;

  static Fp make(std::uint32_t p, const mpz_class& c);
  friend bool operator==(const Fp&, const Fp&) = default;
  friend Fp operator+(Fp a, Fp b) { return {a.p, static_cast<std::uint32_t>((std::uint64_t{a.v} + b.v) % a.p)}; }
  friend Fp operator-(Fp a, Fp b) { return {a.p, static_cast<std::uint32_t>((std::uint64_t{a.v} + a.p - b.v) % a.p)}; }
  friend Fp operator*(Fp a, Fp b) { return {a.p, static_cast<std::uint32_t>((std::uint64_t{a.v} * b.v) % a.p)}; }
  Fp operator-() const { return {p, (p - v) % p}; }
};

/// Per-type glue for the component rings.
template <class T>
struct WittComponent;

template <>
struct WittComponent<mpz_class> {
  static constexpr bool char_p = false;
  static mpz_class from_int(const mpz_class&, const mpz_class& c) { return c; }
  static bool exact_zero(const mpz_class& a) { return a == 0; }
  static mpz_class pow(const mpz_class& a, std::uint64_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
  }
  static std::string to_string(const mpz_class& a) { return a.get_str(); }
};

template <>
struct WittComponent<Fp> {
  static constexpr bool char_p = true;
  static Fp from_int(const Fp& proto, const mpz_class& c) { return Fp::make(proto.p, c); }
  static bool exact_zero(const Fp& a) { return a.v == 0; }
  static Fp pow(Fp a, std::uint64_t e) {
    Fp r{a.p, 1 % a.p};
    while (e > 0) {
      if (e & 1U) r = r * a;
      e >>= 1U;
      a = a * a;
    }
    return r;
  }
  /// Frobenius is the identity on F_p.
  static Fp pth_root(const Fp& a) { return a; }
  static std::string to_string(const Fp& a) { return std::to_string(a.v); }
};

template <>
struct WittComponent<ResidueElem> {
  static constexpr bool char_p = true;
  static ResidueElem from_int(const ResidueElem& proto, const mpz_class& c) {
    return reduce_mod_p(TowerElem::constant(proto.ctx(), c));
  }
  static bool exact_zero(const ResidueElem& a) { return a.is_zero(); }
  static ResidueElem pow(const ResidueElem& a, std::uint64_t e) { return a.pow(e); }
  static std::string to_string(const ResidueElem& a) { return a.to_string(); }
};

template <>
struct WittComponent<FontaineElem> {
  static constexpr bool char_p = true;
  static FontaineElem from_int(const FontaineElem& proto, const mpz_class& c) {
    return FontaineElem::constant(proto.family(), proto.mode(), proto.depth(), c);
  }
  static bool exact_zero(const FontaineElem& a) {
    for (const auto& c : a.components()) {
      if (!c.is_zero()) return false;
    }
    return true;
  }
  static FontaineElem pow(const FontaineElem& a, std::uint64_t e) { return a.pow(e); }
  static FontaineElem pth_root(const FontaineElem& a) { return proot(a); }
  static std::string to_string(const FontaineElem& a) { return a.to_string(); }
};

template <class T>
class WittVec {
 public:
  using Traits = WittComponent<T>;

  WittVec(WittCtx ctx, std::vector<T> components) : ctx_(std::move(ctx)), a_(std::move(components)) {
    if (a_.size() != ctx_.length()) throw DomainError("WittVec: length does not match context");
  }

  /// (c, 0, ..., 0) shaped like `proto`; for c = 1 this is the unit.
  static WittVec constant_teichmuller(const WittCtx& ctx, const T& proto, const mpz_class& c) {
    std::vector<T> a(ctx.length(), Traits::from_int(proto, 0));
    a[0] = Traits::from_int(proto, c);
    return WittVec(ctx, std::move(a));
  }
  static WittVec zero(const WittCtx& ctx, const T& proto) { return constant_teichmuller(ctx, proto, 0); }
  static WittVec one(const WittCtx& ctx, const T& proto) { return constant_teichmuller(ctx, proto, 1); }

  const WittCtx& ctx() const noexcept { return ctx_; }
  std::size_t length() const noexcept { return a_.size(); }
  const T& operator[](std::size_t i) const { return a_.at(i); }
  const std::vector<T>& components() const noexcept { return a_; }
  /// Replaces one coordinate (the caller is responsible for its meaning).
  WittVec with_component(std::size_t i, T value) const {
    WittVec out = *this;
    out.a_.at(i) = std::move(value);
    return out;
  }

  bool exact_zero() const {
    for (const auto& c : a_) {
      if (!Traits::exact_zero(c)) return false;
    }
    return true;
  }

  friend WittVec operator+(const WittVec& x, const WittVec& y) { return apply(x.ctx_.polys().sum, x, y); }
  friend WittVec operator-(const WittVec& x, const WittVec& y) { return apply(x.ctx_.polys().diff, x, y); }
  friend WittVec operator*(const WittVec& x, const WittVec& y) { return apply(x.ctx_.polys().prod, x, y); }
  WittVec operator-() const { return zero(ctx_, a_[0]) - *this; }

  /// Exact equality of representatives.
  friend bool operator==(const WittVec& x, const WittVec& y) {
    return x.ctx_ == y.ctx_ && x.a_ == y.a_;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i > 0) s += ", ";
      s += Traits::to_string(a_[i]);
    }
    return s + ")";
  }

 private:
  static WittVec apply(const std::vector<IntPoly>& polys, const WittVec& x, const WittVec& y);

  WittCtx ctx_;
  std::vector<T> a_;
};

namespace detail {

/// Powers of a fixed list of values, computed on demand and memoized.
template <class T>
class PowerCache {
 public:
  explicit PowerCache(std::vector<const T*> values) : values_(std::move(values)), cache_(values_.size()) {}

  const T& get(std::size_t var, std::uint32_t e) {
    auto& slot = cache_[var];
    auto it = slot.find(e);
    if (it != slot.end()) return it->second;
    return slot.emplace(e, WittComponent<T>::pow(*values_[var], e)).first->second;
  }
  const T& value(std::size_t var) const { return *values_[var]; }

 private:
  std::vector<const T*> values_;
  std::vector<std::map<std::uint32_t, T>> cache_;
};

template <class T>
T evaluate(const IntPoly& poly, PowerCache<T>& cache, const T& proto, std::uint32_t p) {
  using Traits = WittComponent<T>;
  T sum = Traits::from_int(proto, 0);
  bool first = true;
  mpz_class c;
  for (const auto& [e, coeff] : poly.terms()) {
    c = coeff;
    if constexpr (Traits::char_p) {
      mpz_fdiv_r_ui(c.get_mpz_t(), c.get_mpz_t(), p);
      if (c == 0) continue;
    }
    bool vanishes = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] > 0 && Traits::exact_zero(cache.value(i))) {
        vanishes = true;
        break;
      }
    }
    if (vanishes) continue;
    std::optional<T> term;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      const T& f = cache.get(i, e[i]);
      if (term) {
        *term = T(*term * f);
      } else {
        term = f;
      }
    }
    T scaled = Traits::from_int(proto, c);
    if (term) scaled = (c == 1) ? std::move(*term) : T(scaled * *term);
    if (first) {
      sum = std::move(scaled);
      first = false;
    } else {
      sum = T(sum + scaled);
    }
  }
  return sum;
}

}  // namespace detail

template <class T>
WittVec<T> WittVec<T>::apply(const std::vector<IntPoly>& polys, const WittVec& x, const WittVec& y) {
  if (!(x.ctx_ == y.ctx_)) throw DomainError("WittVec: context mismatch");
  const std::size_t n = x.length();
  std::vector<const T*> vars;
  vars.reserve(2 * n);
  for (const auto& c : x.a_) vars.push_back(&c);
  for (const auto& c : y.a_) vars.push_back(&c);
  detail::PowerCache<T> cache(std::move(vars));
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(detail::evaluate(polys[i], cache, x.a_[0], x.ctx_.p()));
  }
  return WittVec(x.ctx_, std::move(out));
}

/// Ghost components (w_0(a), ..., w_{N-1}(a)) of an integer Witt vector.
std::vector<mpz_class> ghost(const WittVec<mpz_class>& w);

/// Teichmüller lift (a, 0, ..., 0).
template <class T>
WittVec<T> teichmuller(const WittCtx& ctx, const T& a) {
  std::vector<T> comps(ctx.length(), WittComponent<T>::from_int(a, 0));
  comps[0] = a;
  return WittVec<T>(ctx, std::move(comps));
}

/// V(x) = (0, x_0, ..., x_{N-2}).
template <class T>
WittVec<T> verschiebung(const WittVec<T>& x) {
  std::vector<T> comps;
  comps.reserve(x.length());
  comps.push_back(WittComponent<T>::from_int(x[0], 0));
  for (std::size_t i = 0; i + 1 < x.length(); ++i) comps.push_back(x[i]);
  return WittVec<T>(x.ctx(), std::move(comps));
}

/// F(x) = (x_0^p, ..., x_{N-1}^p) over a characteristic-p ring.
template <class T>
WittVec<T> witt_frobenius(const WittVec<T>& x) {
  static_assert(WittComponent<T>::char_p, "witt_frobenius needs characteristic p components");
  std::vector<T> comps;
  comps.reserve(x.length());
  for (const auto& c : x.components()) comps.push_back(WittComponent<T>::pow(c, x.ctx().p()));
  return WittVec<T>(x.ctx(), std::move(comps));
}

/// p^k τ(a) = (0, ..., 0, a^{p^k}, 0, ...) in characteristic p.
template <class T>
WittVec<T> p_power_teichmuller(const WittCtx& ctx, const T& a, std::size_t k) {
  static_assert(WittComponent<T>::char_p, "p_power_teichmuller needs characteristic p components");
  std::vector<T> comps(ctx.length(), WittComponent<T>::from_int(a, 0));
  if (k >= ctx.length()) return WittVec<T>(ctx, std::move(comps));
  T v = a;
  for (std::size_t i = 0; i < k; ++i) v = WittComponent<T>::pow(v, ctx.p());
  comps[k] = std::move(v);
  return WittVec<T>(ctx, std::move(comps));
}

/// Inverse of x -> p x = (0, x_0^p, ..., x_{N-2}^p) over a perfect ring:
/// (0, a_1, ..., a_{N-1}) -> (a_1^{1/p}, ..., a_{N-1}^{1/p}, 0). The last
/// coordinate is not determined by the input and is set to zero.
/// Returns std::nullopt when a_0 is not zero.
template <class T>
std::optional<WittVec<T>> p_divide_witt(const WittVec<T>& x) {
  using Traits = WittComponent<T>;
  if (!Traits::exact_zero(x[0])) return std::nullopt;
  std::vector<T> comps;
  comps.reserve(x.length());
  for (std::size_t i = 1; i < x.length(); ++i) comps.push_back(Traits::pth_root(x[i]));
  comps.push_back(Traits::from_int(comps.empty() ? x[0] : comps.back(), 0));
  return WittVec<T>(x.ctx(), std::move(comps));
}

/// n-fold sum x + ... + x by repeated addition.
template <class T>
WittVec<T> repeated_sum(const WittVec<T>& x, std::uint64_t n) {
  WittVec<T> acc = WittVec<T>::zero(x.ctx(), x[0]);
  for (std::uint64_t i = 0; i < n; ++i) acc = acc + x;
  return acc;
}

/// Smallest n >= 1 with n * 1 = 0 in W_N(F_p), searching up to `limit`.
std::optional<std::uint64_t> additive_order_of_one(const WittCtx& ctx, std::uint64_t limit);

// ---- Witt vectors over the Fontaine ring ----------------------------------

using FontaineWitt = WittVec<FontaineElem>;

/// Equality componentwise in E (three-valued in ClosureCerts mode).
Truth witt_equal(const FontaineWitt& a, const FontaineWitt& b, const ClosureSettings& settings = {});

/// τ(P) - p, where p * 1 = (0, 1, 0, ...).
FontaineWitt P_minus_p(const WittCtx& ctx, const TowerCtx& family, std::size_t depth, ClosureMode mode);

/// Largest K accepted by u_map: min(N, min_i(depth_i - i) + 1); 0 if none.
std::uint64_t max_u_precision(const FontaineWitt& x);

/// u(x) mod p^K = sum_{i < min(N, K)} p^i θ(a_i^{1/p^i}) using x = sum V^i τ(a_i)
/// and u∘V = p·u∘F^{-1}. Requires 1 <= K <= max_u_precision(x).
PadicValue u_map(const FontaineWitt& x, std::uint64_t K);

struct WittDivisionResult {
  enum class Status { Ok, NotDivisible, Undetermined };

  Status status = Status::Ok;
  std::size_t step = 0;                   // approximation step that failed
  std::optional<DivideByPResult> failure;  // the Fontaine division that failed
  std::optional<FontaineWitt> quotient;
  std::size_t quotient_depth = 0;         // smallest component depth of the quotient
  Truth verified = Truth::Undetermined;   // (P - p) * quotient == x

  bool ok() const { return status == Status::Ok; }
};

const char* to_string(WittDivisionResult::Status s);

/// Writes x = (P - p) w by successive approximation: with v_0 = x, at step k
/// the first coordinate of v_k lies in ker ū and is factored as P f_k; then
/// w += p^k τ(f_k) and v_{k+1} = (v_k - (P - p) τ(f_k)) / p. Requires
/// u(x) ≡ 0 mod p^K (HypothesisNotMet otherwise). Each step costs two levels
/// of component depth; running out throws DepthExhausted with the number of
/// completed steps. The product (P - p) w = x is always checked.
WittDivisionResult divide_by_P_minus_p(const FontaineWitt& x, std::uint64_t K,
                                       const ClosureSettings& settings = {});

}  // namespace rootclose

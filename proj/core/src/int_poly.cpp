#include "rootclose/int_poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rootclose/errors.hpp"

namespace rootclose {

IntPoly IntPoly::constant(std::size_t nvars, const mpz_class& c) {
  IntPoly out(nvars);
  out.add_term(Exponents(nvars, 0), c);
  return out;
}

IntPoly IntPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw DomainError("IntPoly::variable: index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  IntPoly out(nvars);
  out.add_term(e, 1);
  return out;
}

mpz_class IntPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::uint32_t IntPoly::total_degree() const {
  std::uint32_t deg = 0;
  for (const auto& [e, c] : terms_) {
    deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0U));
  }
  return deg;
}

void IntPoly::add_term(const Exponents& e, const mpz_class& c) {
  if (e.size() != nvars_) throw DomainError("IntPoly: exponent vector has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void IntPoly::check_compatible(const IntPoly& o) const {
  if (nvars_ != o.nvars_) throw DomainError("IntPoly: variable count mismatch");
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  a.check_compatible(b);
  IntPoly out(a.nvars_);
  IntPoly::Exponents e(a.nvars_);
  mpz_class prod;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      prod = ca * cb;
      out.add_term(e, prod);
    }
  }
  return out;
}

IntPoly IntPoly::scaled(const mpz_class& c) const {
  IntPoly out(nvars_);
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

IntPoly IntPoly::pow(std::uint64_t e) const {
  IntPoly result = constant(nvars_, 1);
  IntPoly base = *this;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return result;
}

IntPoly IntPoly::divided_exact(const mpz_class& d) const {
  if (d == 0) throw DomainError("IntPoly::divided_exact: division by zero");
  IntPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) {
      throw InvariantViolation("IntPoly::divided_exact: coefficient " + c.get_str() +
                               " is not divisible by " + d.get_str());
    }
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    out.terms_.emplace(e, std::move(q));
  }
  return out;
}

mpz_class IntPoly::eval(const std::vector<mpz_class>& point) const {
  if (point.size() != nvars_) throw DomainError("IntPoly::eval: point has wrong dimension");
  mpz_class sum = 0;
  mpz_class term, power;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), e[i]);
      term *= power;
    }
    sum += term;
  }
  return sum;
}

std::string IntPoly::to_string(const std::vector<std::string>& names) const {
  if (names.size() != nvars_) throw DomainError("IntPoly::to_string: wrong number of names");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    mpz_class mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    bool any = false;
    if (mag != 1) {
      os << mag.get_str();
      any = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (any) os << "*";
      os << names[i];
      if (e[i] > 1) os << "^" << e[i];
      any = true;
    }
    if (!any) os << "1";
  }
  return os.str();
}

}  // namespace rootclose

#include "rootclose/valuation.hpp"

#include <string>

#include "rootclose/errors.hpp"

namespace rootclose {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Prime::Prime(std::uint32_t value) : value_(value) {
  if (!is_prime(value)) {
    throw DomainError(std::to_string(value) + " is not prime");
  }
}

Valuation vp(const Prime& p, const mpz_class& n) {
  if (n == 0) return Valuation::infinite();
  mpz_class m = abs(n);
  std::uint64_t r = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p.value())) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p.value());
    ++r;
  }
  return Valuation::finite(r);
}

mpz_class binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    throw DomainError("binom: k = " + std::to_string(k) + " exceeds n = " +
                      std::to_string(n));
  }
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Valuation binom_valuation(const Prime& p, std::uint32_t m, const mpz_class& i) {
  const mpz_class top = ipow(p.value(), m);
  if (i < 1 || i > top) {
    throw DomainError("binom_valuation: i outside [1, p^m]");
  }
  const Valuation r = vp(p, i);
  // r <= m because i <= p^m.
  return Valuation::finite(m - r.value());
}

mpz_class ipow(std::uint32_t p, std::uint64_t e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), p, e);
  return out;
}

std::uint64_t upow(std::uint32_t p, std::uint64_t e) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / p) {
      throw DomainError("upow: p^e overflows 64 bits");
    }
    out *= p;
  }
  return out;
}

}  // namespace rootclose

#include "rootclose/suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "rootclose/closure.hpp"
#include "rootclose/errors.hpp"
#include "rootclose/valuation.hpp"
#include "serialize.hpp"

namespace rootclose {

using serial::json;

// ---- random elements -------------------------------------------------------

TowerElem random_tower(const TowerCtx& ctx, Rng& rng, std::size_t max_terms, std::uint64_t max_exp,
                       std::int64_t coeff_bound) {
  std::uniform_int_distribution<std::size_t> nterms(1, std::max<std::size_t>(1, max_terms));
  std::uniform_int_distribution<std::uint64_t> ex(0, max_exp > 0 ? max_exp - 1 : 0);
  std::uniform_int_distribution<std::int64_t> co(-coeff_bound, coeff_bound);
  std::vector<Term> raw;
  const std::size_t n = nterms(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t c = 0;
    while (c == 0) c = co(rng);
    const Monomial m{ex(rng), ex(rng), ex(rng)};
    raw.push_back(Term{m, mpz_class(static_cast<long>(c))});
  }
  return normalize(raw, ctx);
}

FontaineElem random_fontaine(const TowerCtx& family, std::size_t depth, ClosureMode mode, Rng& rng) {
  const Generators g = generators(family, depth + 1, mode);
  const std::vector<FontaineElem> atoms{g.P.truncated(depth), g.X.truncated(depth), g.Y.truncated(depth),
                                        proot(g.P),           proot(g.X),           proot(g.Y)};
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1), factors(1, 2), terms(1, 3);
  std::uniform_int_distribution<std::uint32_t> coef(1, family.p() - 1);
  FontaineElem acc = FontaineElem::constant(family, mode, depth, 0);
  const std::size_t nt = terms(rng);
  for (std::size_t t = 0; t < nt; ++t) {
    FontaineElem m = FontaineElem::constant(family, mode, depth, coef(rng));
    const std::size_t nf = factors(rng);
    for (std::size_t i = 0; i < nf; ++i) m = m * atoms[pick(rng)];
    acc = acc + m;
  }
  return acc;
}

WittVec<mpz_class> random_int_witt(const WittCtx& ctx, Rng& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  std::vector<mpz_class> a;
  for (std::size_t i = 0; i < ctx.length(); ++i) a.emplace_back(static_cast<long>(d(rng)));
  return WittVec<mpz_class>(ctx, std::move(a));
}

WittVec<Fp> random_fp_witt(const WittCtx& ctx, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> d(0, ctx.p() - 1);
  std::vector<Fp> a;
  for (std::size_t i = 0; i < ctx.length(); ++i) a.push_back(Fp{ctx.p(), d(rng)});
  return WittVec<Fp>(ctx, std::move(a));
}

FontaineElem example_eta(const TowerCtx& family, std::size_t depth, ClosureMode mode) {
  const Generators g = generators(family, depth, mode);
  const std::uint32_t d = family.degree();
  return g.P.pow(d) + g.X.pow(d) + g.Y.pow(d);
}

// ---- record plumbing -------------------------------------------------------

namespace {

CheckRecord record(std::string name, CheckStatus status, json details, std::string summary) {
  details["summary"] = summary;
  return CheckRecord{std::move(name), status, details.dump(), std::move(summary)};
}

CheckStatus pass_if(bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; }

// Runs a check body; exceptions become fail records.
CheckRecord guarded(const std::string& name, const json& replay, const std::function<CheckRecord()>& body) {
  try {
    CheckRecord r = body();
    if (!replay.is_null()) {
      json d = json::parse(r.details);
      d["replay"] = replay;
      r.details = d.dump();
    }
    return r;
  } catch (const std::exception& e) {
    json d{{"error", e.what()}};
    if (!replay.is_null()) d["replay"] = replay;
    return record(name, CheckStatus::Fail, d, std::string("exception: ") + e.what());
  }
}

json replay_entry(const std::string& check, json args) { return {{"check", check}, {"args", std::move(args)}}; }

std::string config_tag(std::uint32_t p, std::size_t n) {
  return "p=" + std::to_string(p) + " N=" + std::to_string(n);
}

TowerCtx example_family(const Config& cfg) { return TowerCtx(cfg.p, 0, cfg.degree, TowerMode::Quotient); }

// P^d + X^d + Y^d at level n.
TowerElem eta_component(const TowerCtx& family, std::uint32_t n) {
  const TowerCtx ctx = family.at_level(n);
  const std::uint32_t d = family.degree();
  return TowerElem::pi(ctx).pow(d) + TowerElem::x(ctx).pow(d) + TowerElem::y(ctx).pow(d);
}

}  // namespace

// ---- worked example --------------------------------------------------------

Report run_example_suite(const Config& cfg) {
  cfg.validate_for_example();
  Report report{cfg, "example", {}};
  const TowerCtx family = example_family(cfg);
  const std::size_t depth = cfg.depth;
  const ClosureSettings settings{cfg.effective_m_max(), kDefaultTermBudget};
  const FontaineElem eta = example_eta(family, depth, ClosureMode::PlainR);
  const json eta_json = serial::fontaine_to_json(eta);

  report.checks.push_back(guarded("E1 eta is a compatible sequence", nullptr, [&] {
    const Truth t = check_compat(eta);
    return record("E1 eta is a compatible sequence", from_truth(t),
                  {{"kind", "compat"}, {"element", eta_json}, {"result", to_string(t)}},
                  "r_{i+1}^p == r_i for i < " + std::to_string(depth));
  }));

  report.checks.push_back(guarded("E2 bar_u(eta) = 0", nullptr, [&] {
    const ResidueElem r0 = bar_u(eta);
    return record("E2 bar_u(eta) = 0", pass_if(r0.is_zero()),
                  {{"kind", "bar_u_zero"}, {"element", eta_json}, {"r0", serial::tower_to_json(r0.lift())}},
                  "r_0 = " + r0.to_string());
  }));

  report.checks.push_back(guarded("E3 eta is not in P E(R)", nullptr, [&] {
    const DivideByPResult r = divide_by_P(eta);
    // Independent negative certificate: Π | r_1 in R_1 iff X^{d p} + Y^{d p}
    // divides r_1 mod Π in F_p[X, Y].
    const TowerCtx lvl1 = family.at_level(1);
    const TowerCtx free1 = lvl1.with_mode(TowerMode::Free);
    const ResidueElem g = reduce_mod_pi(eta.component(1).at_level(1).num());
    const ResidueElem h = reduce_mod_p(TowerElem::monomial(free1, {0, lvl1.y_bound(), 0}) +
                                       TowerElem::monomial(free1, {0, 0, lvl1.y_bound()}));
    const bool divides = poly_divides(h, g).has_value();
    const bool ok = r.status == DivideByPResult::Status::NotDivisible && r.index == 1 && !divides;
    json d{{"kind", "plain_not_divisible"},
           {"element", eta_json},
           {"status", to_string(r.status)},
           {"index", r.index},
           {"negative_certificate",
            {{"h", serial::tower_to_json(h.lift())}, {"g", serial::tower_to_json(g.lift())}, {"divides", divides}}}};
    if (r.offending) d["offending"] = serial::monomial_to_json(*r.offending);
    return record("E3 eta is not in P E(R)", pass_if(ok), d,
                  std::string("divide_by_P stops at component ") + std::to_string(r.index) + " on " +
                      (r.offending ? r.offending->to_string() : "?") + "; " + h.to_string() +
                      (divides ? " divides " : " does not divide ") + g.to_string());
  }));

  for (std::uint32_t n = 1; n < depth; ++n) {
    const std::string name = "E4 c_" + std::to_string(n) + " is in C(R)";
    report.checks.push_back(guarded(name, nullptr, [&] {
      const LocalElem c(eta_component(family, n), 1);
      MembershipResult r = membership(c, settings.m_max, settings.term_budget);
      json d{{"kind", "membership"}, {"claim", serial::local_to_json(c)}};
      if (auto* cert = std::get_if<ClosureCert>(&r)) {
        const bool verified = verify_certificate(*cert);
        d["m"] = cert->m;
        d["certificates"] = json::array({serial::cert_to_json(*cert)});
        return record(name, pass_if(verified), d,
                      "c^(p^" + std::to_string(cert->m) + ") in R, witness with " +
                          std::to_string(cert->witness.size()) + " terms");
      }
      if (std::holds_alternative<BudgetExceeded>(r)) {
        d["budget_exceeded"] = true;
        return record(name, CheckStatus::Undetermined, d, "term budget exceeded");
      }
      return record(name, CheckStatus::Fail, d, "no certificate up to m_max");
    }));
  }

  report.checks.push_back(guarded("E5 eta is in P E(C(R))", nullptr, [&] {
    const std::string name = "E5 eta is in P E(C(R))";
    const ClosureMode mode = cfg.plain_e5 ? ClosureMode::PlainR : ClosureMode::ClosureCerts;
    const FontaineElem e = eta.with_mode(mode);
    const DivideByPResult r = divide_by_P(e, settings);
    json d{{"kind", "closure_divide"},
           {"element", serial::fontaine_to_json(e)},
           {"status", to_string(r.status)},
           {"index", r.index}};
    json certs = json::array();
    for (const auto& c : r.factor_certs) certs.push_back(serial::cert_to_json(c));
    json congr = json::array();
    bool all_true = true;
    for (const auto& c : r.congruences) {
      congr.push_back(serial::congruence_to_json(c));
      all_true = all_true && c.result == Truth::True;
    }
    d["certificates"] = certs;
    d["congruences"] = congr;
    if (r.offending) d["offending"] = serial::monomial_to_json(*r.offending);
    if (!r.ok()) {
      const CheckStatus st =
          r.status == DivideByPResult::Status::Undetermined ? CheckStatus::Undetermined : CheckStatus::Fail;
      return record(name, st, d,
                    std::string(to_string(r.status)) + " at component " + std::to_string(r.index) + " (" +
                        to_string(mode) + " mode)");
    }
    const Generators g = generators(family, r.quotient->depth(), mode);
    const Truth product = equal(g.P * *r.quotient, e, settings);
    d["quotient"] = serial::fontaine_to_json(*r.quotient);
    d["product_equal"] = to_string(product);
    CheckStatus st = from_truth(product);
    if (st == CheckStatus::Pass && !all_true) st = CheckStatus::Undetermined;
    return record(name, st, d,
                  "P * t == eta at depth " + std::to_string(r.quotient->depth()) + ": " + to_string(product) +
                      ", " + std::to_string(r.congruences.size()) + " congruences, " +
                      std::to_string(r.factor_certs.size()) + " factor certificates");
  }));

  report.checks.push_back(guarded("E6 Witt roundtrip (P - p) tau(X)", nullptr, [&] {
    const std::string name = "E6 Witt roundtrip (P - p) tau(X)";
    const WittCtx ctx(cfg.p, cfg.witt_length);
    const std::size_t wdepth = std::max(depth, 2 * cfg.witt_length - 1);
    const ClosureMode mode = ClosureMode::ClosureCerts;
    const Generators g = generators(family, wdepth, mode);
    const FontaineWitt x = P_minus_p(ctx, family, wdepth, mode) * teichmuller(ctx, g.X);
    const std::uint64_t K = max_u_precision(x);
    const bool u_zero = u_map(x, K).is_zero();
    const WittDivisionResult r = divide_by_P_minus_p(x, K, settings);
    json d{{"kind", "witt_roundtrip"},
           {"x", serial::witt_to_json(x)},
           {"K", K},
           {"u_zero", u_zero},
           {"status", to_string(r.status)},
           {"verified", to_string(r.verified)}};
    if (r.quotient) {
      d["w"] = serial::witt_to_json(*r.quotient);
      d["quotient_depth"] = r.quotient_depth;
    }
    const CheckStatus st = !u_zero ? CheckStatus::Fail
                           : r.ok() ? CheckStatus::Pass
                           : r.status == WittDivisionResult::Status::Undetermined ? CheckStatus::Undetermined
                                                                                  : CheckStatus::Fail;
    return record(name, st, d,
                  "W_" + std::to_string(cfg.witt_length) + ", u(x) = 0 mod p^" + std::to_string(K) +
                      ", (P - p) w == x: " + to_string(r.verified));
  }));

  return report;
}

// ---- property checks -------------------------------------------------------

CheckRecord check_binomial_lemma(std::uint32_t p, std::uint32_t max_m) {
  const std::string name = "valuation: vp(binom(p^m, i)) = m - vp(i), p=" + std::to_string(p) +
                           " m<=" + std::to_string(max_m);
  return guarded(name, replay_entry("binomial_lemma", {{"p", p}, {"max_m", max_m}}), [&] {
    const Prime prime(p);
    std::size_t checked = 0;
    json mismatches = json::array();
    for (std::uint32_t m = 0; m <= max_m; ++m) {
      const std::uint64_t pm = upow(p, m);
      for (std::uint64_t i = 1; i <= pm; ++i) {
        const Valuation oracle = vp(prime, binom(pm, i));
        const Valuation closed = binom_valuation(prime, m, mpz_class(static_cast<unsigned long>(i)));
        ++checked;
        if (!(oracle == closed) && mismatches.size() < 5) mismatches.push_back({m, i});
      }
    }
    return record(name, pass_if(mismatches.empty()), {{"checked", checked}, {"mismatches", mismatches}},
                  std::to_string(checked) + " coefficients");
  });
}

CheckRecord check_valuation_additive(std::size_t samples, std::uint64_t seed) {
  const std::string name = "valuation: vp(ab) = vp(a) + vp(b)";
  return guarded(name, replay_entry("valuation_additive", {{"samples", samples}, {"seed", seed}}), [&] {
    Rng rng(seed);
    std::uniform_int_distribution<long> d(-1000000, 1000000);
    std::size_t bad = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::uint32_t p : {2U, 3U, 5U, 7U}) {
        const mpz_class a(d(rng)), b(d(rng));
        const Prime prime(p);
        if (!(vp(prime, a * b) == vp(prime, a) + vp(prime, b))) ++bad;
      }
    }
    if (!vp(Prime(2), 0).is_infinite()) ++bad;
    return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}},
                  std::to_string(samples * 4) + " products");
  });
}

CheckRecord check_closure_bound(std::uint32_t p, std::size_t pairs, std::uint64_t seed) {
  const std::string name = "closure: sum of certified elements within 2kp^n+n+1, p=" + std::to_string(p);
  return guarded(name, replay_entry("closure_bound", {{"p", p}, {"pairs", pairs}, {"seed", seed}}), [&] {
    const std::uint32_t d = std::gcd(3U, p) == 1 ? 3U : 2U;
    const TowerCtx ctx(p, 1, d, TowerMode::Quotient);
    const LocalElem c1(eta_component(ctx.at_level(0), 1), 1);
    Rng rng(seed);
    // Elements a + b c_1 with a certificate of exponent exactly 1 and
    // denominator Π^1, so n = k = 1.
    auto sample = [&]() -> std::optional<ClosureCert> {
      const TowerElem a = random_tower(ctx, rng, 3, 4, 2);
      const TowerElem b = random_tower(ctx, rng, 2, 3, 2);
      const LocalElem s = LocalElem::integral(a) + LocalElem::integral(b) * c1;
      if (s.denom_exp() != 1) return std::nullopt;
      MembershipResult r = membership(s, 1);
      auto* cert = std::get_if<ClosureCert>(&r);
      if (!cert || cert->m != 1) return std::nullopt;
      return *cert;
    };
    std::size_t found = 0, attempts = 0, violations = 0, unverified = 0;
    std::uint64_t bound = 0;
    std::map<std::uint32_t, std::size_t> histogram;
    json certs = json::array();
    while (found < pairs && attempts < 50 * pairs) {
      ++attempts;
      auto s = sample();
      if (!s) continue;
      auto t = sample();
      if (!t) continue;
      ++found;
      bound = closure_add_bound(*s, *t);
      const ClosureCert sum = closure_add(*s, *t);
      if (sum.m > bound) ++violations;
      // Oracle: raise the sum directly rather than trusting the witness.
      const LocalElem direct = (s->elem + t->elem).pow(upow(p, sum.m));
      if (!verify_certificate(sum) || !direct.is_integral()) ++unverified;
      ++histogram[sum.m];
      if (certs.size() < 3) certs.push_back(serial::cert_to_json(sum));
    }
    json hist = json::object();
    for (const auto& [m, n] : histogram) hist[std::to_string(m)] = n;
    const bool ok = found == pairs && violations == 0 && unverified == 0;
    return record(name, pass_if(ok),
                  {{"pairs", found},
                   {"attempts", attempts},
                   {"bound", bound},
                   {"violations", violations},
                   {"unverified", unverified},
                   {"m_histogram", hist},
                   {"certificates", certs}},
                  std::to_string(found) + " pairs, bound " + std::to_string(bound) + ", max m " +
                      (histogram.empty() ? "-" : std::to_string(histogram.rbegin()->first)));
  });
}

CheckRecord check_kernel_lemma(std::uint32_t p, std::uint32_t degree, std::uint32_t max_level) {
  const std::string name = "closure: kernel lemma factorizations, p=" + std::to_string(p);
  return guarded(name, replay_entry("kernel_lemma", {{"p", p}, {"degree", degree}, {"max_level", max_level}}), [&] {
    const TowerCtx family(p, 0, degree, TowerMode::Quotient);
    json certs = json::array();
    std::size_t failures = 0;
    for (std::uint32_t n = 1; n <= max_level; ++n) {
      const ClosureCert c = kernel_lemma_factor(eta_component(family, n), n);
      if (c.m > n || !verify_certificate(c)) ++failures;
      certs.push_back(serial::cert_to_json(c));
      // x^{p^n} = x is not in pR.
      try {
        kernel_lemma_factor(TowerElem::x(family.at_level(n)), n);
        ++failures;
      } catch (const HypothesisNotMet&) {
      }
    }
    return record(name, pass_if(failures == 0), {{"failures", failures}, {"certificates", certs}},
                  "levels 1.." + std::to_string(max_level));
  });
}

CheckRecord check_witt_ghost(std::uint32_t p, std::size_t length, std::size_t samples, std::uint64_t seed,
                             bool tampered) {
  const std::string name = "witt: ghost map is a ring homomorphism, " + config_tag(p, length) +
                           (tampered ? " (tampered table)" : "");
  return guarded(name,
                 replay_entry("witt_ghost",
                             {{"p", p}, {"length", length}, {"samples", samples}, {"seed", seed}, {"tampered", tampered}}),
                 [&] {
                   const WittCtx ctx = tampered ? WittCtx(testing::tampered_witt_polynomials(p, length))
                                                : WittCtx(p, length);
                   Rng rng(seed);
                   std::size_t bad = 0;
                   for (std::size_t s = 0; s < samples; ++s) {
                     const auto x = random_int_witt(ctx, rng, 40);
                     const auto y = random_int_witt(ctx, rng, 40);
                     const auto gx = ghost(x), gy = ghost(y);
                     const auto gs = ghost(x + y), gd = ghost(x - y), gm = ghost(x * y), gn = ghost(-x);
                     for (std::size_t i = 0; i < length; ++i) {
                       if (gs[i] != gx[i] + gy[i] || gd[i] != gx[i] - gy[i] || gm[i] != gx[i] * gy[i] ||
                           gn[i] != -gx[i]) {
                         ++bad;
                         break;
                       }
                     }
                   }
                   return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}},
                                 std::to_string(samples) + " pairs, " + std::to_string(bad) + " failures");
                 });
}

CheckRecord check_witt_additive_order(std::uint32_t p, std::size_t length) {
  const std::string name = "witt: 1 has additive order p^N in W_N(F_p), " + config_tag(p, length);
  return guarded(name, replay_entry("witt_additive_order", {{"p", p}, {"length", length}}), [&] {
    const WittCtx ctx(p, length);
    const std::uint64_t expected = upow(p, length);
    const auto order = additive_order_of_one(ctx, expected + 1);
    return record(name, pass_if(order && *order == expected),
                  {{"order", order ? json(*order) : json(nullptr)}, {"expected", expected}},
                  "order " + (order ? std::to_string(*order) : std::string("> limit")));
  });
}

CheckRecord check_witt_ring_axioms(std::uint32_t p, std::size_t length, std::size_t samples, std::uint64_t seed) {
  const std::string name = "witt: ring axioms in W_N(F_p), " + config_tag(p, length);
  return guarded(name, replay_entry("witt_ring_axioms", {{"p", p}, {"length", length}, {"samples", samples}, {"seed", seed}}),
                 [&] {
                   const WittCtx ctx(p, length);
                   Rng rng(seed);
                   const Fp proto{p, 0};
                   const auto zero = WittVec<Fp>::zero(ctx, proto), one = WittVec<Fp>::one(ctx, proto);
                   std::size_t bad = 0;
                   for (std::size_t s = 0; s < samples; ++s) {
                     const auto a = random_fp_witt(ctx, rng), b = random_fp_witt(ctx, rng),
                                c = random_fp_witt(ctx, rng);
                     const bool ok = (a + b) + c == a + (b + c) && a + b == b + a && (a * b) * c == a * (b * c) &&
                                     a * b == b * a && a * (b + c) == a * b + a * c && a + zero == a &&
                                     a * one == a && a - a == zero && (-a) + a == zero && (a - b) + b == a;
                     if (!ok) ++bad;
                   }
                   return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}},
                                 std::to_string(samples) + " triples");
                 });
}

CheckRecord check_witt_p_times(std::uint32_t p, std::size_t length, std::size_t samples, std::uint64_t seed) {
  const std::string name = "witt: p x = V(F(x)) and tau multiplicative, " + config_tag(p, length);
  return guarded(name, replay_entry("witt_p_times", {{"p", p}, {"length", length}, {"samples", samples}, {"seed", seed}}),
                 [&] {
                   const WittCtx ctx(p, length);
                   const std::uint32_t d = std::gcd(2U, p) == 1 ? 2U : 3U;
                   const TowerCtx tctx(p, 1, d, TowerMode::Free);
                   Rng rng(seed);
                   auto residue = [&] { return reduce_mod_p(random_tower(tctx, rng, 2, 3, 3)); };
                   std::size_t bad = 0;
                   for (std::size_t s = 0; s < samples; ++s) {
                     std::vector<ResidueElem> comps;
                     for (std::size_t i = 0; i < length; ++i) comps.push_back(residue());
                     const WittVec<ResidueElem> x(ctx, comps);
                     const ResidueElem a = residue(), b = residue();
                     const bool ok = repeated_sum(x, p) == verschiebung(witt_frobenius(x)) &&
                                     teichmuller(ctx, a) * teichmuller(ctx, b) == teichmuller(ctx, a * b) &&
                                     repeated_sum(teichmuller(ctx, a), p) == p_power_teichmuller(ctx, a, 1);
                     if (!ok) ++bad;
                   }
                   return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}},
                                 std::to_string(samples) + " samples over R/pR");
                 });
}

CheckRecord check_fontaine_ring(std::uint32_t p, std::uint32_t degree, std::size_t depth, std::size_t samples,
                                std::uint64_t seed) {
  const std::string name = "fontaine: ring operations, Frobenius and theta, p=" + std::to_string(p);
  return guarded(name,
                 replay_entry("fontaine_ring",
                             {{"p", p}, {"degree", degree}, {"depth", depth}, {"samples", samples}, {"seed", seed}}),
                 [&] {
                   const TowerCtx family(p, 0, degree, TowerMode::Quotient);
                   Rng rng(seed);
                   std::size_t bad = 0;
                   const Generators g = generators(family, depth);
                   for (std::uint64_t K = 1; K <= depth + 1; ++K) {
                     if (!(theta(g.P, K) == make_padic(TowerElem::constant(family, p), K))) ++bad;
                   }
                   for (std::size_t s = 0; s < samples; ++s) {
                     const FontaineElem a = random_fontaine(family, depth, ClosureMode::PlainR, rng);
                     const FontaineElem b = random_fontaine(family, depth, ClosureMode::PlainR, rng);
                     bool ok = check_compat(a) == Truth::True && check_compat(a + b) == Truth::True &&
                               check_compat(a * b) == Truth::True && check_compat(a - b) == Truth::True &&
                               frobenius(proot(a)).same_representatives(a.truncated(depth - 1)) &&
                               equal(a * b, b * a) == Truth::True &&
                               equal(a.with_mode(ClosureMode::ClosureCerts), a.with_mode(ClosureMode::ClosureCerts)) ==
                                   Truth::True;
                     // theta at precision K raises r_{K-1} to the p^{K-1}; keep that small.
                     for (std::uint64_t K = 1; K <= depth + 1 && upow(p, K - 1) <= 8 && ok; ++K) {
                       ok = theta(a * b, K) == theta(a, K) * theta(b, K);
                     }
                     if (!ok) ++bad;
                   }
                   return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}},
                                 std::to_string(samples) + " pairs at depth " + std::to_string(depth));
                 });
}

CheckRecord check_u_map_homomorphism(std::uint32_t p, std::uint32_t degree, std::size_t length, std::size_t depth,
                                     std::size_t samples, std::uint64_t seed) {
  const std::string name = "witt: u is additive and multiplicative, " + config_tag(p, length);
  return guarded(name,
                 replay_entry("u_map_homomorphism", {{"p", p},
                                                    {"degree", degree},
                                                    {"length", length},
                                                    {"depth", depth},
                                                    {"samples", samples},
                                                    {"seed", seed}}),
                 [&] {
                   const TowerCtx family(p, 0, degree, TowerMode::Quotient);
                   const WittCtx ctx(p, length);
                   Rng rng(seed);
                   const ClosureMode mode = ClosureMode::PlainR;
                   auto rand_witt = [&] {
                     std::vector<FontaineElem> c;
                     for (std::size_t i = 0; i < length; ++i) c.push_back(random_fontaine(family, depth, mode, rng));
                     return FontaineWitt(ctx, c);
                   };
                   std::size_t bad = 0;
                   const Generators g = generators(family, depth, mode);
                   const FontaineWitt tp = teichmuller(ctx, g.P);
                   const FontaineWitt pmp = P_minus_p(ctx, family, depth, mode);
                   const std::uint64_t K0 = max_u_precision(pmp);
                   if (!(u_map(tp, K0) == make_padic(TowerElem::constant(family, p), K0))) ++bad;
                   if (!u_map(pmp, K0).is_zero()) ++bad;
                   if (!u_map(FontaineWitt::zero(ctx, g.P), K0).is_zero()) ++bad;
                   std::uint64_t K = 0;
                   for (std::size_t s = 0; s < samples; ++s) {
                     const FontaineWitt x = rand_witt(), y = rand_witt();
                     const FontaineWitt sum = x + y, prod = x * y;
                     K = std::min({max_u_precision(x), max_u_precision(y), max_u_precision(sum),
                                   max_u_precision(prod)});
                     const PadicValue ux = u_map(x, K), uy = u_map(y, K);
                     if (!(u_map(sum, K) == ux + uy) || !(u_map(prod, K) == ux * uy)) ++bad;
                   }
                   return record(name, pass_if(bad == 0), {{"samples", samples}, {"failures", bad}, {"K", K}},
                                 std::to_string(samples) + " pairs mod p^" + std::to_string(K));
                 });
}

CheckRecord check_theorem_roundtrip(std::uint32_t p, std::uint32_t degree, std::size_t length, std::size_t depth,
                                    std::size_t samples, std::uint64_t seed, ClosureMode mode) {
  const std::string name = "witt: (P - p) w roundtrip, " + config_tag(p, length) + " depth " + std::to_string(depth);
  return guarded(name,
                 replay_entry("theorem_roundtrip", {{"p", p},
                                                   {"degree", degree},
                                                   {"length", length},
                                                   {"depth", depth},
                                                   {"samples", samples},
                                                   {"seed", seed},
                                                   {"mode", to_string(mode)}}),
                 [&] {
                   const TowerCtx family(p, 0, degree, TowerMode::Quotient);
                   const WittCtx ctx(p, length);
                   Rng rng(seed);
                   const FontaineWitt pmp = P_minus_p(ctx, family, depth, mode);
                   std::size_t bad = 0, undetermined = 0;
                   std::size_t min_quotient_depth = depth;
                   std::uint64_t K = 0;
                   json first;
                   for (std::size_t s = 0; s < samples; ++s) {
                     std::vector<FontaineElem> c;
                     for (std::size_t i = 0; i < length; ++i) {
                       // The first sample is w = 0.
                       c.push_back(s == 0 ? FontaineElem::constant(family, mode, depth, 0)
                                          : random_fontaine(family, depth, mode, rng));
                     }
                     const FontaineWitt w(ctx, c);
                     const FontaineWitt x = pmp * w;
                     K = max_u_precision(x);
                     if (!u_map(x, K).is_zero()) {
                       ++bad;
                       continue;
                     }
                     const WittDivisionResult r = divide_by_P_minus_p(x, K);
                     if (r.status == WittDivisionResult::Status::Undetermined) {
                       ++undetermined;
                     } else if (!r.ok() || r.verified != Truth::True) {
                       ++bad;
                     } else {
                       min_quotient_depth = std::min(min_quotient_depth, r.quotient_depth);
                       if (s == 0 && !r.quotient->exact_zero()) ++bad;
                       if (s == 1) first = {{"x", serial::witt_to_json(x)}, {"w", serial::witt_to_json(*r.quotient)}};
                     }
                   }
                   const CheckStatus st = bad > 0 ? CheckStatus::Fail
                                          : undetermined > 0 ? CheckStatus::Undetermined
                                                             : CheckStatus::Pass;
                   json d{{"samples", samples},
                          {"failures", bad},
                          {"undetermined", undetermined},
                          {"K", K},
                          {"min_quotient_depth", min_quotient_depth},
                          {"mode", to_string(mode)}};
                   if (!first.is_null()) d["example"] = first;
                   return record(name, st, d,
                                 std::to_string(samples) + " samples, u(x) = 0 mod p^" + std::to_string(K) +
                                     ", quotient depth >= " + std::to_string(min_quotient_depth));
                 });
}

CheckRecord check_tau_eta_negative(std::uint32_t p, std::uint32_t degree, std::size_t depth, std::size_t length) {
  const std::string name = "witt: tau(eta) over R does not divide by P - p";
  return guarded(name,
                 replay_entry("tau_eta_negative", {{"p", p}, {"degree", degree}, {"depth", depth}, {"length", length}}),
                 [&] {
                   const TowerCtx family(p, 0, degree, TowerMode::Quotient);
                   const WittCtx ctx(p, length);
                   const FontaineWitt x = teichmuller(ctx, example_eta(family, depth, ClosureMode::PlainR));
                   // τ is not additive, so u(τ(η)) = lim r_n^{p^n} only vanishes mod p.
                   const bool u_zero = u_map(x, 1).is_zero();
                   json d{{"u_zero_mod_p", u_zero}};
                   if (max_u_precision(x) >= 2) d["u_zero_mod_p2"] = u_map(x, 2).is_zero();
                   const WittDivisionResult r = divide_by_P_minus_p(x, 1);
                   d["status"] = to_string(r.status);
                   d["step"] = r.step;
                   std::size_t index = 0;
                   if (r.failure) {
                     index = r.failure->index;
                     d["component"] = index;
                     if (r.failure->offending) d["offending"] = serial::monomial_to_json(*r.failure->offending);
                   }
                   const bool ok = u_zero && r.status == WittDivisionResult::Status::NotDivisible && r.step == 0 &&
                                   index == 1;
                   return record(name, pass_if(ok), d,
                                 std::string(to_string(r.status)) + " at step " + std::to_string(r.step) +
                                     ", component " + std::to_string(index));
                 });
}

CheckRecord check_eta_tilde_roundtrip(std::uint32_t p, std::uint32_t degree, std::size_t depth, std::size_t length) {
  const std::string name = "witt: tau(P)^d + tau(X)^d + tau(Y)^d divides by P - p over C(R), " + config_tag(p, length);
  return guarded(name,
                 replay_entry("eta_tilde_roundtrip", {{"p", p}, {"degree", degree}, {"depth", depth}, {"length", length}}),
                 [&] {
                   const TowerCtx family(p, 0, degree, TowerMode::Quotient);
                   const WittCtx ctx(p, length);
                   const Generators g = generators(family, depth, ClosureMode::ClosureCerts);
                   const FontaineWitt x = teichmuller(ctx, g.P.pow(degree)) + teichmuller(ctx, g.X.pow(degree)) +
                                          teichmuller(ctx, g.Y.pow(degree));
                   const std::uint64_t K = max_u_precision(x);
                   const bool u_zero = u_map(x, K).is_zero();
                   const WittDivisionResult r = divide_by_P_minus_p(x, K);
                   json d{{"K", K}, {"u_zero", u_zero}, {"status", to_string(r.status)}, {"verified", to_string(r.verified)}};
                   const CheckStatus st = !u_zero ? CheckStatus::Fail
                                          : r.ok() ? CheckStatus::Pass
                                          : r.status == WittDivisionResult::Status::Undetermined
                                              ? CheckStatus::Undetermined
                                              : CheckStatus::Fail;
                   return record(name, st, d,
                                 "u = 0 mod p^" + std::to_string(K) + ", division " + to_string(r.status));
                 });
}

Report run_property_suites(const Config& cfg, const PropertyOptions& opts) {
  cfg.validate();
  Report report{cfg, "properties", {}};
  const std::uint64_t s = cfg.seed;
  auto& c = report.checks;
  c.push_back(check_binomial_lemma(2, 5));
  c.push_back(check_binomial_lemma(3, 5));
  c.push_back(check_binomial_lemma(5, 4));
  c.push_back(check_valuation_additive(500, s));
  c.push_back(check_closure_bound(2, 100, s + 1));
  c.push_back(check_kernel_lemma(5, 3, 2));
  c.push_back(check_kernel_lemma(2, 3, 3));
  for (auto [p, n] : {std::pair<std::uint32_t, std::size_t>{2, 3}, {3, 3}, {5, 2}}) {
    c.push_back(check_witt_ghost(p, n, 200, s + 2, opts.tamper_witt_cache));
    c.push_back(check_witt_additive_order(p, n));
    c.push_back(check_witt_ring_axioms(p, n, 50, s + 3));
    c.push_back(check_witt_p_times(p, n, 10, s + 4));
  }
  c.push_back(check_fontaine_ring(5, 3, 3, 20, s + 5));
  c.push_back(check_fontaine_ring(2, 3, 4, 20, s + 5));
  c.push_back(check_u_map_homomorphism(5, 3, 2, 3, 10, s + 6));
  c.push_back(check_u_map_homomorphism(2, 3, 3, 4, 10, s + 6));
  c.push_back(check_theorem_roundtrip(5, 3, 2, 4, 20, s + 7));
  c.push_back(check_theorem_roundtrip(2, 3, 3, 6, 20, s + 7));
  c.push_back(check_theorem_roundtrip(3, 2, 3, 6, 20, s + 7));
  c.push_back(check_tau_eta_negative(5, 3, 3, 2));
  c.push_back(check_eta_tilde_roundtrip(2, 3, 5, 3));
  c.push_back(check_eta_tilde_roundtrip(3, 2, 3, 2));
  return report;
}

// ---- expression evaluation -------------------------------------------------

Report run_eval(const std::string& text, const EvalOptions& opts) {
  Config cfg;
  cfg.p = opts.expr.p;
  cfg.degree = opts.expr.degree;
  cfg.depth = opts.expr.fontaine_depth;
  cfg.m_max = opts.m_max;
  cfg.validate();
  Report report{cfg, "eval", {}};
  const ParsedExpr parsed = parse_expr(text, opts.expr);
  json pd{{"kind", "parsed"},
          {"expression", text},
          {"options",
           {{"p", opts.expr.p},
            {"degree", opts.expr.degree},
            {"tower_mode", opts.expr.tower_mode == TowerMode::Free ? "free" : "quotient"},
            {"depth", opts.expr.fontaine_depth},
            {"closure_mode", to_string(opts.expr.closure_mode)}}}};
  if (auto* l = std::get_if<LocalElem>(&parsed)) {
    pd["element"] = serial::local_to_json(*l);
    report.checks.push_back(record("parse", CheckStatus::Pass, pd,
                                   l->to_string() + " in " + l->ctx().to_string()));
    if (opts.check_closure) {
      const std::string name = "closure membership";
      report.checks.push_back(guarded(name, nullptr, [&] {
        json d{{"kind", "membership"}, {"claim", serial::local_to_json(*l)}};
        if (structural_nonmember(*l)) {
          d["structural"] = true;
          return record(name, CheckStatus::Fail, d,
                        "not in C(R): the numerator is not nilpotent modulo Pi");
        }
        MembershipResult r = membership(*l, opts.m_max);
        if (auto* cert = std::get_if<ClosureCert>(&r)) {
          d["m"] = cert->m;
          d["certificates"] = json::array({serial::cert_to_json(*cert)});
          return record(name, pass_if(verify_certificate(*cert)), d,
                        "in C(R): power p^" + std::to_string(cert->m) + " is integral");
        }
        if (auto* b = std::get_if<BudgetExceeded>(&r)) {
          d["budget_exceeded"] = true;
          return record(name, CheckStatus::Undetermined, d,
                        "term budget exceeded at m = " + std::to_string(b->reached_m));
        }
        return record(name, CheckStatus::Undetermined, d,
                      "no certificate up to m = " + std::to_string(opts.m_max));
      }));
    }
    return report;
  }
  const FontaineElem& e = std::get<FontaineElem>(parsed);
  pd["element"] = serial::fontaine_to_json(e);
  report.checks.push_back(record("parse", CheckStatus::Pass, pd, e.to_string()));
  if (opts.check_closure) {
    const ClosureSettings settings{opts.m_max, kDefaultTermBudget};
    const json ej = serial::fontaine_to_json(e);
    report.checks.push_back(guarded("compatible", nullptr, [&] {
      const Truth t = check_compat(e, settings);
      return record("compatible", from_truth(t), {{"kind", "compat"}, {"element", ej}}, to_string(t));
    }));
    report.checks.push_back(guarded("divisible by P", nullptr, [&] {
      const DivideByPResult r = divide_by_P(e, settings);
      json d{{"status", to_string(r.status)}, {"index", r.index}};
      json congr = json::array();
      for (const auto& c : r.congruences) congr.push_back(serial::congruence_to_json(c));
      json certs = json::array();
      for (const auto& c : r.factor_certs) certs.push_back(serial::cert_to_json(c));
      d["congruences"] = congr;
      d["certificates"] = certs;
      if (r.offending) d["offending"] = serial::monomial_to_json(*r.offending);
      if (r.ok()) {
        d["kind"] = "closure_divide";
        d["element"] = ej;
        d["quotient"] = serial::fontaine_to_json(*r.quotient);
        const Generators g = generators(e.family(), r.quotient->depth(), e.mode());
        const Truth t = equal(g.P * *r.quotient, e, settings);
        return record("divisible by P", from_truth(t), d, "quotient " + r.quotient->to_string());
      }
      return record("divisible by P",
                    r.status == DivideByPResult::Status::Undetermined ? CheckStatus::Undetermined : CheckStatus::Fail,
                    d, std::string(to_string(r.status)) + " at component " + std::to_string(r.index));
    }));
  }
  return report;
}

// ---- revalidation ----------------------------------------------------------

namespace {

CheckRecord replay(const json& entry) {
  const std::string check = entry.at("check").get<std::string>();
  const json& a = entry.at("args");
  auto u32 = [&](const char* k) { return a.at(k).get<std::uint32_t>(); };
  auto sz = [&](const char* k) { return a.at(k).get<std::size_t>(); };
  auto u64 = [&](const char* k) { return a.at(k).get<std::uint64_t>(); };
  if (check == "binomial_lemma") return check_binomial_lemma(u32("p"), u32("max_m"));
  if (check == "valuation_additive") return check_valuation_additive(sz("samples"), u64("seed"));
  if (check == "closure_bound") return check_closure_bound(u32("p"), sz("pairs"), u64("seed"));
  if (check == "kernel_lemma") return check_kernel_lemma(u32("p"), u32("degree"), u32("max_level"));
  if (check == "witt_ghost") {
    return check_witt_ghost(u32("p"), sz("length"), sz("samples"), u64("seed"), a.at("tampered").get<bool>());
  }
  if (check == "witt_additive_order") return check_witt_additive_order(u32("p"), sz("length"));
  if (check == "witt_ring_axioms") return check_witt_ring_axioms(u32("p"), sz("length"), sz("samples"), u64("seed"));
  if (check == "witt_p_times") return check_witt_p_times(u32("p"), sz("length"), sz("samples"), u64("seed"));
  if (check == "fontaine_ring") {
    return check_fontaine_ring(u32("p"), u32("degree"), sz("depth"), sz("samples"), u64("seed"));
  }
  if (check == "u_map_homomorphism") {
    return check_u_map_homomorphism(u32("p"), u32("degree"), sz("length"), sz("depth"), sz("samples"), u64("seed"));
  }
  if (check == "theorem_roundtrip") {
    const ClosureMode mode =
        a.at("mode").get<std::string>() == "plain" ? ClosureMode::PlainR : ClosureMode::ClosureCerts;
    return check_theorem_roundtrip(u32("p"), u32("degree"), sz("length"), sz("depth"), sz("samples"), u64("seed"),
                                   mode);
  }
  if (check == "tau_eta_negative") return check_tau_eta_negative(u32("p"), u32("degree"), sz("depth"), sz("length"));
  if (check == "eta_tilde_roundtrip") {
    return check_eta_tilde_roundtrip(u32("p"), u32("degree"), sz("depth"), sz("length"));
  }
  throw DomainError("unknown check '" + check + "'");
}

// Recomputes a congruence from its data: (lhs - rhs) / modulus must equal
// the certified element, and the certificate must verify.
bool congruence_holds(const json& c) {
  if (c.at("result").get<std::string>() != "true" || !c.contains("cert")) return false;
  const LocalElem lhs = serial::local_from_json(c.at("lhs"));
  const LocalElem rhs = serial::local_from_json(c.at("rhs"));
  const std::uint32_t mod_level = c.at("modulus").at("level").get<std::uint32_t>();
  const std::uint64_t mod_exp = c.at("modulus").at("pi_exp").get<std::uint64_t>();
  const std::uint32_t level = std::max({lhs.level(), rhs.level(), mod_level});
  const LocalElem diff =
      (lhs.at_level(level) - rhs.at_level(level)).divided_by_pi(mod_exp * upow(lhs.ctx().p(), level - mod_level));
  const ClosureCert cert = serial::cert_from_json(c.at("cert"));
  return diff == cert.elem && verify_certificate(cert);
}

// Returns a problem description, or an empty string if the record holds.
std::string revalidate_record(const json& d) {
  if (d.contains("certificates")) {
    for (const auto& c : d.at("certificates")) {
      if (!verify_certificate(serial::cert_from_json(c))) return "certificate does not verify";
    }
  }
  if (d.contains("replay")) {
    const CheckRecord again = replay(d.at("replay"));
    return again.status == CheckStatus::Pass ? "" : "replay gave " + std::string(to_string(again.status));
  }
  const std::string kind = d.value("kind", "");
  if (kind == "parsed") {
    const json& o = d.at("options");
    ExprOptions opts;
    opts.p = o.at("p").get<std::uint32_t>();
    opts.degree = o.at("degree").get<std::uint32_t>();
    opts.tower_mode = o.at("tower_mode").get<std::string>() == "free" ? TowerMode::Free : TowerMode::Quotient;
    opts.fontaine_depth = o.at("depth").get<std::size_t>();
    opts.closure_mode = o.at("closure_mode").get<std::string>() == "plain" ? ClosureMode::PlainR
                                                                           : ClosureMode::ClosureCerts;
    const ParsedExpr e = parse_expr(d.at("expression").get<std::string>(), opts);
    if (auto* l = std::get_if<LocalElem>(&e)) {
      return *l == serial::local_from_json(d.at("element")) ? "" : "re-parsed element differs";
    }
    return std::get<FontaineElem>(e).same_representatives(serial::fontaine_from_json(d.at("element")))
               ? ""
               : "re-parsed element differs";
  }
  if (kind == "compat") {
    return check_compat(serial::fontaine_from_json(d.at("element"))) == Truth::True ? "" : "not compatible";
  }
  if (kind == "bar_u_zero") {
    return bar_u(serial::fontaine_from_json(d.at("element"))).is_zero() ? "" : "r_0 is not zero";
  }
  if (kind == "plain_not_divisible") {
    const FontaineElem e = serial::fontaine_from_json(d.at("element"));
    const std::size_t index = d.at("index").get<std::size_t>();
    const auto& neg = d.at("negative_certificate");
    const ResidueElem h = reduce_mod_p(serial::tower_from_json(neg.at("h")));
    const ResidueElem g = reduce_mod_p(serial::tower_from_json(neg.at("g")));
    if (!(reduce_mod_pi(e.component(index).at_level(static_cast<std::uint32_t>(index)).num()) == g)) {
      return "stored g is not r_index mod Pi";
    }
    if (poly_divides(h, g)) return "h divides g";
    const TowerElem r = e.component(index).at_level(static_cast<std::uint32_t>(index)).num();
    auto q = pi_divide(r, 1);
    auto* nd = std::get_if<NotDivisible>(&q);
    if (!nd) return "component is divisible by Pi";
    if (d.contains("offending") && !(nd->offending == serial::monomial_from_json(d.at("offending")))) {
      return "offending monomial differs";
    }
    return "";
  }
  if (kind == "membership") {
    const LocalElem claim = serial::local_from_json(d.at("claim"));
    for (const auto& c : d.at("certificates")) {
      if (!(serial::cert_from_json(c).elem == claim)) return "certificate is for a different element";
    }
    return "";
  }
  if (kind == "closure_divide") {
    for (const auto& c : d.at("congruences")) {
      if (!congruence_holds(c)) return "congruence '" + c.at("label").get<std::string>() + "' does not hold";
    }
    const FontaineElem e = serial::fontaine_from_json(d.at("element"));
    const FontaineElem t = serial::fontaine_from_json(d.at("quotient"));
    const Generators g = generators(e.family(), t.depth(), e.mode());
    return equal(g.P * t, e) == Truth::True ? "" : "P * t differs from the element";
  }
  if (kind == "witt_roundtrip") {
    const FontaineWitt x = serial::witt_from_json(d.at("x"));
    const FontaineWitt w = serial::witt_from_json(d.at("w"));
    const std::uint64_t K = d.at("K").get<std::uint64_t>();
    if (!u_map(x, K).is_zero()) return "u(x) is not zero";
    std::size_t depth = x[0].depth();
    for (const auto& c : x.components()) depth = std::min(depth, c.depth());
    const FontaineWitt pmp = P_minus_p(x.ctx(), x[0].family(), depth, x[0].mode());
    return witt_equal(pmp * w, x) == Truth::True ? "" : "(P - p) w differs from x";
  }
  return "no revalidation data";
}

}  // namespace

RevalidationResult revalidate(const std::string& report_json) {
  RevalidationResult out;
  json root;
  try {
    root = json::parse(report_json);
  } catch (const json::parse_error& e) {
    out.problems.push_back(std::string("not valid JSON: ") + e.what());
    return out;
  }
  for (const auto& rec : root.at("checks")) {
    ++out.records;
    if (rec.at("status").get<std::string>() != "pass") continue;
    const std::string name = rec.at("name").get<std::string>();
    try {
      const std::string problem = revalidate_record(rec.at("details"));
      if (problem.empty()) {
        ++out.revalidated;
      } else {
        out.problems.push_back(name + ": " + problem);
      }
    } catch (const std::exception& e) {
      out.problems.push_back(name + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rootclose

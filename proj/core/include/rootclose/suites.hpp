#pragma once

// The worked example, the property checks and the random generators they use.

#include <cstdint>
#include <random>

#include "rootclose/expr.hpp"
#include "rootclose/fontaine.hpp"
#include "rootclose/report.hpp"
#include "rootclose/tower.hpp"
#include "rootclose/witt.hpp"

namespace rootclose {

using Rng = std::mt19937_64;

/// Sum of up to `max_terms` terms c Π^a X^b Y^c with |c| <= coeff_bound and
/// exponents below `max_exp`, normalized in ctx.
TowerElem random_tower(const TowerCtx& ctx, Rng& rng, std::size_t max_terms, std::uint64_t max_exp,
                       std::int64_t coeff_bound);

/// Random F_p-combination of products of at most two factors taken from
/// P, X, Y and their p-th roots.
FontaineElem random_fontaine(const TowerCtx& family, std::size_t depth, ClosureMode mode, Rng& rng);

WittVec<mpz_class> random_int_witt(const WittCtx& ctx, Rng& rng, std::int64_t bound);
WittVec<Fp> random_fp_witt(const WittCtx& ctx, Rng& rng);

/// P^d + X^d + Y^d.
FontaineElem example_eta(const TowerCtx& family, std::size_t depth, ClosureMode mode);

/// E1 to E6 for the configured prime, degree and depth. Requires p > 3.
Report run_example_suite(const Config& cfg);

struct PropertyOptions {
  bool tamper_witt_cache = false;  // negative control for the ghost oracle
};

Report run_property_suites(const Config& cfg, const PropertyOptions& opts = {});

struct EvalOptions {
  ExprOptions expr;
  bool check_closure = false;
  std::uint32_t m_max = 5;
};

/// Parses an expression and reports it; with check_closure, also decides
/// membership of a tower element in C(R), or runs compat / bar_u /
/// divide_by_P on a Fontaine element.
Report run_eval(const std::string& text, const EvalOptions& opts);

// Individual checks. Each is deterministic given its arguments and records
// them so that revalidate() can replay it.
CheckRecord check_binomial_lemma(std::uint32_t p, std::uint32_t max_m);
CheckRecord check_valuation_additive(std::size_t samples, std::uint64_t seed);
CheckRecord check_closure_bound(std::uint32_t p, std::size_t pairs, std::uint64_t seed);
CheckRecord check_kernel_lemma(std::uint32_t p, std::uint32_t degree, std::uint32_t max_level);
CheckRecord check_witt_ghost(std::uint32_t p, std::size_t length, std::size_t samples, std::uint64_t seed,
                             bool tampered = false);
CheckRecord check_witt_additive_order(std::uint32_t p, std::size_t length);
CheckRecord check_witt_ring_axioms(std::uint32_t p, std::size_t length, std::size_t samples,
                                   std::uint64_t seed);
CheckRecord check_witt_p_times(std::uint32_t p, std::size_t length, std::size_t samples, std::uint64_t seed);
CheckRecord check_fontaine_ring(std::uint32_t p, std::uint32_t degree, std::size_t depth, std::size_t samples,
                                std::uint64_t seed);
CheckRecord check_u_map_homomorphism(std::uint32_t p, std::uint32_t degree, std::size_t length,
                                     std::size_t depth, std::size_t samples, std::uint64_t seed);
CheckRecord check_theorem_roundtrip(std::uint32_t p, std::uint32_t degree, std::size_t length,
                                    std::size_t depth, std::size_t samples, std::uint64_t seed,
                                    ClosureMode mode = ClosureMode::ClosureCerts);
/// τ(η) over PlainR components: division by P - p must stop at the first
/// approximation step because η is not divisible by P in E(R).
CheckRecord check_tau_eta_negative(std::uint32_t p, std::uint32_t degree, std::size_t depth,
                                   std::size_t length);
/// η~ = τ(P)^d + τ(X)^d + τ(Y)^d lies in the kernel of u at every precision;
/// it must divide by P - p over closure-certified components.
CheckRecord check_eta_tilde_roundtrip(std::uint32_t p, std::uint32_t degree, std::size_t depth,
                                      std::size_t length);

}  // namespace rootclose

#include "serialize.hpp"

#include "rootclose/errors.hpp"

namespace rootclose::serial {

namespace {

const char* mode_name(TowerMode m) { return m == TowerMode::Free ? "free" : "quotient"; }

TowerMode mode_from(const std::string& s) {
  if (s == "free") return TowerMode::Free;
  if (s == "quotient") return TowerMode::Quotient;
  throw DomainError("unknown tower mode '" + s + "'");
}

ClosureMode closure_mode_from(const std::string& s) {
  if (s == "plain") return ClosureMode::PlainR;
  if (s == "closure") return ClosureMode::ClosureCerts;
  throw DomainError("unknown closure mode '" + s + "'");
}

}  // namespace

json ctx_to_json(const TowerCtx& ctx) {
  return {{"p", ctx.p()}, {"level", ctx.level()}, {"degree", ctx.degree()}, {"mode", mode_name(ctx.mode())}};
}

TowerCtx ctx_from_json(const json& j) {
  return TowerCtx(j.at("p").get<std::uint32_t>(), j.at("level").get<std::uint32_t>(),
                  j.at("degree").get<std::uint32_t>(), mode_from(j.at("mode").get<std::string>()));
}

json monomial_to_json(const Monomial& m) { return json::array({m.pi, m.x, m.y}); }

Monomial monomial_from_json(const json& j) {
  return Monomial{j.at(0).get<std::uint64_t>(), j.at(1).get<std::uint64_t>(), j.at(2).get<std::uint64_t>()};
}

json terms_to_json(const TowerElem& e) {
  json out = json::array();
  for (const auto& t : e.terms()) out.push_back({t.mono.pi, t.mono.x, t.mono.y, t.coeff.get_str()});
  return out;
}

TowerElem terms_from_json(const TowerCtx& ctx, const json& terms) {
  // Re-normalize rather than trusting the input.
  std::vector<Term> raw;
  for (const auto& t : terms) {
    raw.push_back(Term{Monomial{t.at(0).get<std::uint64_t>(), t.at(1).get<std::uint64_t>(),
                                t.at(2).get<std::uint64_t>()},
                       mpz_class(t.at(3).get<std::string>())});
  }
  return normalize(raw, ctx);
}

json tower_to_json(const TowerElem& e) {
  json j = ctx_to_json(e.ctx());
  j["terms"] = terms_to_json(e);
  return j;
}

TowerElem tower_from_json(const json& j) { return terms_from_json(ctx_from_json(j), j.at("terms")); }

json local_to_json(const LocalElem& e) {
  json j = tower_to_json(e.num());
  j["denom_exp"] = e.denom_exp();
  return j;
}

LocalElem local_from_json(const json& j) {
  return LocalElem(tower_from_json(j), j.at("denom_exp").get<std::uint64_t>());
}

json cert_to_json(const ClosureCert& c) {
  json j = ctx_to_json(c.elem.ctx());
  j["m"] = c.m;
  j["denom_exp"] = c.elem.denom_exp();
  j["num_terms"] = terms_to_json(c.elem.num());
  j["witness_terms"] = terms_to_json(c.witness);
  return j;
}

ClosureCert cert_from_json(const json& j) {
  const TowerCtx ctx = ctx_from_json(j);
  return ClosureCert{LocalElem(terms_from_json(ctx, j.at("num_terms")), j.at("denom_exp").get<std::uint64_t>()),
                     j.at("m").get<std::uint32_t>(), terms_from_json(ctx, j.at("witness_terms"))};
}

json congruence_to_json(const CongruenceCheck& c) {
  json j{{"label", c.label},
         {"lhs", local_to_json(c.lhs)},
         {"rhs", local_to_json(c.rhs)},
         {"modulus", {{"level", c.modulus.level}, {"pi_exp", c.modulus.exp}}},
         {"result", to_string(c.result)},
         {"structural", c.structural}};
  if (c.cert) j["cert"] = cert_to_json(*c.cert);
  return j;
}

json fontaine_to_json(const FontaineElem& e) {
  json comps = json::array();
  for (const auto& c : e.components()) comps.push_back(local_to_json(c));
  json j = ctx_to_json(e.family());
  j.erase("level");
  j["closure_mode"] = to_string(e.mode());
  j["components"] = std::move(comps);
  return j;
}

FontaineElem fontaine_from_json(const json& j) {
  const TowerCtx family(j.at("p").get<std::uint32_t>(), 0, j.at("degree").get<std::uint32_t>(),
                        mode_from(j.at("mode").get<std::string>()));
  std::vector<LocalElem> comps;
  for (const auto& c : j.at("components")) comps.push_back(local_from_json(c));
  return FontaineElem(family, closure_mode_from(j.at("closure_mode").get<std::string>()), std::move(comps));
}

json witt_to_json(const FontaineWitt& w) {
  json comps = json::array();
  for (const auto& c : w.components()) comps.push_back(fontaine_to_json(c));
  return {{"p", w.ctx().p()}, {"length", w.length()}, {"components", std::move(comps)}};
}

FontaineWitt witt_from_json(const json& j) {
  WittCtx ctx(j.at("p").get<std::uint32_t>(), j.at("length").get<std::size_t>());
  std::vector<FontaineElem> comps;
  for (const auto& c : j.at("components")) comps.push_back(fontaine_from_json(c));
  return FontaineWitt(ctx, std::move(comps));
}

}  // namespace rootclose::serial

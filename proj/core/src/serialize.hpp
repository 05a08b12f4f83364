#pragma once

// JSON encodings of tower elements and certificates. Private to the library.

#include <json.hpp>

#include "rootclose/closure.hpp"
#include "rootclose/fontaine.hpp"
#include "rootclose/tower.hpp"
#include "rootclose/witt.hpp"

namespace rootclose::serial {

using json = nlohmann::json;

json ctx_to_json(const TowerCtx& ctx);
TowerCtx ctx_from_json(const json& j);

json monomial_to_json(const Monomial& m);
Monomial monomial_from_json(const json& j);

/// [[a, b, c, "coeff"], ...] in ascending monomial order.
json terms_to_json(const TowerElem& e);
TowerElem terms_from_json(const TowerCtx& ctx, const json& terms);

json tower_to_json(const TowerElem& e);
TowerElem tower_from_json(const json& j);

json local_to_json(const LocalElem& e);
LocalElem local_from_json(const json& j);

/// {"m", "denom_exp", "witness_terms", "num_terms", "p", "level", "degree", "mode"}
json cert_to_json(const ClosureCert& c);
ClosureCert cert_from_json(const json& j);

json congruence_to_json(const CongruenceCheck& c);

json fontaine_to_json(const FontaineElem& e);
FontaineElem fontaine_from_json(const json& j);

json witt_to_json(const FontaineWitt& w);
FontaineWitt witt_from_json(const json& j);

}  // namespace rootclose::serial

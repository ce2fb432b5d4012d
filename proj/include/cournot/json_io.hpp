#pragma once

#include <string>

#include <json.hpp>

#include "cournot/certify.hpp"
#include "cournot/instances.hpp"
#include "cournot/model.hpp"
#include "cournot/shock.hpp"
#include "cournot/solver.hpp"

namespace cournot {

// Game schema:
//   {"markets":[{"id":"m1","p":50.0,"r":0.0}],
//    "firms":[{"id":"a","markets":["m1","m2"],
//              "cost":{"kind":"quadratic","a":0.5,"b":0.0,"cap":null}}]}
// A missing or null "cap" means unbounded. A market may carry
// "anchors":[{"q":..,"v":..,"s":..},...] instead of "p"/"r" for a concave
// price curve. Shock schema: {"m1":5.0}.
nlohmann::json game_to_json(const Game& game);
Game game_from_json(const nlohmann::json& j);

nlohmann::json shock_to_json(const PriceShock& shock);
PriceShock shock_from_json(const nlohmann::json& j);

// Profiles serialize as nested maps, firm id -> market id -> quantity, with
// every accessible entry present.
nlohmann::json profile_to_json(const Game& game, const QuantityProfile& profile);
QuantityProfile profile_from_json(const Game& game, const nlohmann::json& j);

nlohmann::json result_to_json(const Game& game, const EquilibriumResult& result);
nlohmann::json gamma_to_json(const Gamma& g);
nlohmann::json report_to_json(const Game& game, const ShockReport& report);
nlohmann::json certificate_to_json(const CertificateReport& report);

// Shock, stated profiles and expected ratios of a named instance.
nlohmann::json instance_sidecar_json(const NamedInstance& inst);

RandomGameConfig config_from_json(const nlohmann::json& j);

// Stable fingerprint of a game's canonical JSON form.
std::string game_digest(const Game& game);

// Replayable record of a failed sweep check.
std::string failure_artifact_json(const Game& game, const PriceShock& shock,
                                  const std::string& check, int trial);

}  // namespace cournot

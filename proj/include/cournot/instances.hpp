#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cournot/model.hpp"
#include "cournot/shock.hpp"

namespace cournot {

// Closed-form ratio an instance is expected to attain, optionally pinned to a
// specific firm (for the per-firm profit objective).
struct ExpectedGamma {
    Objective objective = Objective::firm_profit;
    double value = 1.0;
    std::optional<std::string> firm;
};

// A concrete game with its shock, the equilibria it is known to have, and the
// ratios those equilibria produce.
struct NamedInstance {
    std::string name;
    Game game;
    PriceShock shock;
    std::optional<QuantityProfile> stated_pre;
    std::optional<QuantityProfile> stated_post;
    std::vector<ExpectedGamma> expected;
};

// Two-market duopoly with a constant-price private market (intercept 50) and
// a shared linear market (200 - q), both firms with cost q^2/2. A +5 shock on
// the private market lowers the monopolist's profit from 3750 to 3721.5.
NamedInstance bulow_example();

// n-firm game attaining the worst-case profit ratio 1 - (n-1)^2 / 4n^2: a
// zero-price private market for firm a (capacity 2/(n+1), zero cost) plus a
// shared market 2 - q where everyone produces for free. Requires n >= 2.
NamedInstance profit_worstcase(int n);

// Variant with firm-a capacity 1 and per-unit competitor cost 1, attaining
// welfare ratio 1 - (n-1)^2 / (4 (n^2+n-1)) and the matching surplus ratio.
// Requires n >= 2.
NamedInstance welfare_worstcase(int n);

// Concave-price counterexample: a tiny shock (1/k and 3/k) drives one firm's
// profit ratio down to 2/k. Uses k^2 competitors; verification-only (the
// solver does not handle concave prices). Requires k >= 4.
NamedInstance concave_small_shock(int k);

// Two-firm concave-price counterexample with profit ratio
// 1 + 5/(4k) - (k + 1/k) / (4 (k - 1/k + 1/2)), approaching 3/4 from above.
// Verification-only. Requires k > 4.
NamedInstance concave_two_firm(int k);

struct RandomGameConfig {
    int n_max = 6;
    int m_max = 4;
    double p_min = 1.0, p_max = 100.0;
    double r_min = 0.1, r_max = 10.0;
    double weight_zero = 0.25, weight_linear = 0.35, weight_quadratic = 0.40;
    double cap_probability = 0.25;
    // Probability that one firm additionally gets a private constant-price
    // market, the shape that triggers profit losses under positive shocks.
    double monopoly_market_probability = 0.5;
};

// Deterministic in (seed, config); always passes the game validation,
// including the boundedness guard for constant-price markets.
Game random_game(std::uint64_t seed, const RandomGameConfig& config = {});

// Per-market shock with delta in [0, p_m], deterministic in (seed, game).
PriceShock random_shock(std::uint64_t seed, const Game& game);

// Arbitrary feasible profile, used for multi-start uniqueness checks.
QuantityProfile random_feasible_profile(std::uint64_t seed, const Game& game);

}  // namespace cournot

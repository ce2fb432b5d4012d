#pragma once

// Helpers shared by the unit and acceptance suites.

#include <cstdint>

#include "cournot/model.hpp"

namespace testutil {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ^ 0x6A09E667F3BCC909ull) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Multiplies every price-dimension parameter (intercepts, slopes, cost
// coefficients) by alpha. Quantities, and therefore capacities, keep their
// units, so equilibria are unchanged and money values scale by alpha.
inline cournot::Game scale_game(const cournot::Game& game, double alpha) {
    std::vector<cournot::Market> markets = game.markets();
    for (auto& m : markets) {
        if (m.concave) {
            std::vector<cournot::PriceAnchor> anchors = m.concave->anchors();
            for (auto& a : anchors) {
                a.v *= alpha;
                a.s *= alpha;
            }
            m.concave = cournot::ConcaveAnchorPrice(std::move(anchors));
        } else {
            m.p *= alpha;
            m.r *= alpha;
        }
    }
    std::vector<cournot::Firm> firms = game.firms();
    for (auto& f : firms) {
        f.cost.a *= alpha;
        f.cost.b *= alpha;
    }
    return cournot::Game(std::move(markets), std::move(firms));
}

inline cournot::PriceShock scale_shock(const cournot::PriceShock& shock, double alpha) {
    cournot::PriceShock out;
    for (const auto& [id, d] : shock.delta) out.delta[id] = d * alpha;
    return out;
}

}  // namespace testutil

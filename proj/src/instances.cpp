#include "cournot/instances.hpp"

#include <algorithm>
#include <cmath>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

std::string competitor_id(int k) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "c%04d", k);
    return buf;
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {  // splitmix64
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }
};

}  // namespace

NamedInstance bulow_example() {
    std::vector<Market> markets{{"m1", 50.0, 0.0, {}}, {"m2", 200.0, 1.0, {}}};
    std::vector<Firm> firms{{"a", {"m1", "m2"}, CostSpec::quadratic(0.5, 0.0)},
                            {"b", {"m2"}, CostSpec::quadratic(0.5, 0.0)}};
    Game game(std::move(markets), std::move(firms));

    QuantityProfile pre(2, 2), post(2, 2);
    pre.set(0, 1, 50.0);
    pre.set(1, 1, 50.0);
    post.set(0, 0, 8.0);
    post.set(0, 1, 47.0);
    post.set(1, 1, 51.0);

    NamedInstance inst{"bulow", std::move(game), PriceShock{{{"m1", 5.0}}}, pre, post, {}};
    inst.expected.push_back({Objective::firm_profit, 3721.5 / 3750.0, {}});
    return inst;
}

NamedInstance profit_worstcase(int n) {
    if (n < 2) throw ValidationError("profit worst case needs at least two firms");
    const double nn = n;
    std::vector<Market> markets{{"m1", 0.0, 0.0, {}}, {"m2", 2.0, 1.0, {}}};
    std::vector<Firm> firms;
    firms.push_back({"a", {"m1", "m2"}, CostSpec::zero_cost(2.0 / (nn + 1.0))});
    for (int k = 1; k < n; ++k)
        firms.push_back({competitor_id(k), {"m2"}, CostSpec::zero_cost()});
    Game game(std::move(markets), std::move(firms));

    QuantityProfile pre(std::size_t(n), 2), post(std::size_t(n), 2);
    for (int i = 0; i < n; ++i) pre.set(std::size_t(i), 1, 2.0 / (nn + 1.0));
    post.set(0, 0, (nn - 1.0) / (nn * (nn + 1.0)));
    post.set(0, 1, 1.0 / nn);
    for (int i = 1; i < n; ++i) post.set(std::size_t(i), 1, (2.0 * nn - 1.0) / (nn * nn));

    NamedInstance inst{"profit-worstcase(n=" + std::to_string(n) + ")", std::move(game),
                       PriceShock{{{"m1", (nn - 1.0) / (nn * nn)}}}, pre, post, {}};
    inst.expected.push_back({Objective::firm_profit, profit_bound(std::size_t(n)), {}});
    return inst;
}

NamedInstance welfare_worstcase(int n) {
    if (n < 2) throw ValidationError("welfare worst case needs at least two firms");
    const double nn = n;
    const double den = 2.0 * (nn * nn + nn - 1.0);
    std::vector<Market> markets{{"m1", 0.0, 0.0, {}}, {"m2", 2.0, 1.0, {}}};
    std::vector<Firm> firms;
    firms.push_back({"a", {"m1", "m2"}, CostSpec::zero_cost(1.0)});
    for (int k = 1; k < n; ++k)
        firms.push_back({competitor_id(k), {"m2"}, CostSpec::linear(1.0)});
    Game game(std::move(markets), std::move(firms));

    QuantityProfile pre(std::size_t(n), 2), post(std::size_t(n), 2);
    pre.set(0, 1, 1.0);
    post.set(0, 0, (nn * nn - nn) / den);
    post.set(0, 1, (nn * nn + 3.0 * nn - 2.0) / den);
    for (int i = 1; i < n; ++i) post.set(std::size_t(i), 1, (nn - 1.0) / den);

    NamedInstance inst{"welfare-worstcase(n=" + std::to_string(n) + ")", std::move(game),
                       PriceShock{{{"m1", (nn * nn - 1.0) / den}}}, pre, post, {}};
    inst.expected.push_back({Objective::welfare, welfare_ratio_formula(std::size_t(n)), {}});
    // surplus before: 3/2; after: closed form in n
    const double s_post = (10.0 * nn * nn * nn * nn + 22.0 * nn * nn * nn - 7.0 * nn * nn -
                           24.0 * nn + 11.0) /
                          (8.0 * (nn * nn + nn - 1.0) * (nn * nn + nn - 1.0));
    inst.expected.push_back({Objective::surplus, s_post / 1.5, {}});
    return inst;
}

NamedInstance concave_small_shock(int k) {
    if (k < 4) throw ValidationError("small-shock concave instance needs k >= 4");
    if (k > 512)
        throw ValidationError("small-shock concave instance builds k^2 competitors; "
                              "k above 512 is refused");
    const double kk = k;
    const int competitors = k * k;  // sized so the stated totals hit the anchors
    ConcaveAnchorPrice curve({{1.0, 1.0, -1.0}, {1.0 + 1.0 / kk, 1.0 - 2.0 / kk, -kk}});
    std::vector<Market> markets{{"m1", 0.0, 0.0, {}}, {"m2", 0.0, 0.0, curve}};
    std::vector<Firm> firms;
    firms.push_back({"a", {"m1", "m2"}, CostSpec::zero_cost(1.0)});
    for (int j = 1; j <= competitors; ++j)
        firms.push_back({competitor_id(j), {"m2"}, CostSpec::linear(1.0)});
    Game game(std::move(markets), std::move(firms));

    const std::size_t n = std::size_t(competitors) + 1;
    QuantityProfile pre(n, 2), post(n, 2);
    pre.set(0, 1, 1.0);
    post.set(0, 0, 1.0 - 1.0 / kk);
    post.set(0, 1, 1.0 / kk);
    for (std::size_t i = 1; i < n; ++i) post.set(i, 1, 1.0 / (kk * kk));

    NamedInstance inst{"concave-small-shock(k=" + std::to_string(k) + ")", std::move(game),
                       PriceShock{{{"m1", 1.0 / kk}, {"m2", 3.0 / kk}}}, pre, post, {}};
    inst.expected.push_back({Objective::firm_profit, 2.0 / kk, std::string("a")});
    return inst;
}

NamedInstance concave_two_firm(int k) {
    if (k <= 4) throw ValidationError("two-firm concave instance needs k > 4");
    const double kk = k;
    const double s1 = -(kk + 1.0 / kk) / (kk + 0.5 - 1.0 / kk);
    ConcaveAnchorPrice curve(
        {{kk + 1.0 - 1.0 / kk, kk + 1.0 / kk, s1}, {kk + 1.0, kk, -1.0}});
    std::vector<Market> markets{{"m1", kk - 1.0, 1.0 / kk, {}}, {"m2", 0.0, 0.0, curve}};
    std::vector<Firm> firms{{"a", {"m1", "m2"}, CostSpec::linear(kk - 1.0, 1.0)},
                            {"b", {"m2"}, CostSpec::zero_cost()}};
    Game game(std::move(markets), std::move(firms));

    QuantityProfile pre(2, 2), post(2, 2);
    pre.set(0, 1, 1.0);
    pre.set(1, 1, kk);
    post.set(0, 0, 0.5);
    post.set(0, 1, 0.5);
    post.set(1, 1, kk - 1.0 / kk + 0.5);

    const double delta1 = 1.0 + 2.0 / kk - (kk + 1.0 / kk) / (2.0 * (kk - 1.0 / kk + 0.5));
    NamedInstance inst{"concave-two-firm(k=" + std::to_string(k) + ")", std::move(game),
                       PriceShock{{{"m1", delta1}}}, pre, post, {}};
    const double gamma =
        1.0 + 1.25 / kk - 0.25 * (kk + 1.0 / kk) / (kk - 1.0 / kk + 0.5);
    inst.expected.push_back({Objective::firm_profit, gamma, std::string("a")});
    return inst;
}

Game random_game(std::uint64_t seed, const RandomGameConfig& config) {
    if (config.n_max < 1 || config.m_max < 1)
        throw ValidationError("random game config needs n_max >= 1 and m_max >= 1");
    Rng rng(seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull);
    const double wsum = config.weight_zero + config.weight_linear + config.weight_quadratic;
    if (!(wsum > 0.0)) throw ValidationError("cost kind weights must not all be zero");

    for (int attempt = 0; attempt < 64; ++attempt) {
        const int n = rng.uniform_int(1, config.n_max);
        const int m = rng.uniform_int(1, config.m_max);

        std::vector<Market> markets;
        for (int j = 1; j <= m; ++j)
            markets.push_back({"m" + std::to_string(j),
                               rng.uniform(config.p_min, config.p_max),
                               rng.uniform(config.r_min, config.r_max),
                               {}});

        std::vector<Firm> firms;
        for (int i = 1; i <= n; ++i) {
            std::vector<std::string> access;
            for (int j = 1; j <= m; ++j)
                if (rng.uniform() < 0.6) access.push_back("m" + std::to_string(j));
            if (access.empty()) access.push_back("m" + std::to_string(rng.uniform_int(1, m)));

            CostSpec cost;
            const double pick = rng.uniform() * wsum;
            if (pick < config.weight_zero) {
                cost = CostSpec::zero_cost();
            } else if (pick < config.weight_zero + config.weight_linear) {
                cost = CostSpec::linear(rng.uniform(0.0, config.p_max / 5.0));
            } else {
                cost = CostSpec::quadratic(rng.uniform(0.05, 5.0),
                                           rng.uniform(0.0, config.p_max / 10.0));
            }
            if (rng.uniform() < config.cap_probability) cost.cap = rng.uniform(0.2, 20.0);
            firms.push_back({"f" + std::to_string(i), std::move(access), cost});
        }

        if (rng.uniform() < config.monopoly_market_probability) {
            const int owner = rng.uniform_int(0, n - 1);
            markets.push_back({"mp", rng.uniform(config.p_min, config.p_max), 0.0, {}});
            firms[std::size_t(owner)].markets.push_back("mp");
            auto& cost = firms[std::size_t(owner)].cost;
            if (!cost.strictly_convex() && !cost.cap) cost.cap = rng.uniform(0.5, 10.0);
        }

        try {
            return Game(std::move(markets), std::move(firms));
        } catch (const std::runtime_error&) {
            continue;  // resample
        }
    }
    throw ValidationError("random game generation kept failing validation");
}

PriceShock random_shock(std::uint64_t seed, const Game& game) {
    Rng rng(seed * 0xD1342543DE82EF95ull + 0x853C49E6748FEA9Bull);
    PriceShock shock;
    // Sparse shocks: hitting every market at once mostly lifts all profits;
    // losses need the shock concentrated on few markets, so leave markets out
    // half of the time (a private constant-price market stays in more often).
    bool any = false;
    for (const auto& mk : game.markets()) {
        const bool private_market = mk.affine() && mk.r == 0.0;
        const double keep = private_market ? 0.9 : 0.5;
        const double top = mk.affine() ? mk.p : mk.price_at(0.0);
        const double d = rng.uniform() < keep ? rng.uniform(0.0, std::max(0.0, top)) : 0.0;
        shock.delta[mk.id] = d;
        any = any || d > 0.0;
    }
    if (!any && !game.markets().empty())
        shock.delta[game.markets().front().id] =
            rng.uniform(0.0, std::max(0.0, game.markets().front().p));
    return shock;
}

QuantityProfile random_feasible_profile(std::uint64_t seed, const Game& game) {
    Rng rng(seed * 0xA0761D6478BD642Full + 0xE7037ED1A0B428DBull);
    QuantityProfile prof(game.firm_count(), game.market_count());
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        const Firm& f = game.firm(i);
        for (std::size_t m : game.accessible_markets(i)) {
            const Market& mk = game.market(m);
            double scale;
            if (!mk.affine())
                scale = mk.concave->anchors().front().q;
            else if (mk.r > 0.0)
                scale = mk.p / (2.0 * mk.r);
            else
                scale = f.cost.cap ? *f.cost.cap : mk.p;
            prof.set(i, m, rng.uniform(0.0, scale));
        }
        if (f.cost.cap) {
            const double total = prof.firm_total(i);
            if (total > *f.cost.cap) {
                const double shrink = 0.9 * *f.cost.cap / total;
                for (std::size_t m : game.accessible_markets(i))
                    prof.set(i, m, prof(i, m) * shrink);
            }
        }
    }
    return prof;
}

}  // namespace cournot

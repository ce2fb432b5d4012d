#include <doctest.h>

#include <cmath>

#include "cournot/errors.hpp"
#include "cournot/instances.hpp"
#include "cournot/model.hpp"
#include "test_util.hpp"

using namespace cournot;

namespace {

Game bulow_game() { return bulow_example().game; }

QuantityProfile bulow_pre() { return *bulow_example().stated_pre; }
QuantityProfile bulow_post() { return *bulow_example().stated_post; }

// Marginal revenue from a central difference of the firm's revenue, one
// market quantity at a time. Independent of the closed form under test.
double numeric_marginal_revenue(const Game& g, std::size_t i, std::size_t m,
                                const QuantityProfile& prof, const PriceShock* shock) {
    const double h = 1e-6;
    const auto revenue = [&](double q) {
        QuantityProfile p = prof;
        p.set(i, m, q);
        double rev = 0.0;
        for (std::size_t mm : g.accessible_markets(i))
            rev += price(g, mm, p.market_total(mm), shock) * p(i, mm);
        return rev;
    };
    const double q0 = prof(i, m);
    return (revenue(q0 + h) - revenue(q0 - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("price evaluates the affine form") {
    const Game g = bulow_game();
    CHECK(price(g, "m2", 100.0) == doctest::Approx(100.0).epsilon(1e-14));
    const PriceShock s{{{"m1", 5.0}}};
    CHECK(price(g, "m1", 0.0, &s) == 55.0);
    CHECK(price(g, "m1", 123.0, &s) == 55.0);  // zero slope
    CHECK(price(g, "m2", 0.0) == 200.0);
    CHECK_THROWS_AS(price(g, "nope", 1.0), UnknownIdError);
}

TEST_CASE("marginal revenue matches value and numeric gradient") {
    const Game g = bulow_game();
    const QuantityProfile x = bulow_pre();
    CHECK(marginal_revenue(g, "a", "m2", x) == doctest::Approx(50.0).epsilon(1e-13));
    CHECK(marginal_revenue(g, "a", "m2", x) ==
          doctest::Approx(numeric_marginal_revenue(g, 0, 1, x, nullptr)).epsilon(1e-7));

    const QuantityProfile y = bulow_post();
    const PriceShock s{{{"m1", 5.0}}};
    CHECK(marginal_revenue(g, "b", "m2", y, &s) == doctest::Approx(51.0).epsilon(1e-13));
    CHECK(marginal_revenue(g, "b", "m2", y, &s) ==
          doctest::Approx(numeric_marginal_revenue(g, 1, 1, y, &s)).epsilon(1e-7));

    // constant-price market: marginal revenue is the (shocked) price itself
    CHECK(marginal_revenue(g, "a", "m1", y, &s) == 55.0);
    CHECK(marginal_revenue(g, "a", "m1", x) == 50.0);

    CHECK_THROWS_AS(marginal_revenue(g, "b", "m1", x), InfeasibleError);
}

TEST_CASE("cost family evaluation") {
    const Firm quad{"q", {"m1"}, CostSpec::quadratic(0.5, 0.0)};
    CHECK(cost(quad, 55.0) == doctest::Approx(1512.5).epsilon(1e-15));
    CHECK(marginal_cost(quad, 55.0) == doctest::Approx(55.0).epsilon(1e-15));
    CHECK(cost(quad, 0.0) == 0.0);

    const Firm lin{"l", {"m1"}, CostSpec::linear(1.0)};
    CHECK(cost(lin, 0.75) == doctest::Approx(0.75));
    CHECK(marginal_cost(lin, 0.75) == 1.0);

    const Firm capped{"c", {"m1"}, CostSpec::linear(1.0, 2.0)};
    CHECK_THROWS_AS(cost(capped, 2.5), InfeasibleError);
    CHECK_THROWS_AS(marginal_cost(capped, 2.5), InfeasibleError);
    CHECK_THROWS_AS(cost(capped, -0.1), InfeasibleError);

    const Firm zero{"z", {"m1"}, CostSpec::zero_cost()};
    CHECK(cost(zero, 17.0) == 0.0);
    CHECK(marginal_cost(zero, 17.0) == 0.0);
}

TEST_CASE("profit at the known equilibria") {
    const Game g = bulow_game();
    CHECK(profit(g, "a", bulow_pre()) == doctest::Approx(3750.0).epsilon(1e-13));
    CHECK(profit(g, "b", bulow_pre()) == doctest::Approx(3750.0).epsilon(1e-13));
    const PriceShock s{{{"m1", 5.0}}};
    CHECK(profit(g, "a", bulow_post(), &s) == doctest::Approx(3721.5).epsilon(1e-13));
    CHECK(profit(g, "b", bulow_post(), &s) == doctest::Approx(3901.5).epsilon(1e-13));

    const QuantityProfile zero(g.firm_count(), g.market_count());
    CHECK(profit(g, "a", zero) == 0.0);

    QuantityProfile bad(g.firm_count(), g.market_count());
    bad.set(1, 0, 1.0);  // firm b cannot serve market 1
    CHECK_THROWS_AS(profit(g, "b", bad), InfeasibleError);
}

TEST_CASE("welfare sums profits") {
    const Game g = bulow_game();
    CHECK(welfare(g, bulow_pre()) == doctest::Approx(7500.0).epsilon(1e-13));
    const QuantityProfile zero(g.firm_count(), g.market_count());
    CHECK(welfare(g, zero) == 0.0);
}

TEST_CASE("surplus value and identity") {
    const Game g = bulow_game();
    // welfare 7500 plus r q^2 / 2 = 100^2/2 on the shared market
    CHECK(surplus(g, bulow_pre()) == doctest::Approx(12500.0).epsilon(1e-13));
    const QuantityProfile zero(g.firm_count(), g.market_count());
    CHECK(surplus(g, zero) == 0.0);

    // surplus - welfare = sum_m r_m q_m^2 / 2 on arbitrary feasible profiles
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Game rg = random_game(seed);
        const QuantityProfile prof = random_feasible_profile(seed + 1000, rg);
        double half_sq = 0.0;
        for (std::size_t m = 0; m < rg.market_count(); ++m) {
            const double q = prof.market_total(m);
            half_sq += 0.5 * rg.market(m).r * q * q;
        }
        const double lhs = surplus(rg, prof) - welfare(rg, prof);
        CHECK(lhs == doctest::Approx(half_sq).epsilon(1e-9));
    }

    CHECK_THROWS_AS(surplus(concave_small_shock(4).game,
                            QuantityProfile(18, 2)),
                    UnsupportedError);
}

TEST_CASE("apply_shock shifts intercepts and nothing else") {
    const Game g = bulow_game();
    const Game shocked = apply_shock(g, PriceShock{{{"m1", 5.0}}});
    CHECK(shocked.market(shocked.market_index("m1")).p == 55.0);
    CHECK(shocked.market(shocked.market_index("m2")).p == 200.0);
    CHECK(g.market(g.market_index("m1")).p == 50.0);  // input untouched

    CHECK(apply_shock(g, PriceShock{}) == g);
    CHECK(apply_shock(g, PriceShock{{{"m2", 0.0}}}) == g);

    // quarter-unit shock on the zero-price private market
    const Game pw = profit_worstcase(2).game;
    const Game pws = apply_shock(pw, PriceShock{{{"m1", 0.25}}});
    CHECK(pws.market(pws.market_index("m1")).p == 0.25);

    CHECK_THROWS_AS(apply_shock(g, PriceShock{{{"zzz", 1.0}}}), UnknownIdError);
    CHECK_THROWS_AS(apply_shock(g, PriceShock{{{"m1", -60.0}}}), ValidationError);
    CHECK(apply_shock(g, PriceShock{{{"m1", -50.0}}})
              .market(g.market_index("m1"))
              .p == 0.0);
}

TEST_CASE("profit is concave along own-quantity segments") {
    testutil::Rng rng(7);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Game g = random_game(seed);
        const QuantityProfile base = random_feasible_profile(seed + 77, g);
        const QuantityProfile alt = random_feasible_profile(seed + 177, g);
        const std::size_t i = std::size_t(rng.next() % g.firm_count());
        const auto blend = [&](double t) {
            QuantityProfile p = base;
            for (std::size_t m : g.accessible_markets(i))
                p.set(i, m, (1.0 - t) * base(i, m) + t * alt(i, m));
            return profit(g, i, p);
        };
        const double t = rng.uniform(0.25, 0.75), h = 0.1;
        const double second = blend(t - h) + blend(t + h) - 2.0 * blend(t);
        CHECK(second <= 1e-7 * std::max(1.0, std::abs(blend(t))));
    }
}

TEST_CASE("game validation") {
    const Market m1{"m1", 10.0, 1.0, {}};
    const Firm f1{"f1", {"m1"}, CostSpec::zero_cost()};

    CHECK_THROWS_AS(Game({m1, m1}, {f1}), ValidationError);
    CHECK_THROWS_AS(Game({m1}, {f1, f1}), ValidationError);
    CHECK_THROWS_AS(Game({m1}, {}), ValidationError);
    CHECK_THROWS_AS(Game({m1}, {Firm{"f", {}, CostSpec::zero_cost()}}), ValidationError);
    CHECK_THROWS_AS(Game({m1}, {Firm{"f", {"nope"}, CostSpec::zero_cost()}}), ValidationError);
    CHECK_THROWS_AS(Game({Market{"m", -1.0, 1.0, {}}}, {f1}), ValidationError);
    CHECK_THROWS_AS(Game({Market{"m1", 10.0, -0.5, {}}}, {f1}), ValidationError);

    // constant-price market: single eligible firm only
    CHECK_THROWS_AS(Game({Market{"m1", 10.0, 0.0, {}}},
                         {Firm{"f1", {"m1"}, CostSpec::quadratic(1.0, 0.0)},
                          Firm{"f2", {"m1"}, CostSpec::quadratic(1.0, 0.0)}}),
                    ValidationError);

    // boundedness guard: flat cost and no capacity on a constant-price market
    CHECK_THROWS_AS(Game({Market{"m1", 10.0, 0.0, {}}},
                         {Firm{"f1", {"m1"}, CostSpec::linear(0.0)}}),
                    UnboundedError);
    CHECK_NOTHROW(Game({Market{"m1", 10.0, 0.0, {}}},
                       {Firm{"f1", {"m1"}, CostSpec::linear(0.0, 5.0)}}));
    CHECK_NOTHROW(Game({Market{"m1", 10.0, 0.0, {}}},
                       {Firm{"f1", {"m1"}, CostSpec::quadratic(0.5, 0.0)}}));
}

TEST_CASE("profile validation") {
    const Game g = bulow_game();
    QuantityProfile p(2, 2);
    p.set(0, 0, -1.0);
    CHECK_THROWS_AS(validate_profile(g, p), InfeasibleError);

    const Game capped({Market{"m1", 10.0, 1.0, {}}},
                      {Firm{"f1", {"m1"}, CostSpec::zero_cost(2.0)}});
    QuantityProfile q(1, 1);
    q.set(0, 0, 2.5);
    CHECK_THROWS_AS(validate_profile(capped, q), InfeasibleError);
    q.set(0, 0, 2.0);
    CHECK_NOTHROW(validate_profile(capped, q));
}

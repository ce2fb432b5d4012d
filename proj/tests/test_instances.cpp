#include <doctest.h>

#include <cmath>

#include "cournot/certify.hpp"
#include "cournot/errors.hpp"
#include "cournot/instances.hpp"
#include "cournot/solver.hpp"

using namespace cournot;

TEST_CASE("two-market duopoly construction") {
    const NamedInstance inst = bulow_example();
    CHECK(inst.game.market(inst.game.market_index("m1")).p == 50.0);
    CHECK(inst.game.market(inst.game.market_index("m1")).r == 0.0);
    CHECK(inst.game.market(inst.game.market_index("m2")).p == 200.0);
    CHECK(inst.shock.at("m1") == 5.0);
    CHECK(inst.expected.size() == 1);
    CHECK(inst.expected[0].value == doctest::Approx(0.9924).epsilon(1e-12));
}

TEST_CASE("tight profit instance carries the closed-form equilibria") {
    const NamedInstance inst = profit_worstcase(2);
    CHECK(inst.shock.at("m1") == doctest::Approx(0.25).epsilon(1e-15));
    const auto& x = *inst.stated_pre;
    CHECK(x(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(x(1, 1) == doctest::Approx(2.0 / 3.0));
    const auto& y = *inst.stated_post;
    CHECK(y(0, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(y(0, 1) == doctest::Approx(0.5));
    CHECK(y(1, 1) == doctest::Approx(0.75));
    CHECK(inst.expected[0].value == doctest::Approx(15.0 / 16.0));
    CHECK_THROWS_AS(profit_worstcase(1), ValidationError);
}

TEST_CASE("tight welfare instance values") {
    const NamedInstance inst = welfare_worstcase(2);
    CHECK(inst.shock.at("m1") == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(welfare(inst.game, *inst.stated_pre) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(surplus(inst.game, *inst.stated_pre) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(surplus(inst.game, *inst.stated_post, &inst.shock) ==
          doctest::Approx(1.355).epsilon(1e-12));
    CHECK_THROWS_AS(welfare_worstcase(0), ValidationError);
}

TEST_CASE("stated equilibria satisfy complementarity everywhere") {
    const auto check = [](const NamedInstance& inst) {
        INFO(inst.name);
        if (inst.stated_pre) CHECK(kkt_residual(inst.game, *inst.stated_pre) <= 1e-9);
        if (inst.stated_post)
            CHECK(kkt_residual(inst.game, *inst.stated_post, &inst.shock) <= 1e-9);
    };
    check(bulow_example());
    for (int n : {2, 3, 5, 10, 37}) check(profit_worstcase(n));
    for (int n : {2, 5, 10, 37}) check(welfare_worstcase(n));
    for (int k : {4, 8, 16}) check(concave_small_shock(k));
    for (int k : {5, 10, 100, 1000}) check(concave_two_firm(k));
}

TEST_CASE("small-shock concave counterexample") {
    const NamedInstance inst = concave_small_shock(4);
    // one firm plus k^2 competitors sized to land on the anchor quantities
    CHECK(inst.game.firm_count() == 17);
    CHECK(profit(inst.game, "a", *inst.stated_pre) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(profit(inst.game, "a", *inst.stated_post, &inst.shock) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(inst.expected[0].value == doctest::Approx(0.5));
    CHECK_THROWS_AS(concave_small_shock(3), ValidationError);

    // the verification pipeline agrees: profit ratio 2/k, here 1/4 for k=8
    const CertificateReport rep8 = verify_named_instance(concave_small_shock(8));
    CHECK(rep8.pass);
    CHECK(concave_small_shock(8).expected[0].value == doctest::Approx(0.25));
}

TEST_CASE("two-firm concave counterexample matches direct profit evaluation") {
    for (int k : {10, 100}) {
        const NamedInstance inst = concave_two_firm(k);
        const double direct = profit(inst.game, "a", *inst.stated_post, &inst.shock) /
                              profit(inst.game, "a", *inst.stated_pre);
        CHECK(inst.expected[0].value == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK_THROWS_AS(concave_two_firm(4), ValidationError);
    // binade crossings in the anchor arithmetic stay inside the secant pad
    for (int k : {1023, 1024, 4000}) CHECK_NOTHROW(concave_two_firm(k));
    CHECK_THROWS_AS(concave_small_shock(600), ValidationError);
}

TEST_CASE("every named instance passes verification") {
    CHECK(verify_named_instance(bulow_example()).pass);
    for (int n : {2, 3, 5, 10}) CHECK(verify_named_instance(profit_worstcase(n)).pass);
    for (int n : {2, 5, 10}) CHECK(verify_named_instance(welfare_worstcase(n)).pass);
    for (int k : {4, 8, 16}) CHECK(verify_named_instance(concave_small_shock(k)).pass);
    for (int k : {10, 100}) CHECK(verify_named_instance(concave_two_firm(k)).pass);
}

TEST_CASE("random games are deterministic in the seed") {
    const RandomGameConfig cfg;
    for (std::uint64_t seed : {1ull, 99ull, 31337ull}) {
        CHECK(random_game(seed, cfg) == random_game(seed, cfg));
    }
    CHECK(!(random_game(1, cfg) == random_game(2, cfg)));
}

TEST_CASE("random games always validate and mostly solve") {
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Game g = random_game(seed);  // construction enforces the guard
        CHECK(g.firm_count() >= 1);
        for (std::size_t i = 0; i < g.firm_count(); ++i)
            CHECK(!g.accessible_markets(i).empty());
        try {
            const auto r = solve_equilibrium(g);
            CHECK(r.kkt_residual <= 1e-8);
            ++solved;
        } catch (const NonConvergenceError&) {
        }
    }
    CHECK(solved >= 99);
}

TEST_CASE("single-firm games never lose from a shock") {
    RandomGameConfig cfg;
    cfg.n_max = 1;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Game g = random_game(seed, cfg);
        const PriceShock s = random_shock(seed + 1, g);
        const ShockReport rep = shock_report(g, s);
        if (rep.gamma_u.status == GammaStatus::finite)
            CHECK(rep.gamma_u.value >= 1.0 - 1e-9);
    }
}

TEST_CASE("random shocks stay within the intercepts") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Game g = random_game(seed);
        const PriceShock s = random_shock(seed * 3 + 1, g);
        CHECK(s.nonnegative());
        for (const auto& [id, d] : s.delta) {
            const Market& mk = g.market(g.market_index(id));
            CHECK(d <= (mk.affine() ? mk.p : mk.price_at(0.0)) + 1e-12);
        }
    }
}

TEST_CASE("random feasible profiles validate") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Game g = random_game(seed);
        CHECK_NOTHROW(validate_profile(g, random_feasible_profile(seed + 7, g)));
    }
}

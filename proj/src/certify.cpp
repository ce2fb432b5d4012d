#include "cournot/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cournot/errors.hpp"
#include "cournot/json_io.hpp"

namespace cournot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_certified(const Game& game, const QuantityProfile& q, const PriceShock* shock,
                       double tol, const char* which) {
    const double res = kkt_residual(game, q, shock);
    if (res > tol)
        throw ValidationError(std::string(which) + " profile is not a certified equilibrium " +
                              "(residual " + std::to_string(res) + ")");
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t lane) {
    std::uint64_t z = seed ^ (lane * 0x9E3779B97F4A7C15ull + 0x165667B19E3779F9ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Ratio of an expected objective evaluated directly at the stated profiles.
Gamma stated_ratio(const NamedInstance& inst, const ExpectedGamma& eg) {
    const Game& g = inst.game;
    const QuantityProfile& x = *inst.stated_pre;
    const QuantityProfile& y = *inst.stated_post;
    switch (eg.objective) {
        case Objective::firm_profit: {
            if (eg.firm) {
                const std::size_t i = g.firm_index(*eg.firm);
                return ratio_gamma(profit(g, i, x), profit(g, i, y, &inst.shock));
            }
            std::vector<double> pre(g.firm_count()), post(g.firm_count());
            for (std::size_t i = 0; i < g.firm_count(); ++i) {
                pre[i] = profit(g, i, x);
                post[i] = profit(g, i, y, &inst.shock);
            }
            return profit_ratio_extremum(pre, post, /*take_max=*/false);
        }
        case Objective::welfare:
            return ratio_gamma(welfare(g, x), welfare(g, y, &inst.shock));
        case Objective::surplus:
            return ratio_gamma(surplus(g, x), surplus(g, y, &inst.shock));
    }
    return {};
}

Gamma solved_ratio(const NamedInstance& inst, const ExpectedGamma& eg, const ShockReport& rep) {
    switch (eg.objective) {
        case Objective::firm_profit:
            if (eg.firm) {
                const std::size_t i = inst.game.firm_index(*eg.firm);
                return ratio_gamma(rep.profit_pre[i], rep.profit_post[i]);
            }
            return rep.gamma_u;
        case Objective::welfare: return rep.gamma_U;
        case Objective::surplus: return rep.gamma_S;
    }
    return {};
}

}  // namespace

MonotonicitySlacks check_monotonicity(const Game& game, const PriceShock& shock,
                                      const QuantityProfile& x, const QuantityProfile& y,
                                      double certified_tol) {
    require_certified(game, x, nullptr, certified_tol, "pre-shock");
    require_certified(game, y, &shock, certified_tol, "post-shock");
    MonotonicitySlacks out{kInf, kInf};
    for (std::size_t m = 0; m < game.market_count(); ++m) {
        const double before = price(game, m, x.market_total(m));
        const double after = price(game, m, y.market_total(m), &shock);
        out.price = std::min(out.price, after - before);
    }
    for (std::size_t i = 0; i < game.firm_count(); ++i)
        out.quantity = std::min(out.quantity, y.firm_total(i) - x.firm_total(i));
    return out;
}

double check_variational_inequality(const Game& game, const PriceShock& shock,
                                    const QuantityProfile& x, const QuantityProfile& y,
                                    double certified_tol) {
    if (!game.all_affine())
        throw UnsupportedError("variational inequality check requires affine prices");
    require_certified(game, x, nullptr, certified_tol, "pre-shock");
    require_certified(game, y, &shock, certified_tol, "post-shock");
    double worst = -kInf;
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        const double mc = marginal_cost(game.firm(i), y.firm_total(i));
        double sum = 0.0;
        for (std::size_t m : game.accessible_markets(i)) {
            const Market& mk = game.market(m);
            const double grad =
                mk.p + shock.at(mk.id) - mk.r * y.market_total(m) - mk.r * y(i, m) - mc;
            sum += grad * (x(i, m) - y(i, m));
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

double check_surplus_floor(const Game& game, const QuantityProfile& x, double certified_tol) {
    require_certified(game, x, nullptr, certified_tol, "equilibrium");
    double floor = 0.0;
    for (std::size_t i = 0; i < game.firm_count(); ++i)
        for (std::size_t m = 0; m < game.market_count(); ++m)
            floor += 1.5 * game.market(m).r * x(i, m) * x(i, m);
    return surplus(game, x) - floor;
}

CertificateReport verify_named_instance(const NamedInstance& inst) {
    CertificateReport rep;
    rep.subject = inst.name;
    try {
        if (inst.stated_pre) {
            const double r = kkt_residual(inst.game, *inst.stated_pre);
            rep.add({"stated-pre-kkt", r <= kStatedProfileTol, r, ""});
        }
        if (inst.stated_post) {
            const double r = kkt_residual(inst.game, *inst.stated_post, &inst.shock);
            rep.add({"stated-post-kkt", r <= kStatedProfileTol, r, ""});
        }

        if (inst.stated_pre && inst.stated_post) {
            for (const auto& eg : inst.expected) {
                const Gamma got = stated_ratio(inst, eg);
                const double err = std::abs(got.value - eg.value);
                const double tol = 1e-9 * std::max(1.0, std::abs(eg.value));
                rep.add({"gamma-" + to_string(eg.objective) + "-stated",
                         got.status == GammaStatus::finite && err <= tol, err,
                         "expected " + std::to_string(eg.value) + ", got " +
                             std::to_string(got.value)});
            }
        }

        if (inst.game.all_affine()) {
            SolveOptions opts = tuned_options(inst.game);
            opts.tol = 1e-12;
            opts.kkt_tol = 1e-10;
            opts.max_iters = std::max(opts.max_iters, 200000L);
            const EquilibriumResult pre = solve_equilibrium(inst.game, nullptr, opts);
            const EquilibriumResult post = solve_equilibrium(inst.game, &inst.shock, opts);
            if (inst.stated_pre) {
                const double d = pre.profile.sup_distance(*inst.stated_pre);
                rep.add({"solver-matches-stated-pre", d <= 1e-7, d, ""});
            }
            if (inst.stated_post) {
                const double d = post.profile.sup_distance(*inst.stated_post);
                rep.add({"solver-matches-stated-post", d <= 1e-7, d, ""});
            }
            const ShockReport sr = make_shock_report(inst.game, inst.shock, pre, post);
            for (const auto& eg : inst.expected) {
                const Gamma got = solved_ratio(inst, eg, sr);
                const double err = std::abs(got.value - eg.value);
                const double tol = 1e-7 * std::max(1.0, std::abs(eg.value));
                rep.add({"gamma-" + to_string(eg.objective) + "-solved",
                         got.status == GammaStatus::finite && err <= tol, err,
                         "expected " + std::to_string(eg.value) + ", got " +
                             std::to_string(got.value)});
            }
        }
    } catch (const std::exception& e) {
        rep.add({"error", false, 0.0, e.what()});
    }
    return rep;
}

SolveOptions suite_options() {
    SolveOptions o;
    o.tol = 1e-12;
    o.kkt_tol = 1e-9;
    o.max_iters = 50000;
    return o;
}

CertificateReport certify_suite(std::uint64_t seed, int trials, const RandomGameConfig& config,
                                const SolveOptions& opts) {
    if (trials < 1) throw ValidationError("certify suite needs at least one trial");
    CertificateReport rep;
    rep.subject = "random-sweep";
    rep.seed = seed;
    rep.trials = trials;

    struct Agg {
        double worst = kInf;  // smallest slack seen (checks are lower bounds)
        bool pass = true;
        int fails = 0;
        void fold(double slack, bool ok) {
            worst = std::min(worst, slack);
            pass = pass && ok;
            fails += ok ? 0 : 1;
        }
    };
    std::map<std::string, Agg> agg;
    const auto fold = [&](const std::string& name, double slack, bool ok, const Game& game,
                          const PriceShock& shock, int trial) {
        agg[name].fold(slack, ok);
        if (!ok && rep.failing_game_json.empty())
            rep.failing_game_json = failure_artifact_json(game, shock, name, trial);
    };

    for (int t = 0; t < trials; ++t) {
        const Game game = random_game(mix(seed, 2 * std::uint64_t(t) + 1), config);
        const PriceShock shock = random_shock(mix(seed, 2 * std::uint64_t(t) + 2), game);

        EquilibriumResult pre, post;
        try {
            pre = solve_equilibrium(game, nullptr, opts);
            post = solve_equilibrium(game, &shock, opts);
        } catch (const NonConvergenceError&) {
            ++rep.non_converged;
            continue;
        }
        ++rep.converged;

        // multi-start uniqueness, from an unrelated feasible profile
        {
            SolveOptions alt = opts;
            alt.initial = random_feasible_profile(mix(seed, 2 * std::uint64_t(t) + 3), game);
            bool ok = true;
            double dist = 0.0;
            try {
                const EquilibriumResult pre2 = solve_equilibrium(game, nullptr, alt);
                const EquilibriumResult post2 = solve_equilibrium(game, &shock, alt);
                dist = std::max(pre2.profile.sup_distance(pre.profile),
                                post2.profile.sup_distance(post.profile));
                ok = dist <= 10.0 * opts.tol;
            } catch (const NonConvergenceError&) {
                ok = false;
            }
            fold("multi-start-uniqueness", 10.0 * opts.tol - dist, ok, game, shock, t);
        }

        const MonotonicitySlacks mono =
            check_monotonicity(game, shock, pre.profile, post.profile, opts.kkt_tol * 1.01);
        fold("price-monotonicity", mono.price, mono.price >= -kCertifyTol, game, shock, t);
        fold("quantity-monotonicity", mono.quantity, mono.quantity >= -kCertifyTol, game, shock,
             t);

        const double vi = check_variational_inequality(game, shock, pre.profile, post.profile,
                                                       opts.kkt_tol * 1.01);
        fold("variational-inequality", -vi, vi <= kCertifyTol, game, shock, t);

        const double floor = check_surplus_floor(game, pre.profile, opts.kkt_tol * 1.01);
        fold("surplus-floor", floor, floor >= -kCertifyTol, game, shock, t);

        const ShockReport sr = make_shock_report(game, shock, pre, post);
        if (sr.gamma_u.status != GammaStatus::finite ||
            sr.gamma_U.status != GammaStatus::finite ||
            sr.gamma_S.status != GammaStatus::finite)
            ++rep.zero_baseline;
        if (sr.gamma_u.usable() && sr.gamma_u.value >= 1.0) ++rep.all_gain;

        if (sr.gamma_u.usable())
            fold("bound-profit", sr.gamma_u.value - sr.bound_profit,
                 sr.gamma_u.value >= sr.bound_profit - kBoundSlack, game, shock, t);
        if (sr.gamma_U.usable())
            fold("bound-welfare", sr.gamma_U.value - 0.75,
                 sr.gamma_U.value >= 0.75 - kBoundSlack, game, shock, t);
        if (sr.gamma_S.usable())
            fold("bound-surplus", sr.gamma_S.value - surplus_bound(),
                 sr.gamma_S.value >= surplus_bound() - kBoundSlack, game, shock, t);
        if (sr.gamma_u.status == GammaStatus::finite && sr.gamma_U.status == GammaStatus::finite)
            fold("welfare-at-least-profit", sr.gamma_U.value - sr.gamma_u.value,
                 sr.gamma_U.value >= sr.gamma_u.value - kCertifyTol, game, shock, t);

        // duality: the forward ratio times the take-back ratio is 1
        const NegativeShockRatios back = negative_shock_ratios(game, shock, opts);
        const auto duality = [&](const char* name, const Gamma& fwd, const Gamma& rev) {
            if (fwd.status != GammaStatus::finite || rev.status != GammaStatus::finite) return;
            const double err = std::abs(fwd.value * rev.value - 1.0);
            fold(name, kCertifyTol - err, err <= kCertifyTol, game, shock, t);
        };
        duality("duality-u", sr.gamma_u, back.u);
        duality("duality-U", sr.gamma_U, back.U);
        duality("duality-S", sr.gamma_S, back.S);
    }

    for (const auto& [name, a] : agg)
        rep.add({name, a.pass, a.worst,
                 a.pass ? "" : std::to_string(a.fails) + " failing trials"});

    const double rate = rep.trials > 0 ? double(rep.converged) / double(rep.trials) : 0.0;
    rep.add({"convergence-rate", rate >= 0.99, rate,
             std::to_string(rep.converged) + "/" + std::to_string(rep.trials)});
    return rep;
}

}  // namespace cournot

#include "cournot/shock.hpp"

#include <algorithm>
#include <cmath>

#include "cournot/errors.hpp"
#include "cournot/json_io.hpp"

namespace cournot {

namespace {

// Baselines below this fraction of the profit scale count as zero; ratios of
// such numbers are solver noise, not economics.
constexpr double kZeroBaselineRel = 1e-9;

Gamma scalar_gamma(double pre, double post, double scale) {
    const double thr = kZeroBaselineRel * scale;
    Gamma g;
    if (std::abs(pre) <= thr) {
        if (post >= -thr) {
            g.status = GammaStatus::zero_baseline_nonneg;
            g.value = 1.0;
        } else {
            g.status = GammaStatus::zero_baseline_negative;
            g.value = -std::numeric_limits<double>::infinity();
        }
    } else {
        g.value = post / pre;
    }
    return g;
}

}  // namespace

Gamma ratio_gamma(double pre, double post) {
    return scalar_gamma(pre, post, std::max(std::abs(pre), std::abs(post)));
}

// Zero-baseline firms contribute a ratio of 1 and set the report status.
Gamma profit_ratio_extremum(const std::vector<double>& pre, const std::vector<double>& post,
                            bool take_max) {
    double scale = 0.0;
    for (double v : pre) scale = std::max(scale, std::abs(v));
    for (double v : post) scale = std::max(scale, std::abs(v));
    const double thr = kZeroBaselineRel * scale;

    Gamma g;
    double extreme = take_max ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pre.size(); ++i) {
        double ratio;
        if (std::abs(pre[i]) <= thr) {
            if (post[i] < -thr) {
                g.status = GammaStatus::zero_baseline_negative;
                g.value = -std::numeric_limits<double>::infinity();
                return g;
            }
            g.status = GammaStatus::zero_baseline_nonneg;
            ratio = 1.0;
        } else {
            ratio = post[i] / pre[i];
        }
        extreme = take_max ? std::max(extreme, ratio) : std::min(extreme, ratio);
    }
    g.value = extreme;
    return g;
}

std::string to_string(GammaStatus s) {
    switch (s) {
        case GammaStatus::finite: return "finite";
        case GammaStatus::zero_baseline_nonneg: return "zero-baseline-nonneg";
        case GammaStatus::zero_baseline_negative: return "zero-baseline-negative";
    }
    return "?";
}

std::string to_string(Objective f) {
    switch (f) {
        case Objective::firm_profit: return "u";
        case Objective::welfare: return "U";
        case Objective::surplus: return "S";
    }
    return "?";
}

double profit_bound(std::size_t n) {
    if (n == 0) throw ValidationError("profit bound needs at least one firm");
    const double nn = double(n);
    return 1.0 - (nn - 1.0) * (nn - 1.0) / (4.0 * nn * nn);
}

double welfare_ratio_formula(std::size_t n) {
    if (n == 0) throw ValidationError("welfare ratio formula needs at least one firm");
    const double nn = double(n);
    return 1.0 - (nn - 1.0) * (nn - 1.0) / (4.0 * (nn * nn + nn - 1.0));
}

double surplus_bound() { return 5.0 / 6.0; }

ShockReport make_shock_report(const Game& game, const PriceShock& shock,
                              const EquilibriumResult& pre, const EquilibriumResult& post) {
    ShockReport rep;
    rep.game_digest = game_digest(game);
    rep.n_firms = game.firm_count();
    rep.shock = shock;
    rep.pre = pre;
    rep.post = post;

    rep.profit_pre.resize(game.firm_count());
    rep.profit_post.resize(game.firm_count());
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        rep.profit_pre[i] = profit(game, i, pre.profile);
        rep.profit_post[i] = profit(game, i, post.profile, &shock);
    }
    rep.welfare_pre = welfare(game, pre.profile);
    rep.welfare_post = welfare(game, post.profile, &shock);
    rep.surplus_pre = surplus(game, pre.profile);
    rep.surplus_post = surplus(game, post.profile, &shock);

    rep.gamma_u = profit_ratio_extremum(rep.profit_pre, rep.profit_post, /*take_max=*/false);
    rep.gamma_U = scalar_gamma(rep.welfare_pre, rep.welfare_post,
                               std::max(std::abs(rep.welfare_pre), std::abs(rep.welfare_post)));
    rep.gamma_S = scalar_gamma(rep.surplus_pre, rep.surplus_post,
                               std::max(std::abs(rep.surplus_pre), std::abs(rep.surplus_post)));

    rep.bound_profit = profit_bound(game.firm_count());
    rep.profit_bound_ok = rep.gamma_u.usable() && rep.gamma_u.value >= rep.bound_profit - kBoundSlack;
    rep.surplus_bound_ok = rep.gamma_S.usable() && rep.gamma_S.value >= surplus_bound() - kBoundSlack;
    return rep;
}

ShockReport shock_report(const Game& game, const PriceShock& shock, const SolveOptions& opts) {
    if (!shock.nonnegative())
        throw ValidationError("price shock must be nonnegative; use the negative-shock "
                              "operation for decreases");
    const EquilibriumResult pre = solve_equilibrium(game, nullptr, opts);
    const EquilibriumResult post = solve_equilibrium(game, &shock, opts);
    return make_shock_report(game, shock, pre, post);
}

NegativeShockRatios negative_shock_ratios(const Game& game, const PriceShock& shock,
                                          const SolveOptions& opts) {
    if (!shock.nonnegative())
        throw ValidationError("pass the nonnegative shock that is being taken back");
    const Game shocked = apply_shock(game, shock);
    const Game back = apply_shock(shocked, shock.negated());
    const EquilibriumResult at_shocked = solve_equilibrium(shocked, nullptr, opts);
    const EquilibriumResult at_back = solve_equilibrium(back, nullptr, opts);

    std::vector<double> base(game.firm_count()), after(game.firm_count());
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        base[i] = profit(shocked, i, at_shocked.profile);
        after[i] = profit(back, i, at_back.profile);
    }

    NegativeShockRatios out;
    out.u = profit_ratio_extremum(base, after, /*take_max=*/true);
    const double wb = welfare(shocked, at_shocked.profile);
    const double wa = welfare(back, at_back.profile);
    out.U = scalar_gamma(wb, wa, std::max(std::abs(wb), std::abs(wa)));
    const double sb = surplus(shocked, at_shocked.profile);
    const double sa = surplus(back, at_back.profile);
    out.S = scalar_gamma(sb, sa, std::max(std::abs(sb), std::abs(sa)));
    return out;
}

Gamma negative_shock_ratio(const Game& game, const PriceShock& shock, Objective objective,
                           const SolveOptions& opts) {
    const NegativeShockRatios r = negative_shock_ratios(game, shock, opts);
    switch (objective) {
        case Objective::firm_profit: return r.u;
        case Objective::welfare: return r.U;
        case Objective::surplus: return r.S;
    }
    return r.u;
}

}  // namespace cournot

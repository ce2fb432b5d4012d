#include "cournot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQTol = 1e-12;  // quantity considered zero in complementarity checks

// Largest total quantity the firm is willing to produce when the marginal
// level is `level`: sup{q >= 0 : c'(q) <= level}, before the capacity clip.
double supply_sup(const CostSpec& c, double level) {
    switch (c.kind) {
        case CostKind::zero:
            return level >= 0.0 ? kInf : 0.0;
        case CostKind::linear:
            return c.b <= level ? kInf : 0.0;
        case CostKind::quadratic:
            if (c.a <= 0.0) return c.b <= level ? kInf : 0.0;
            return std::max(0.0, (level - c.b) / (2.0 * c.a));
    }
    return 0.0;
}

std::vector<double> market_deltas(const Game& game, const PriceShock* shock) {
    std::vector<double> d(game.market_count(), 0.0);
    if (shock) {
        for (const auto& [id, v] : shock->delta) d[game.market_index(id)] = v;
    }
    return d;
}

void validate_shock_levels(const Game& game, const std::vector<double>& delta) {
    for (std::size_t m = 0; m < game.market_count(); ++m) {
        if (!std::isfinite(delta[m]))
            throw ValidationError("shock on market '" + game.market(m).id + "' is not finite");
        if (game.market(m).affine() && game.market(m).p + delta[m] < 0.0)
            throw ValidationError("shock drives market '" + game.market(m).id +
                                  "' intercept below zero");
    }
}

struct BestResponseWork {
    std::vector<double> out;        // quantity per market index
    std::vector<double> intercept;  // residual intercept per market index
};

// Core best-response computation; `others` supplies competitor quantities
// (the firm's own entries are ignored), `delta` is the per-market shock.
void best_response_impl(const Game& game, std::size_t i, const QuantityProfile& others,
                        const std::vector<double>& delta, BestResponseWork& w) {
    const Firm& firm = game.firm(i);
    const double cap = firm.cost.cap ? *firm.cost.cap : kInf;

    w.out.assign(game.market_count(), 0.0);
    w.intercept.assign(game.market_count(), 0.0);

    // Residual demand intercepts; pick the absorbing constant-price market as
    // the one with the highest shocked price, ties to the lowest market id.
    double demand_hi = 0.0;  // upper bracket for the marginal level
    bool has_rplus = false;
    int absorber = -1;
    for (std::size_t m : game.accessible_markets(i)) {
        const Market& mk = game.market(m);
        if (!mk.affine())
            throw UnsupportedError("best response requires affine price functions (market '" +
                                   mk.id + "')");
        const double qo = others.market_total(m) - others(i, m);
        const double a = mk.p + delta[m] - mk.r * qo;
        w.intercept[m] = a;
        if (mk.r > 0.0) {
            has_rplus = true;
            demand_hi = std::max(demand_hi, a);
        } else if (absorber < 0 || a > w.intercept[std::size_t(absorber)] ||
                   (a == w.intercept[std::size_t(absorber)] &&
                    mk.id < game.market(std::size_t(absorber)).id)) {
            absorber = int(m);
        }
    }

    const auto rplus_demand = [&](double level) {
        double total = 0.0;
        for (std::size_t m : game.accessible_markets(i)) {
            const double r = game.market(m).r;
            if (r > 0.0) total += std::max(0.0, (w.intercept[m] - level) / (2.0 * r));
        }
        return total;
    };
    const auto fill_rplus = [&](double level) {
        for (std::size_t m : game.accessible_markets(i)) {
            const double r = game.market(m).r;
            if (r > 0.0) w.out[m] = std::max(0.0, (w.intercept[m] - level) / (2.0 * r));
        }
    };

    // A constant-price market absorbs whatever quantity the firm still wants
    // at its price level, on top of what the decreasing-price markets take at
    // that same level. Exact indifference leaves the absorber at zero.
    if (absorber >= 0) {
        const double a0 = w.intercept[std::size_t(absorber)];
        const double q_plus = rplus_demand(a0);
        if (q_plus < cap) {
            const auto desired = firm.cost.quantity_reaching_marginal(a0);
            double q0;
            if (!desired) {
                if (cap == kInf)
                    throw UnboundedError("firm '" + firm.id +
                                         "' has an unbounded best response on constant-price "
                                         "market '" +
                                         game.market(std::size_t(absorber)).id + "'");
                q0 = cap - q_plus;
            } else {
                q0 = std::clamp(*desired - q_plus, 0.0, cap - q_plus);
            }
            if (q0 > 0.0) {
                fill_rplus(a0);
                w.out[std::size_t(absorber)] = q0;
                return;
            }
        }
    }

    if (!has_rplus || demand_hi <= 0.0) return;  // nothing profitable to produce

    // Bisection on the marginal level: demand is nonincreasing, willing
    // supply nondecreasing; stop when the bracket is resolved to rounding.
    double lo = 0.0, hi = demand_hi;
    if (rplus_demand(lo) > std::min(cap, supply_sup(firm.cost, lo))) {
        const double eps = 1e-15 * std::max(1.0, hi);
        for (int it = 0; it < 200 && hi - lo > eps; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (rplus_demand(mid) > std::min(cap, supply_sup(firm.cost, mid)))
                lo = mid;
            else
                hi = mid;
        }
        fill_rplus(hi);
    } else {
        fill_rplus(lo);
    }
}

double kkt_residual_impl(const Game& game, const QuantityProfile& profile,
                         const std::vector<double>& delta) {
    const std::size_t M = game.market_count();
    std::vector<double> px(M), sx(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double qm = profile.market_total(m);
        px[m] = game.market(m).price_at(qm) + delta[m];
        sx[m] = game.market(m).slope_at(qm);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        const Firm& firm = game.firm(i);
        const double qi = profile.firm_total(i);
        const double mc = firm.cost.marginal(std::min(qi, firm.cost.cap ? *firm.cost.cap : qi));
        double mu = 0.0;
        if (firm.cost.cap && qi >= *firm.cost.cap - kQTol) {
            for (std::size_t m : game.accessible_markets(i)) {
                if (profile(i, m) > kQTol)
                    mu = std::max(mu, px[m] + sx[m] * profile(i, m) - mc);
            }
        }
        for (std::size_t m : game.accessible_markets(i)) {
            const double gap = px[m] + sx[m] * profile(i, m) - mc - mu;
            if (profile(i, m) > kQTol)
                worst = std::max(worst, std::abs(gap));
            else
                worst = std::max(worst, gap);
        }
    }
    return worst;
}

void validate_options(const SolveOptions& o) {
    if (!(o.tol > 0.0)) throw ValidationError("tol must be positive");
    if (!(o.kkt_tol > 0.0)) throw ValidationError("kkt_tol must be positive");
    if (!(o.damping > 0.0 && o.damping <= 1.0)) throw ValidationError("damping must be in (0, 1]");
    if (o.max_iters < 1) throw ValidationError("max_iters must be at least 1");
}

}  // namespace

std::vector<double> best_response(const Game& game, std::size_t firm,
                                  const QuantityProfile& others, const PriceShock* shock) {
    if (firm >= game.firm_count()) throw UnknownIdError("firm index out of range");
    if (others.firm_count() != game.firm_count() || others.market_count() != game.market_count())
        throw InfeasibleError("profile dimensions do not match the game");
    const auto delta = market_deltas(game, shock);
    validate_shock_levels(game, delta);
    BestResponseWork w;
    best_response_impl(game, firm, others, delta, w);
    return std::move(w.out);
}

double kkt_residual(const Game& game, const QuantityProfile& profile, const PriceShock* shock) {
    validate_profile(game, profile);
    return kkt_residual_impl(game, profile, market_deltas(game, shock));
}

EquilibriumResult solve_equilibrium(const Game& game, const PriceShock* shock,
                                    const SolveOptions& opts) {
    validate_options(opts);
    if (!game.all_affine())
        throw UnsupportedError("equilibrium solving requires affine price functions");
    const auto delta = market_deltas(game, shock);
    validate_shock_levels(game, delta);

    QuantityProfile profile(game.firm_count(), game.market_count());
    if (opts.initial) {
        validate_profile(game, *opts.initial);
        profile = *opts.initial;
    }

    const double omega = opts.damping;
    BestResponseWork w;
    for (long iter = 1; iter <= opts.max_iters; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < game.firm_count(); ++i) {
            best_response_impl(game, i, profile, delta, w);
            for (std::size_t m : game.accessible_markets(i)) {
                const double old = profile(i, m);
                const double next = (1.0 - omega) * old + omega * w.out[m];
                change = std::max(change, std::abs(next - old));
                profile.set(i, m, next);
            }
        }
        if (change < opts.tol) {
            const double residual = kkt_residual_impl(game, profile, delta);
            if (residual <= opts.kkt_tol) return {profile, iter, residual, true};
        }
    }
    const double residual = kkt_residual_impl(game, profile, delta);
    throw NonConvergenceError("equilibrium iteration did not converge after " +
                                  std::to_string(opts.max_iters) +
                                  " sweeps (last residual " + std::to_string(residual) + ")",
                              residual, opts.max_iters);
}

SolveOptions tuned_options(const Game& game) {
    SolveOptions o;
    const double n = double(game.firm_count());
    if (n > 64.0) {
        // Many firms on a shared market make full best-response steps
        // overshoot; shrink the step and give the iteration room.
        o.damping = std::clamp(16.0 / (n + 2.0), 1.0 / 8192.0, 1.0);
        o.max_iters = 400000;
    }
    return o;
}

}  // namespace cournot

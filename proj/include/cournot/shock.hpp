#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cournot/model.hpp"
#include "cournot/solver.hpp"

namespace cournot {

enum class Objective { firm_profit, welfare, surplus };

// Ratio of an objective after vs. before a shock. A zero pre-shock baseline
// has no meaningful ratio; such cases surface as explicit statuses (the value
// then follows the convention: 1 when the post value is also nonnegative).
enum class GammaStatus { finite, zero_baseline_nonneg, zero_baseline_negative };

struct Gamma {
    GammaStatus status = GammaStatus::finite;
    double value = std::numeric_limits<double>::quiet_NaN();

    bool usable() const { return status != GammaStatus::zero_baseline_negative; }
};

std::string to_string(GammaStatus s);
std::string to_string(Objective f);

// Everything observed when a nonnegative price shock hits a game: both
// equilibria, per-firm profits, the three comparative ratios, and compliance
// with the worst-case bounds (profit ratio >= 1 - (n-1)^2 / 4n^2, surplus
// ratio >= 5/6, each with a small slack for solver tolerance).
struct ShockReport {
    std::string game_digest;
    std::size_t n_firms = 0;
    PriceShock shock;
    EquilibriumResult pre, post;
    std::vector<double> profit_pre, profit_post;  // by firm index
    double welfare_pre = 0.0, welfare_post = 0.0;
    double surplus_pre = 0.0, surplus_post = 0.0;
    Gamma gamma_u;  // minimum over firms of the per-firm profit ratio
    Gamma gamma_U;  // welfare ratio
    Gamma gamma_S;  // surplus ratio
    double bound_profit = 1.0;
    bool profit_bound_ok = true;
    bool surplus_bound_ok = true;
};

// Additive slack on bound-compliance checks, absorbing solver tolerance.
inline constexpr double kBoundSlack = 1e-6;

// Solves the game before and after the shock and fills a full report.
ShockReport shock_report(const Game& game, const PriceShock& shock,
                         const SolveOptions& opts = {});

// Report assembled from already-computed equilibria (no re-solve).
ShockReport make_shock_report(const Game& game, const PriceShock& shock,
                              const EquilibriumResult& pre, const EquilibriumResult& post);

// Worst-case profit ratio bound for an n-firm game: 1 - (n-1)^2 / (4 n^2),
// nonincreasing in n with limit 3/4.
double profit_bound(std::size_t n);

// Welfare ratio attained by the tight welfare instance:
// 1 - (n-1)^2 / (4 (n^2 + n - 1)).
double welfare_ratio_formula(std::size_t n);

// Worst-case surplus ratio bound, exactly 5/6.
double surplus_bound();

// Effect of taking a nonnegative shock back: the shocked game is solved, the
// shock is removed again, and the objective is compared across the two fresh
// solves. For the per-firm objective this is the maximum gain across firms,
// the reciprocal of the minimum loss the forward shock causes.
Gamma negative_shock_ratio(const Game& game, const PriceShock& shock, Objective objective,
                           const SolveOptions& opts = {});

struct NegativeShockRatios {
    Gamma u, U, S;
};
NegativeShockRatios negative_shock_ratios(const Game& game, const PriceShock& shock,
                                          const SolveOptions& opts = {});

// Ratio post/pre with zero-baseline detection against the magnitude of the
// two values themselves.
Gamma ratio_gamma(double pre, double post);

// Minimum (take_max = false) or maximum (take_max = true) per-firm ratio of
// post over pre profits; zero-baseline firms contribute a ratio of 1 and mark
// the status.
Gamma profit_ratio_extremum(const std::vector<double>& pre, const std::vector<double>& post,
                            bool take_max);

}  // namespace cournot

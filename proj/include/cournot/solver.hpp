#pragma once

#include <optional>
#include <vector>

#include "cournot/model.hpp"

namespace cournot {

struct SolveOptions {
    double tol = 1e-10;      // sup-norm profile change per sweep to stop iterating
    double kkt_tol = 1e-8;   // complementarity residual required to declare convergence
    double damping = 1.0;    // step toward the best response, in (0, 1]
    long max_iters = 10000;  // full round-robin sweeps
    std::optional<QuantityProfile> initial;  // default all-zero
};

struct EquilibriumResult {
    QuantityProfile profile;
    long iterations = 0;
    double kkt_residual = 0.0;
    bool converged = false;
};

// Firm i's profit-maximizing quantities given the other firms' quantities in
// `others` (firm i's own entries are ignored). Returns one quantity per
// market index, zero off the firm's accessible set.
//
// The optimum is found by bisection on the common marginal level: on a market
// with decreasing price the candidate quantity at level lambda is
// max(0, (a_m - lambda) / (2 r_m)) with a_m the firm's residual intercept, a
// nonincreasing function of lambda, while the firm's willing supply
// (marginal cost inverse, clipped by capacity) is nondecreasing. A
// constant-price market absorbs whatever total the firm still wants at that
// price, clipped to capacity; exact indifference resolves to zero quantity
// there.
std::vector<double> best_response(const Game& game, std::size_t firm,
                                  const QuantityProfile& others,
                                  const PriceShock* shock = nullptr);

// Maximum complementarity violation over all (firm, market) pairs:
//   active quantity:  |marginal revenue - marginal cost - mu|
//   zero quantity:    max(0, marginal revenue - marginal cost - mu)
// where mu is the firm's capacity multiplier, estimated from its served
// markets when the firm sits at capacity. Works for affine and concave
// anchor-based prices.
double kkt_residual(const Game& game, const QuantityProfile& profile,
                    const PriceShock* shock = nullptr);

// Round-robin damped best responses from the initial profile until the
// per-sweep sup-norm change drops below tol and the KKT residual certifies the
// profile. Throws NonConvergenceError when max_iters sweeps are exhausted.
EquilibriumResult solve_equilibrium(const Game& game, const PriceShock* shock = nullptr,
                                    const SolveOptions& opts = {});

// Options with damping and iteration budget adjusted to the instance size;
// many-firm games need small steps to keep the shared-market feedback stable.
SolveOptions tuned_options(const Game& game);

}  // namespace cournot

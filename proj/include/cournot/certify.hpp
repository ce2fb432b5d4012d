#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cournot/instances.hpp"
#include "cournot/model.hpp"
#include "cournot/shock.hpp"
#include "cournot/solver.hpp"

namespace cournot {

struct CheckResult {
    std::string name;
    bool pass = true;
    double slack = 0.0;  // worst observed margin; its sign convention is per check
    std::string detail;
};

struct CertificateReport {
    std::string subject;
    bool pass = true;
    std::uint64_t seed = 0;
    int trials = 0;
    int converged = 0;
    int non_converged = 0;
    int all_gain = 0;       // trials where every firm weakly gained
    int zero_baseline = 0;  // trials with some zero-baseline ratio
    std::vector<CheckResult> checks;
    std::string failing_game_json;  // first offending game + shock, replayable

    void add(CheckResult c) {
        pass = pass && c.pass;
        checks.push_back(std::move(c));
    }
};

// Residual above which a profile does not count as a certified equilibrium.
inline constexpr double kCertifyTol = 1e-8;
// Stated closed-form equilibria must satisfy complementarity this tightly.
inline constexpr double kStatedProfileTol = 1e-9;

struct MonotonicitySlacks {
    double price = 0.0;     // min over markets of shocked price minus original price
    double quantity = 0.0;  // min over firms of total quantity increase
};

// Both slacks must be >= -kCertifyTol for equilibria of a game and its
// nonnegatively shocked version. Inputs must be certified equilibria.
MonotonicitySlacks check_monotonicity(const Game& game, const PriceShock& shock,
                                      const QuantityProfile& x, const QuantityProfile& y,
                                      double certified_tol = kCertifyTol);

// Max over firms of the first-order optimality sum at the shocked equilibrium
// in the direction of the original one; must be <= kCertifyTol.
double check_variational_inequality(const Game& game, const PriceShock& shock,
                                    const QuantityProfile& x, const QuantityProfile& y,
                                    double certified_tol = kCertifyTol);

// Surplus of an unshocked equilibrium minus 3/2 sum_m r_m q_{i,m}^2; must be
// >= -kCertifyTol.
double check_surplus_floor(const Game& game, const QuantityProfile& x,
                           double certified_tol = kCertifyTol);

// Checks a named instance end to end: stated profiles satisfy complementarity,
// ratios evaluated at the stated profiles match the closed forms, and (for
// affine games) the solver reproduces profiles and ratios. Failures land in
// the report; this never throws.
CertificateReport verify_named_instance(const NamedInstance& inst);

// Solver settings used by the certification sweep.
SolveOptions suite_options();

// Seeded sweep over random games and shocks running uniqueness, monotonicity,
// variational-inequality, surplus-floor, duality and bound-compliance checks.
// Non-convergent trials are counted and skipped; any check failing on a
// converged trial fails the suite.
CertificateReport certify_suite(std::uint64_t seed, int trials,
                                const RandomGameConfig& config = {},
                                const SolveOptions& opts = suite_options());

}  // namespace cournot

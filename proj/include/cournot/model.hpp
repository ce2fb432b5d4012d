#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cournot/concave_price.hpp"

namespace cournot {

// Production cost of a firm as a function of its total quantity:
//   zero       c(q) = 0
//   linear     c(q) = b q
//   quadratic  c(q) = a q^2 + b q
// An optional capacity makes any larger total quantity infeasible.
enum class CostKind { zero, linear, quadratic };

struct CostSpec {
    CostKind kind = CostKind::zero;
    double a = 0.0;
    double b = 0.0;
    std::optional<double> cap;

    double value(double q) const;     // throws InfeasibleError outside [0, cap]
    double marginal(double q) const;  // c'(q), nondecreasing

    // Smallest total quantity at which the marginal cost reaches `level`;
    // nullopt when it never does (flat marginal cost below the level).
    std::optional<double> quantity_reaching_marginal(double level) const;

    bool strictly_convex() const { return kind == CostKind::quadratic && a > 0.0; }

    static CostSpec zero_cost(std::optional<double> cap = {});
    static CostSpec linear(double b, std::optional<double> cap = {});
    static CostSpec quadratic(double a, double b, std::optional<double> cap = {});

    bool operator==(const CostSpec&) const = default;
};

// A market with inverse demand p - r q. A zero slope models a constant-price
// market and is admitted only when a single firm serves it. A concave anchor
// curve, when present, replaces the affine form entirely.
struct Market {
    std::string id;
    double p = 0.0;
    double r = 0.0;
    std::optional<ConcaveAnchorPrice> concave;

    bool affine() const { return !concave.has_value(); }
    double price_at(double q) const;  // unshocked price at total quantity q
    double slope_at(double q) const;  // derivative of the price at q (-r when affine)

    bool operator==(const Market&) const = default;
};

struct Firm {
    std::string id;
    std::vector<std::string> markets;  // ids of accessible markets
    CostSpec cost;

    bool operator==(const Firm&) const = default;
};

// Additive shift of market price intercepts, keyed by market id; missing ids
// mean zero. Regular shocks are nonnegative; negated shocks appear only when
// undoing a shock, and application still requires p + delta >= 0.
struct PriceShock {
    std::map<std::string, double> delta;

    double at(const std::string& market_id) const;
    bool nonnegative() const;
    PriceShock negated() const;

    bool operator==(const PriceShock&) const = default;
};

// Immutable multimarket oligopoly. Construction validates:
//  - unique, nonempty ids; at least one firm; firms serve >= 1 existing market
//  - finite p >= 0, r >= 0 on every market
//  - a zero-slope market has exactly one firm with access
//  - a firm with access to a zero-slope market has strictly convex cost or a
//    finite capacity (otherwise its best response can be unbounded)
class Game {
  public:
    Game(std::vector<Market> markets, std::vector<Firm> firms);

    std::size_t market_count() const { return markets_.size(); }
    std::size_t firm_count() const { return firms_.size(); }
    const Market& market(std::size_t m) const { return markets_[m]; }
    const Firm& firm(std::size_t i) const { return firms_[i]; }
    const std::vector<Market>& markets() const { return markets_; }
    const std::vector<Firm>& firms() const { return firms_; }

    std::size_t market_index(const std::string& id) const;  // throws UnknownIdError
    std::size_t firm_index(const std::string& id) const;    // throws UnknownIdError

    bool has_access(std::size_t i, std::size_t m) const { return access_[i * markets_.size() + m]; }
    const std::vector<std::size_t>& accessible_markets(std::size_t i) const { return access_lists_[i]; }

    bool all_affine() const;

    bool operator==(const Game& other) const {
        return markets_ == other.markets_ && firms_ == other.firms_;
    }

  private:
    std::vector<Market> markets_;
    std::vector<Firm> firms_;
    std::map<std::string, std::size_t> market_idx_;
    std::map<std::string, std::size_t> firm_idx_;
    std::vector<char> access_;  // firm-major incidence
    std::vector<std::vector<std::size_t>> access_lists_;
    std::vector<std::vector<std::size_t>> eligible_;
};

// Per-firm, per-market quantities, dense over (firm index, market index).
// Entries off a firm's accessible set stay zero.
class QuantityProfile {
  public:
    QuantityProfile() = default;
    QuantityProfile(std::size_t firms, std::size_t markets)
        : firms_(firms), markets_(markets), q_(firms * markets, 0.0) {}

    double operator()(std::size_t i, std::size_t m) const { return q_[i * markets_ + m]; }
    void set(std::size_t i, std::size_t m, double v) { q_[i * markets_ + m] = v; }

    double firm_total(std::size_t i) const;
    double market_total(std::size_t m) const;

    std::size_t firm_count() const { return firms_; }
    std::size_t market_count() const { return markets_; }

    double sup_distance(const QuantityProfile& other) const;

    bool operator==(const QuantityProfile&) const = default;

  private:
    std::size_t firms_ = 0;
    std::size_t markets_ = 0;
    std::vector<double> q_;
};

// Throws InfeasibleError on negative entries, production on inaccessible
// markets, or a firm total above its capacity (small rounding slack allowed).
void validate_profile(const Game& game, const QuantityProfile& profile);

// Price on market m at total quantity q_m, optionally shifted by a shock.
double price(const Game& game, std::size_t m, double market_quantity,
             const PriceShock* shock = nullptr);
double price(const Game& game, const std::string& market_id, double market_quantity,
             const PriceShock* shock = nullptr);

// Derivative of firm i's revenue on market m with respect to its own quantity.
double marginal_revenue(const Game& game, std::size_t i, std::size_t m,
                        const QuantityProfile& profile, const PriceShock* shock = nullptr);
double marginal_revenue(const Game& game, const std::string& firm_id,
                        const std::string& market_id, const QuantityProfile& profile,
                        const PriceShock* shock = nullptr);

double cost(const Firm& firm, double quantity);
double marginal_cost(const Firm& firm, double quantity);

// Revenue across the firm's markets minus production cost.
double profit(const Game& game, std::size_t i, const QuantityProfile& profile,
              const PriceShock* shock = nullptr);
double profit(const Game& game, const std::string& firm_id, const QuantityProfile& profile,
              const PriceShock* shock = nullptr);

// Sum of all firms' profits.
double welfare(const Game& game, const QuantityProfile& profile,
               const PriceShock* shock = nullptr);

// Buyers' value (integral of the price curves) minus total production cost.
// Defined for affine markets only; satisfies surplus = welfare + sum r q^2 / 2.
double surplus(const Game& game, const QuantityProfile& profile,
               const PriceShock* shock = nullptr);

// New game with intercepts p + delta. Deltas may be negative as long as the
// resulting intercept stays nonnegative; unknown market ids are rejected.
Game apply_shock(const Game& game, const PriceShock& shock);

}  // namespace cournot

#include "cournot/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cournot/errors.hpp"

namespace cournot {

namespace {

void require_finite(double x, const std::string& what) {
    if (!std::isfinite(x)) throw ValidationError(what + " must be finite");
}

}  // namespace

// ---------------------------------------------------------------------------
// CostSpec

CostSpec CostSpec::zero_cost(std::optional<double> cap) {
    return CostSpec{CostKind::zero, 0.0, 0.0, cap};
}

CostSpec CostSpec::linear(double b, std::optional<double> cap) {
    return CostSpec{CostKind::linear, 0.0, b, cap};
}

CostSpec CostSpec::quadratic(double a, double b, std::optional<double> cap) {
    return CostSpec{CostKind::quadratic, a, b, cap};
}

double CostSpec::value(double q) const {
    if (q < 0.0 || !std::isfinite(q))
        throw InfeasibleError("negative or non-finite quantity in cost evaluation");
    if (cap && q > *cap * (1.0 + 1e-12) + 1e-12)
        throw InfeasibleError("quantity " + std::to_string(q) + " above capacity " +
                              std::to_string(*cap));
    switch (kind) {
        case CostKind::zero: return 0.0;
        case CostKind::linear: return b * q;
        case CostKind::quadratic: return a * q * q + b * q;
    }
    return 0.0;
}

double CostSpec::marginal(double q) const {
    if (q < 0.0 || !std::isfinite(q))
        throw InfeasibleError("negative or non-finite quantity in marginal cost evaluation");
    if (cap && q > *cap * (1.0 + 1e-12) + 1e-12)
        throw InfeasibleError("quantity above capacity in marginal cost evaluation");
    switch (kind) {
        case CostKind::zero: return 0.0;
        case CostKind::linear: return b;
        case CostKind::quadratic: return 2.0 * a * q + b;
    }
    return 0.0;
}

std::optional<double> CostSpec::quantity_reaching_marginal(double level) const {
    switch (kind) {
        case CostKind::zero:
            if (level <= 0.0) return 0.0;
            return std::nullopt;
        case CostKind::linear:
            if (b >= level) return 0.0;
            return std::nullopt;
        case CostKind::quadratic:
            if (a <= 0.0) {  // degenerate quadratic behaves like linear
                if (b >= level) return 0.0;
                return std::nullopt;
            }
            return std::max(0.0, (level - b) / (2.0 * a));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Market

double Market::price_at(double q) const {
    if (concave) return concave->value(q);
    return p - r * q;
}

double Market::slope_at(double q) const {
    if (concave) return concave->slope(q);
    return -r;
}

// ---------------------------------------------------------------------------
// PriceShock

double PriceShock::at(const std::string& market_id) const {
    auto it = delta.find(market_id);
    return it == delta.end() ? 0.0 : it->second;
}

bool PriceShock::nonnegative() const {
    for (const auto& [id, d] : delta)
        if (d < 0.0) return false;
    return true;
}

PriceShock PriceShock::negated() const {
    PriceShock out;
    for (const auto& [id, d] : delta) out.delta[id] = -d;
    return out;
}

// ---------------------------------------------------------------------------
// Game

Game::Game(std::vector<Market> markets, std::vector<Firm> firms)
    : markets_(std::move(markets)), firms_(std::move(firms)) {
    if (firms_.empty()) throw ValidationError("game needs at least one firm");
    if (markets_.empty()) throw ValidationError("game needs at least one market");

    for (std::size_t m = 0; m < markets_.size(); ++m) {
        const Market& mk = markets_[m];
        if (mk.id.empty()) throw ValidationError("market with empty id");
        if (!market_idx_.emplace(mk.id, m).second)
            throw ValidationError("duplicate market id '" + mk.id + "'");
        if (mk.affine()) {
            require_finite(mk.p, "market '" + mk.id + "' intercept");
            require_finite(mk.r, "market '" + mk.id + "' slope");
            if (mk.p < 0.0) throw ValidationError("market '" + mk.id + "' has negative intercept");
            if (mk.r < 0.0) throw ValidationError("market '" + mk.id + "' has negative slope");
        }
    }
    for (std::size_t i = 0; i < firms_.size(); ++i) {
        const Firm& f = firms_[i];
        if (f.id.empty()) throw ValidationError("firm with empty id");
        if (!firm_idx_.emplace(f.id, i).second)
            throw ValidationError("duplicate firm id '" + f.id + "'");
        if (f.markets.empty())
            throw ValidationError("firm '" + f.id + "' serves no market");
        if (f.cost.a < 0.0 || f.cost.b < 0.0)
            throw ValidationError("firm '" + f.id + "' has negative cost coefficients");
        if (f.cost.cap && !(*f.cost.cap > 0.0))
            throw ValidationError("firm '" + f.id + "' has nonpositive capacity");
    }

    access_.assign(firms_.size() * markets_.size(), 0);
    access_lists_.resize(firms_.size());
    eligible_.resize(markets_.size());
    for (std::size_t i = 0; i < firms_.size(); ++i) {
        std::set<std::string> seen;
        for (const auto& id : firms_[i].markets) {
            auto it = market_idx_.find(id);
            if (it == market_idx_.end())
                throw ValidationError("firm '" + firms_[i].id + "' references unknown market '" +
                                      id + "'");
            if (!seen.insert(id).second)
                throw ValidationError("firm '" + firms_[i].id + "' lists market '" + id +
                                      "' twice");
            access_[i * markets_.size() + it->second] = 1;
            access_lists_[i].push_back(it->second);
            eligible_[it->second].push_back(i);
        }
        std::sort(access_lists_[i].begin(), access_lists_[i].end());
    }

    for (std::size_t m = 0; m < markets_.size(); ++m) {
        const Market& mk = markets_[m];
        if (mk.affine() && mk.r == 0.0) {
            if (eligible_[m].size() != 1)
                throw ValidationError("constant-price market '" + mk.id + "' must have exactly " +
                                      "one eligible firm, has " +
                                      std::to_string(eligible_[m].size()));
            const Firm& f = firms_[eligible_[m].front()];
            if (!f.cost.strictly_convex() && !f.cost.cap)
                throw UnboundedError("firm '" + f.id + "' serves constant-price market '" + mk.id +
                                     "' without strictly convex cost or a capacity; its best " +
                                     "response is unbounded");
        }
    }
}

std::size_t Game::market_index(const std::string& id) const {
    auto it = market_idx_.find(id);
    if (it == market_idx_.end()) throw UnknownIdError("unknown market id '" + id + "'");
    return it->second;
}

std::size_t Game::firm_index(const std::string& id) const {
    auto it = firm_idx_.find(id);
    if (it == firm_idx_.end()) throw UnknownIdError("unknown firm id '" + id + "'");
    return it->second;
}

bool Game::all_affine() const {
    return std::all_of(markets_.begin(), markets_.end(),
                       [](const Market& m) { return m.affine(); });
}

// ---------------------------------------------------------------------------
// QuantityProfile

double QuantityProfile::firm_total(std::size_t i) const {
    double s = 0.0;
    for (std::size_t m = 0; m < markets_; ++m) s += q_[i * markets_ + m];
    return s;
}

double QuantityProfile::market_total(std::size_t m) const {
    double s = 0.0;
    for (std::size_t i = 0; i < firms_; ++i) s += q_[i * markets_ + m];
    return s;
}

double QuantityProfile::sup_distance(const QuantityProfile& other) const {
    double d = 0.0;
    for (std::size_t k = 0; k < q_.size(); ++k) d = std::max(d, std::abs(q_[k] - other.q_[k]));
    return d;
}

void validate_profile(const Game& game, const QuantityProfile& profile) {
    if (profile.firm_count() != game.firm_count() ||
        profile.market_count() != game.market_count())
        throw InfeasibleError("profile dimensions do not match the game");
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        for (std::size_t m = 0; m < game.market_count(); ++m) {
            const double q = profile(i, m);
            if (q < 0.0 || !std::isfinite(q))
                throw InfeasibleError("negative or non-finite quantity for firm '" +
                                      game.firm(i).id + "' on market '" + game.market(m).id + "'");
            if (q > 0.0 && !game.has_access(i, m))
                throw InfeasibleError("firm '" + game.firm(i).id +
                                      "' produces on inaccessible market '" + game.market(m).id +
                                      "'");
        }
        const auto& cap = game.firm(i).cost.cap;
        if (cap && profile.firm_total(i) > *cap * (1.0 + 1e-12) + 1e-12)
            throw InfeasibleError("firm '" + game.firm(i).id + "' exceeds its capacity");
    }
}

// ---------------------------------------------------------------------------
// Evaluation

double price(const Game& game, std::size_t m, double market_quantity, const PriceShock* shock) {
    const Market& mk = game.market(m);
    const double d = shock ? shock->at(mk.id) : 0.0;
    return mk.price_at(market_quantity) + d;
}

double price(const Game& game, const std::string& market_id, double market_quantity,
             const PriceShock* shock) {
    return price(game, game.market_index(market_id), market_quantity, shock);
}

double marginal_revenue(const Game& game, std::size_t i, std::size_t m,
                        const QuantityProfile& profile, const PriceShock* shock) {
    if (!game.has_access(i, m))
        throw InfeasibleError("firm '" + game.firm(i).id + "' has no access to market '" +
                              game.market(m).id + "'");
    const double q_m = profile.market_total(m);
    const Market& mk = game.market(m);
    const double d = shock ? shock->at(mk.id) : 0.0;
    return mk.price_at(q_m) + d + mk.slope_at(q_m) * profile(i, m);
}

double marginal_revenue(const Game& game, const std::string& firm_id,
                        const std::string& market_id, const QuantityProfile& profile,
                        const PriceShock* shock) {
    return marginal_revenue(game, game.firm_index(firm_id), game.market_index(market_id), profile,
                            shock);
}

double cost(const Firm& firm, double quantity) { return firm.cost.value(quantity); }

double marginal_cost(const Firm& firm, double quantity) { return firm.cost.marginal(quantity); }

double profit(const Game& game, std::size_t i, const QuantityProfile& profile,
              const PriceShock* shock) {
    validate_profile(game, profile);
    double revenue = 0.0;
    for (std::size_t m : game.accessible_markets(i))
        revenue += price(game, m, profile.market_total(m), shock) * profile(i, m);
    return revenue - cost(game.firm(i), profile.firm_total(i));
}

double profit(const Game& game, const std::string& firm_id, const QuantityProfile& profile,
              const PriceShock* shock) {
    return profit(game, game.firm_index(firm_id), profile, shock);
}

double welfare(const Game& game, const QuantityProfile& profile, const PriceShock* shock) {
    double total = 0.0;
    for (std::size_t i = 0; i < game.firm_count(); ++i) total += profit(game, i, profile, shock);
    return total;
}

double surplus(const Game& game, const QuantityProfile& profile, const PriceShock* shock) {
    if (!game.all_affine())
        throw UnsupportedError("surplus is defined for affine price functions only");
    validate_profile(game, profile);
    double s = 0.0;
    for (std::size_t m = 0; m < game.market_count(); ++m) {
        const Market& mk = game.market(m);
        const double d = shock ? shock->at(mk.id) : 0.0;
        const double q = profile.market_total(m);
        s += (mk.p + d) * q - 0.5 * mk.r * q * q;
    }
    for (std::size_t i = 0; i < game.firm_count(); ++i)
        s -= cost(game.firm(i), profile.firm_total(i));
    return s;
}

Game apply_shock(const Game& game, const PriceShock& shock) {
    for (const auto& [id, d] : shock.delta) {
        (void)game.market_index(id);  // unknown ids rejected
        if (!std::isfinite(d)) throw ValidationError("shock on market '" + id + "' is not finite");
    }
    std::vector<Market> markets = game.markets();
    for (auto& mk : markets) {
        const double d = shock.at(mk.id);
        if (d == 0.0) continue;
        if (mk.concave) {
            std::vector<PriceAnchor> shifted = mk.concave->anchors();
            for (auto& a : shifted) a.v += d;
            mk.concave = ConcaveAnchorPrice(std::move(shifted));
        } else {
            if (mk.p + d < 0.0)
                throw ValidationError("shock drives market '" + mk.id +
                                      "' intercept below zero");
            mk.p += d;
        }
    }
    return Game(std::move(markets), game.firms());
}

}  // namespace cournot

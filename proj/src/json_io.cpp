#include "cournot/json_io.hpp"

#include <cstdint>

#include "cournot/errors.hpp"

namespace cournot {

using nlohmann::json;

namespace {

double number_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ValidationError(std::string("expected numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw ValidationError(std::string("expected string field '") + key + "'");
    return j.at(key).get<std::string>();
}

json cost_to_json(const CostSpec& c) {
    json j;
    switch (c.kind) {
        case CostKind::zero: j["kind"] = "zero"; break;
        case CostKind::linear:
            j["kind"] = "linear";
            j["b"] = c.b;
            break;
        case CostKind::quadratic:
            j["kind"] = "quadratic";
            j["a"] = c.a;
            j["b"] = c.b;
            break;
    }
    j["cap"] = c.cap ? json(*c.cap) : json(nullptr);
    return j;
}

CostSpec cost_from_json(const json& j) {
    const std::string kind = string_field(j, "kind");
    CostSpec c;
    if (kind == "zero") {
        c = CostSpec::zero_cost();
    } else if (kind == "linear") {
        c = CostSpec::linear(number_field(j, "b"));
    } else if (kind == "quadratic") {
        c = CostSpec::quadratic(number_field(j, "a"), number_field(j, "b"));
    } else {
        throw ValidationError("unknown cost kind '" + kind + "'");
    }
    if (j.contains("cap") && !j.at("cap").is_null()) c.cap = number_field(j, "cap");
    return c;
}

}  // namespace

json game_to_json(const Game& game) {
    json markets = json::array();
    for (const auto& m : game.markets()) {
        json jm;
        jm["id"] = m.id;
        if (m.affine()) {
            jm["p"] = m.p;
            jm["r"] = m.r;
        } else {
            json anchors = json::array();
            for (const auto& a : m.concave->anchors())
                anchors.push_back({{"q", a.q}, {"v", a.v}, {"s", a.s}});
            jm["anchors"] = anchors;
        }
        markets.push_back(jm);
    }
    json firms = json::array();
    for (const auto& f : game.firms()) {
        firms.push_back({{"id", f.id}, {"markets", f.markets}, {"cost", cost_to_json(f.cost)}});
    }
    return json{{"markets", markets}, {"firms", firms}};
}

Game game_from_json(const json& j) {
    if (!j.is_object() || !j.contains("markets") || !j.contains("firms"))
        throw ValidationError("game JSON needs 'markets' and 'firms' arrays");
    std::vector<Market> markets;
    for (const auto& jm : j.at("markets")) {
        Market m;
        m.id = string_field(jm, "id");
        if (jm.contains("anchors")) {
            std::vector<PriceAnchor> anchors;
            for (const auto& ja : jm.at("anchors"))
                anchors.push_back(
                    {number_field(ja, "q"), number_field(ja, "v"), number_field(ja, "s")});
            m.concave = ConcaveAnchorPrice(std::move(anchors));
        } else {
            m.p = number_field(jm, "p");
            m.r = number_field(jm, "r");
        }
        markets.push_back(std::move(m));
    }
    std::vector<Firm> firms;
    for (const auto& jf : j.at("firms")) {
        Firm f;
        f.id = string_field(jf, "id");
        if (!jf.contains("markets") || !jf.at("markets").is_array())
            throw ValidationError("firm '" + f.id + "' needs a 'markets' array");
        for (const auto& id : jf.at("markets")) f.markets.push_back(id.get<std::string>());
        if (!jf.contains("cost")) throw ValidationError("firm '" + f.id + "' needs a 'cost'");
        f.cost = cost_from_json(jf.at("cost"));
        firms.push_back(std::move(f));
    }
    return Game(std::move(markets), std::move(firms));
}

json shock_to_json(const PriceShock& shock) {
    json j = json::object();
    for (const auto& [id, d] : shock.delta) j[id] = d;
    return j;
}

PriceShock shock_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("shock JSON must be an object of market -> delta");
    PriceShock s;
    for (const auto& [id, d] : j.items()) {
        if (!d.is_number()) throw ValidationError("shock for market '" + id + "' must be numeric");
        s.delta[id] = d.get<double>();
    }
    return s;
}

json profile_to_json(const Game& game, const QuantityProfile& profile) {
    json j = json::object();
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        json row = json::object();
        for (std::size_t m : game.accessible_markets(i))
            row[game.market(m).id] = profile(i, m);
        j[game.firm(i).id] = row;
    }
    return j;
}

QuantityProfile profile_from_json(const Game& game, const json& j) {
    QuantityProfile prof(game.firm_count(), game.market_count());
    if (!j.is_object()) throw ValidationError("profile JSON must be an object");
    for (const auto& [firm_id, row] : j.items()) {
        const std::size_t i = game.firm_index(firm_id);
        for (const auto& [market_id, q] : row.items()) {
            if (!q.is_number())
                throw ValidationError("quantity for '" + firm_id + "'/'" + market_id +
                                      "' must be numeric");
            prof.set(i, game.market_index(market_id), q.get<double>());
        }
    }
    validate_profile(game, prof);
    return prof;
}

json result_to_json(const Game& game, const EquilibriumResult& result) {
    return json{{"profile", profile_to_json(game, result.profile)},
                {"iterations", result.iterations},
                {"kkt_residual", result.kkt_residual},
                {"converged", result.converged}};
}

json gamma_to_json(const Gamma& g) {
    json j{{"status", to_string(g.status)}};
    if (std::isfinite(g.value))
        j["value"] = g.value;
    else
        j["value"] = nullptr;
    return j;
}

json report_to_json(const Game& game, const ShockReport& report) {
    json profits_pre = json::object(), profits_post = json::object();
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        profits_pre[game.firm(i).id] = report.profit_pre[i];
        profits_post[game.firm(i).id] = report.profit_post[i];
    }
    return json{{"game_digest", report.game_digest},
                {"n_firms", report.n_firms},
                {"shock", shock_to_json(report.shock)},
                {"pre", result_to_json(game, report.pre)},
                {"post", result_to_json(game, report.post)},
                {"profit_pre", profits_pre},
                {"profit_post", profits_post},
                {"welfare_pre", report.welfare_pre},
                {"welfare_post", report.welfare_post},
                {"surplus_pre", report.surplus_pre},
                {"surplus_post", report.surplus_post},
                {"gamma_u", gamma_to_json(report.gamma_u)},
                {"gamma_U", gamma_to_json(report.gamma_U)},
                {"gamma_S", gamma_to_json(report.gamma_S)},
                {"bound_profit", report.bound_profit},
                {"profit_bound_ok", report.profit_bound_ok},
                {"surplus_bound_ok", report.surplus_bound_ok}};
}

json certificate_to_json(const CertificateReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back(
            {{"name", c.name}, {"pass", c.pass}, {"slack", c.slack}, {"detail", c.detail}});
    json j{{"subject", report.subject},
           {"pass", report.pass},
           {"checks", checks}};
    if (report.trials > 0) {
        j["seed"] = report.seed;
        j["trials"] = report.trials;
        j["converged"] = report.converged;
        j["non_converged"] = report.non_converged;
        j["all_gain"] = report.all_gain;
        j["zero_baseline"] = report.zero_baseline;
        j["failing_game"] = report.failing_game_json.empty()
                                ? json(nullptr)
                                : json::parse(report.failing_game_json);
    }
    return j;
}

json instance_sidecar_json(const NamedInstance& inst) {
    json j{{"name", inst.name}, {"shock", shock_to_json(inst.shock)}};
    j["stated_pre"] = inst.stated_pre ? profile_to_json(inst.game, *inst.stated_pre) : json(nullptr);
    j["stated_post"] =
        inst.stated_post ? profile_to_json(inst.game, *inst.stated_post) : json(nullptr);
    json expected = json::array();
    for (const auto& eg : inst.expected) {
        json e{{"objective", to_string(eg.objective)}, {"value", eg.value}};
        if (eg.firm) e["firm"] = *eg.firm;
        expected.push_back(e);
    }
    j["expected_gamma"] = expected;
    return j;
}

RandomGameConfig config_from_json(const json& j) {
    RandomGameConfig c;
    if (!j.is_object()) throw ValidationError("config JSON must be an object");
    const auto get_int = [&](const char* key, int& out) {
        if (j.contains(key)) out = j.at(key).get<int>();
    };
    const auto get_num = [&](const char* key, double& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    get_int("n_max", c.n_max);
    get_int("m_max", c.m_max);
    get_num("p_min", c.p_min);
    get_num("p_max", c.p_max);
    get_num("r_min", c.r_min);
    get_num("r_max", c.r_max);
    get_num("weight_zero", c.weight_zero);
    get_num("weight_linear", c.weight_linear);
    get_num("weight_quadratic", c.weight_quadratic);
    get_num("cap_probability", c.cap_probability);
    get_num("monopoly_market_probability", c.monopoly_market_probability);
    return c;
}

std::string game_digest(const Game& game) {
    const std::string s = game_to_json(game).dump();
    std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string failure_artifact_json(const Game& game, const PriceShock& shock,
                                  const std::string& check, int trial) {
    return json{{"check", check},
                {"trial", trial},
                {"game", game_to_json(game)},
                {"shock", shock_to_json(shock)}}
        .dump();
}

}  // namespace cournot

// Command-line front end: solve games, report shock effects, reproduce the
// named worst-case instances, sweep instance families, and run the
// certification suite.
//
// Exit codes: 0 success, 1 check failure, 2 computational failure, 64 usage
// or input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cournot/certify.hpp"
#include "cournot/errors.hpp"
#include "cournot/instances.hpp"
#include "cournot/json_io.hpp"
#include "cournot/model.hpp"
#include "cournot/shock.hpp"
#include "cournot/solver.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitComputational = 2;
constexpr int kExitUsage = 64;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cournot::ValidationError("cannot open '" + path + "'");
    return json::parse(in);  // parse errors carry the byte position
}

struct SolverFlags {
    std::optional<double> tol, kkt_tol, damping;
    std::optional<long> max_iters;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", tol, "profile change tolerance per sweep");
        cmd->add_option("--kkt-tol", kkt_tol, "complementarity residual tolerance");
        cmd->add_option("--damping", damping, "best-response step in (0,1]");
        cmd->add_option("--max-iters", max_iters, "sweep budget");
    }
    cournot::SolveOptions apply(const cournot::Game& game) const {
        cournot::SolveOptions o = cournot::tuned_options(game);
        if (tol) o.tol = *tol;
        if (kkt_tol) o.kkt_tol = *kkt_tol;
        if (damping) o.damping = *damping;
        if (max_iters) o.max_iters = *max_iters;
        return o;
    }
};

std::string format_gamma(const cournot::Gamma& g) {
    if (g.status != cournot::GammaStatus::finite) return to_string(g.status);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", g.value);
    return buf;
}

void print_report_table(const cournot::Game& game, const cournot::ShockReport& rep) {
    std::printf("firms: %zu   game digest: %s\n", rep.n_firms, rep.game_digest.c_str());
    std::printf("%-12s %18s %18s %12s\n", "firm", "profit before", "profit after", "ratio");
    for (std::size_t i = 0; i < game.firm_count(); ++i) {
        const double before = rep.profit_pre[i];
        const double after = rep.profit_post[i];
        char ratio[32];
        if (before != 0.0)
            std::snprintf(ratio, sizeof(ratio), "%.6f", after / before);
        else
            std::snprintf(ratio, sizeof(ratio), "-");
        std::printf("%-12s %18.6f %18.6f %12s\n", game.firm(i).id.c_str(), before, after, ratio);
    }
    std::printf("welfare: %.6f -> %.6f\n", rep.welfare_pre, rep.welfare_post);
    std::printf("surplus: %.6f -> %.6f\n", rep.surplus_pre, rep.surplus_post);
    std::printf("gamma_u = %s   gamma_U = %s   gamma_S = %s\n",
                format_gamma(rep.gamma_u).c_str(), format_gamma(rep.gamma_U).c_str(),
                format_gamma(rep.gamma_S).c_str());
    std::printf("profit bound 1-(n-1)^2/4n^2 = %.10g  [%s]\n", rep.bound_profit,
                rep.profit_bound_ok ? "ok" : "VIOLATED");
    std::printf("surplus bound 5/6           = %.10g  [%s]\n", cournot::surplus_bound(),
                rep.surplus_bound_ok ? "ok" : "VIOLATED");
}

cournot::NamedInstance build_instance(const std::string& name, int n, int k) {
    if (name == "bulow") return cournot::bulow_example();
    if (name == "profit-worstcase") return cournot::profit_worstcase(n);
    if (name == "welfare-worstcase") return cournot::welfare_worstcase(n);
    if (name == "concave-small") return cournot::concave_small_shock(k);
    if (name == "concave-two-firm") return cournot::concave_two_firm(k);
    throw cournot::ValidationError("unknown instance '" + name + "'");
}

int print_certificate(const cournot::CertificateReport& rep) {
    std::cout << cournot::certificate_to_json(rep).dump(2) << "\n";
    return rep.pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multimarket Cournot equilibria and price-shock comparative statics"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "compute the equilibrium of a game");
    std::string solve_game_path, solve_shock_path;
    SolverFlags solve_flags;
    solve_cmd->add_option("game", solve_game_path, "game JSON file")->required();
    solve_cmd->add_option("--shock", solve_shock_path, "shock JSON file");
    solve_flags.attach(solve_cmd);

    // shock
    auto* shock_cmd = app.add_subcommand("shock", "full before/after shock report");
    std::string shock_game_path, shock_shock_path;
    bool shock_table = false;
    SolverFlags shock_flags;
    shock_cmd->add_option("game", shock_game_path, "game JSON file")->required();
    shock_cmd->add_option("shock", shock_shock_path, "shock JSON file")->required();
    shock_cmd->add_flag("--table", shock_table, "human-readable summary");
    shock_flags.attach(shock_cmd);

    // instance
    auto* inst_cmd = app.add_subcommand("instance", "build and verify a named instance");
    std::string inst_name, inst_emit;
    int inst_n = 2, inst_k = 10;
    inst_cmd
        ->add_option("name", inst_name,
                     "bulow | profit-worstcase | welfare-worstcase | concave-small | "
                     "concave-two-firm")
        ->required();
    inst_cmd->add_option("--n", inst_n, "firm count for the worst-case families");
    inst_cmd->add_option("--k", inst_k, "sharpness parameter for the concave families");
    inst_cmd->add_option("--emit", inst_emit, "directory for game + sidecar JSON");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "ratio vs. bound across instance sizes");
    std::string sweep_family = "profit-worstcase", sweep_range = "2..10";
    SolverFlags sweep_flags;
    sweep_cmd->add_option("--family", sweep_family, "profit-worstcase | welfare-worstcase");
    sweep_cmd->add_option("--n", sweep_range, "inclusive range, e.g. 2..50");
    sweep_flags.attach(sweep_cmd);

    // certify
    auto* cert_cmd = app.add_subcommand("certify", "seeded random-game certification sweep");
    std::uint64_t cert_seed = 1;
    int cert_trials = 100;
    std::string cert_config_path;
    cert_cmd->add_option("--seed", cert_seed, "sweep seed");
    cert_cmd->add_option("--trials", cert_trials, "number of random games");
    cert_cmd->add_option("--config", cert_config_path, "generator config JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            const cournot::Game game = cournot::game_from_json(load_json(solve_game_path));
            std::optional<cournot::PriceShock> shock;
            if (!solve_shock_path.empty())
                shock = cournot::shock_from_json(load_json(solve_shock_path));
            const auto result = cournot::solve_equilibrium(
                game, shock ? &*shock : nullptr, solve_flags.apply(game));
            std::cout << cournot::result_to_json(game, result).dump(2) << "\n";
            return kExitOk;
        }

        if (*shock_cmd) {
            const cournot::Game game = cournot::game_from_json(load_json(shock_game_path));
            const cournot::PriceShock shock =
                cournot::shock_from_json(load_json(shock_shock_path));
            const auto rep = cournot::shock_report(game, shock, shock_flags.apply(game));
            if (shock_table)
                print_report_table(game, rep);
            else
                std::cout << cournot::report_to_json(game, rep).dump(2) << "\n";
            return kExitOk;
        }

        if (*inst_cmd) {
            const cournot::NamedInstance inst = build_instance(inst_name, inst_n, inst_k);
            if (!inst_emit.empty()) {
                std::filesystem::create_directories(inst_emit);
                const auto base = std::filesystem::path(inst_emit) / inst_name;
                std::ofstream(base.string() + ".game.json")
                    << cournot::game_to_json(inst.game).dump(2) << "\n";
                std::ofstream(base.string() + ".meta.json")
                    << cournot::instance_sidecar_json(inst).dump(2) << "\n";
            }
            return print_certificate(cournot::verify_named_instance(inst));
        }

        if (*sweep_cmd) {
            const auto sep = sweep_range.find("..");
            if (sep == std::string::npos)
                throw cournot::ValidationError("range must look like 2..50");
            const int lo = std::stoi(sweep_range.substr(0, sep));
            const int hi = std::stoi(sweep_range.substr(sep + 2));
            if (lo < 2 || hi < lo)
                throw cournot::ValidationError("range must satisfy 2 <= lo <= hi");
            const bool welfare_family = sweep_family == "welfare-worstcase";
            if (!welfare_family && sweep_family != "profit-worstcase")
                throw cournot::ValidationError("unknown family '" + sweep_family + "'");
            std::printf("%6s %18s %18s %14s\n", "n", welfare_family ? "gamma_U" : "gamma_u",
                        "bound", "slack");
            for (int n = lo; n <= hi; ++n) {
                const auto inst = welfare_family ? cournot::welfare_worstcase(n)
                                                 : cournot::profit_worstcase(n);
                const auto rep =
                    cournot::shock_report(inst.game, inst.shock, sweep_flags.apply(inst.game));
                const double gamma = welfare_family ? rep.gamma_U.value : rep.gamma_u.value;
                const double bound = welfare_family
                                         ? cournot::welfare_ratio_formula(std::size_t(n))
                                         : cournot::profit_bound(std::size_t(n));
                std::printf("%6d %18.12f %18.12f %14.3e\n", n, gamma, bound, gamma - bound);
            }
            return kExitOk;
        }

        if (*cert_cmd) {
            cournot::RandomGameConfig config;
            if (!cert_config_path.empty())
                config = cournot::config_from_json(load_json(cert_config_path));
            return print_certificate(cournot::certify_suite(cert_seed, cert_trials, config));
        }
    } catch (const cournot::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputational;
    } catch (const cournot::UnboundedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputational;
    } catch (const cournot::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputational;
    }
    return kExitUsage;
}

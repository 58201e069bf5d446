#include "randbeta/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "randbeta/counting.hpp"
#include "randbeta/density.hpp"
#include "randbeta/simulate.hpp"
#include "randbeta/tower.hpp"
#include "randbeta/transfer.hpp"
#include "src/io_util.hpp"

namespace randbeta {
namespace {

using Meta = std::map<std::string, std::string>;

void emit(const std::string& payload, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << payload;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(output_path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ContractError("cannot open output path " + output_path);
        os << payload;
    }
    fs::rename(tmp, target);
}

struct GridSpec {
    double start = 0.0;
    double end = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start, &g.end, &g.count, &extra) != 3 ||
        g.count < 1 || !(g.start <= g.end))
        throw CLI::ValidationError("--beta", "grid must be start:end:steps, e.g. 1.1:1.9:9");
    return g;
}

std::string fmt_json_payload(nlohmann::ordered_json j) { return j.dump(2) + "\n"; }

int dispatch_density(bool parry, double beta, int depth, const std::string& format,
                     const std::string& output) {
    const BetaContext ctx(beta);
    const DensityResult d = parry ? parry_density(ctx, depth) : build_density(ctx, depth);
    Meta meta{{"command", parry ? "parry" : "density"},
              {"beta", io::fmt(beta)},
              {"depth", std::to_string(depth)}};
    emit(format == "csv" ? density_csv(d, meta) : density_json(d, meta), output);
    return 0;
}

int dispatch_transfer_check(double beta, const std::string& variant, double tol, int max_iters,
                            int depth, const std::string& output) {
    const BetaContext ctx(beta);
    TransferConfig cfg;
    cfg.fixed_point_tol = tol;
    cfg.max_iters = max_iters;
    cfg.variant = variant == "greedy" ? TransferVariant::greedy : TransferVariant::random;
    const FixedPointResult fp = fixed_point(ctx, cfg);
    const DensityResult formula =
        cfg.variant == TransferVariant::greedy ? parry_density(ctx, depth)
                                               : build_density(ctx, depth);
    nlohmann::ordered_json j;
    j["meta"] = io::meta_json(Meta{{"command", "transfer-check"},
                                   {"beta", io::fmt(beta)},
                                   {"variant", variant},
                                   {"tol", io::fmt(tol)},
                                   {"max_iters", std::to_string(max_iters)},
                                   {"depth", std::to_string(depth)}});
    j["beta"] = beta;
    j["variant"] = variant;
    j["iterations"] = fp.iterations;
    j["residual_l1"] = fp.residual;
    j["converged"] = fp.converged;
    j["l1_vs_formula"] = l1_distance(fp.density, formula.f);
    j["formula_depth"] = formula.depth;
    j["formula_l1_error_bound"] = formula.l1_error;
    emit(fmt_json_payload(std::move(j)), output);
    return 0;
}

int dispatch_count(double beta, double x, int n, const std::string& method,
                   std::uint64_t samples, std::uint64_t seed, const std::string& output) {
    const BetaContext ctx(beta);
    const CountQuery q{x, n};
    Meta meta{{"command", "count"},     {"beta", io::fmt(beta)},
              {"x", io::fmt(x)},        {"n", std::to_string(n)},
              {"method", method},       {"seed", std::to_string(seed)},
              {"samples", std::to_string(samples)}};
    std::string rows = "beta,x,n,method,count,std_error\n";
    double estimate = 0.0, se = 0.0;
    if (method == "mc") {
        const MonteCarloCount mc = count_monte_carlo(ctx, q, samples, seed);
        estimate = mc.estimate;
        se = mc.std_error;
    } else {
        estimate = static_cast<double>(method == "brute" ? count_brute(ctx, q)
                                                         : count_dp(ctx, q));
    }
    rows += io::fmt(beta) + "," + io::fmt(x) + "," + std::to_string(n) + "," + method + "," +
            io::fmt(estimate) + "," + io::fmt(se) + "\n";
    std::cout << io::fmt(estimate) << "\n";
    if (!output.empty()) emit(io::csv_header(meta) + rows, output);
    return 0;
}

int dispatch_growth(double beta, double x, int n, int depth, const std::string& output) {
    const BetaContext ctx(beta);
    const DensityResult d = build_density(ctx, depth);
    const GrowthEstimate g = growth_estimate(ctx, x, n, d);
    const std::uint64_t count = count_dp(ctx, CountQuery{x, n});
    Meta meta{{"command", "growth"},
              {"beta", io::fmt(beta)},
              {"x", io::fmt(x)},
              {"n", std::to_string(n)},
              {"depth", std::to_string(depth)},
              {"exceeds_bound", g.exceeds_bound ? "true" : "false"}};
    emit(growth_csv(ctx, x, g, count, meta), output);
    return 0;
}

int dispatch_tower_check(double beta, int depth, int mass_depth, std::uint64_t samples,
                         std::uint64_t seed, const std::string& output) {
    const BetaContext ctx(beta);
    const VerificationReport rep = verify_measure_preservation(ctx, depth, samples, seed);
    const MassLedger ledger = mass_identity(ctx, mass_depth);
    Meta meta{{"command", "tower-check"},
              {"beta", io::fmt(beta)},
              {"depth", std::to_string(depth)},
              {"mass_depth", std::to_string(mass_depth)},
              {"samples", std::to_string(samples)},
              {"seed", std::to_string(seed)}};
    emit(verification_json(rep, ledger, meta), output);
    return 0;
}

int dispatch_simulate(const SimConfig& cfg, const std::string& output) {
    const SimResult r = run_orbit(cfg);
    Meta meta{{"command", "simulate"},
              {"beta", io::fmt(cfg.beta)},
              {"steps", std::to_string(cfg.steps)},
              {"burn_in", std::to_string(cfg.burn_in)},
              {"bins", std::to_string(cfg.bins)},
              {"seed", std::to_string(cfg.seed)},
              {"x0", io::fmt(cfg.x0)}};
    emit(histogram_csv(r, meta), output);
    return 0;
}

int dispatch_sweep(const std::string& grid_text, int depth, const std::string& what,
                   const std::string& output) {
    const GridSpec grid = parse_grid(grid_text);
    std::vector<double> betas(grid.count);
    for (int i = 0; i < grid.count; ++i)
        betas[i] = grid.count == 1
                       ? grid.start
                       : grid.start + (grid.end - grid.start) * i / (grid.count - 1);

    std::vector<double> results(grid.count);
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(grid.count));
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (int i = static_cast<int>(w); i < grid.count; i += static_cast<int>(workers)) {
                const BetaContext ctx(betas[i]);
                const DensityResult d = build_density(ctx, depth);
                results[i] = what == "C" ? d.C : d.f.measure_of(ctx.s_left, ctx.s_right);
            }
        }));
    }
    for (auto& f : futures) f.get();

    Meta meta{{"command", "sweep"},
              {"beta_grid", grid_text},
              {"depth", std::to_string(depth)},
              {"emit", what}};
    std::string payload = io::csv_header(meta);
    payload += "beta," + std::string(what == "C" ? "C" : "mu_S") + "\n";
    for (int i = 0; i < grid.count; ++i)
        payload += io::fmt(betas[i]) + "," + io::fmt(results[i]) + "\n";
    emit(payload, output);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"invariant densities and expansion counting for random beta-transformations"};
    app.require_subcommand(1);

    double beta = 0.0, x = 0.0, tol = 1e-10, x0 = -1.0;
    int depth = 30, n = 0, max_iters = 500, mass_depth = 30;
    std::uint64_t samples = 1000000, seed = 42, steps = 1000000, burn_in = 1000;
    std::uint32_t bins = 100;
    std::string format = "json", output, method = "dp", variant = "random", emit_what = "muS",
                grid_text;

    auto add_common = [&](CLI::App* cmd, bool needs_beta) {
        if (needs_beta) cmd->add_option("--beta", beta, "parameter in (1,2)")->required();
        cmd->add_option("--output", output, "artifact path (stdout when omitted)");
    };

    auto* cmd_density = app.add_subcommand("density", "invariant density of the random map");
    add_common(cmd_density, true);
    cmd_density->add_option("--depth", depth, "series truncation depth");
    cmd_density->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* cmd_parry = app.add_subcommand("parry", "invariant density of the greedy map");
    add_common(cmd_parry, true);
    cmd_parry->add_option("--depth", depth);
    cmd_parry->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* cmd_transfer = app.add_subcommand("transfer-check",
                                            "transfer-operator fixed point vs the series");
    add_common(cmd_transfer, true);
    cmd_transfer->add_option("--variant", variant)->check(CLI::IsMember({"random", "greedy"}));
    cmd_transfer->add_option("--tol", tol);
    cmd_transfer->add_option("--max-iters", max_iters);
    cmd_transfer->add_option("--depth", depth);

    auto* cmd_count = app.add_subcommand("count", "number of extendable digit prefixes");
    add_common(cmd_count, true);
    cmd_count->add_option("--x", x)->required();
    cmd_count->add_option("--n", n)->required();
    cmd_count->add_option("--method", method)->check(CLI::IsMember({"brute", "dp", "mc"}));
    cmd_count->add_option("--samples", samples);
    cmd_count->add_option("--seed", seed);

    auto* cmd_growth = app.add_subcommand("growth", "branching rate against the a.e. lower bound");
    add_common(cmd_growth, true);
    cmd_growth->add_option("--x", x)->required();
    cmd_growth->add_option("--n", n)->required();
    cmd_growth->add_option("--depth", depth);

    int tower_depth = 12;
    auto* cmd_tower = app.add_subcommand("tower-check", "natural-extension verification");
    add_common(cmd_tower, true);
    cmd_tower->add_option("--depth", tower_depth, "tower truncation depth (<= 22)");
    cmd_tower->add_option("--mass-depth", mass_depth);
    cmd_tower->add_option("--samples", samples);
    cmd_tower->add_option("--seed", seed);

    auto* cmd_sim = app.add_subcommand("simulate", "orbit histogram against the density");
    add_common(cmd_sim, true);
    cmd_sim->add_option("--steps", steps);
    cmd_sim->add_option("--burn-in", burn_in);
    cmd_sim->add_option("--bins", bins);
    cmd_sim->add_option("--seed", seed);
    cmd_sim->add_option("--x0", x0);

    auto* cmd_sweep = app.add_subcommand("sweep", "grid of beta values");
    add_common(cmd_sweep, false);
    cmd_sweep->add_option("--beta", grid_text, "grid start:end:steps")->required();
    cmd_sweep->add_option("--depth", depth);
    cmd_sweep->add_option("--emit", emit_what)->check(CLI::IsMember({"muS", "C"}));

    std::vector<const char*> argv{"randbeta"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (cmd_density->parsed()) return dispatch_density(false, beta, depth, format, output);
        if (cmd_parry->parsed()) return dispatch_density(true, beta, depth, format, output);
        if (cmd_transfer->parsed())
            return dispatch_transfer_check(beta, variant, tol, max_iters, depth, output);
        if (cmd_count->parsed())
            return dispatch_count(beta, x, n, method, samples, seed, output);
        if (cmd_growth->parsed()) return dispatch_growth(beta, x, n, depth, output);
        if (cmd_tower->parsed())
            return dispatch_tower_check(beta, tower_depth, mass_depth, samples, seed, output);
        if (cmd_sim->parsed())
            return dispatch_simulate(SimConfig{beta, steps, burn_in, bins, seed, x0}, output);
        if (cmd_sweep->parsed()) return dispatch_sweep(grid_text, depth, emit_what, output);
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}

}  // namespace randbeta

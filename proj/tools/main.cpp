#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lobexec/closedform.hpp"
#include "lobexec/cost.hpp"
#include "lobexec/dp.hpp"
#include "lobexec/impact.hpp"
#include "lobexec/liquidity.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace lobexec;

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Curve curve_from_json(const json& j, const char* tkey, const char* vkey) {
    Curve c;
    c.times = j.at(tkey).get<std::vector<double>>();
    c.values = j.at(vkey).get<std::vector<double>>();
    return c;
}

LiquidityProfile profile_from_json(const json& cfg) {
    const json& p = cfg.at("profile");
    double horizon = p.at("horizon").get<double>();
    double gamma = p.value("gamma", 0.0);

    Resilience rho = [&] {
        const json& r = p.at("rho");
        if (r.is_number()) return Resilience::constant(r.get<double>());
        return Resilience::tabulated(curve_from_json(r, "t", "rho"));
    }();

    std::string family = p.at("family").get<std::string>();
    if (family == "constant")
        return LiquidityProfile::constant(p.at("kappa").get<double>(), rho, horizon, gamma);
    if (family == "exponential")
        return LiquidityProfile::exponential(p.at("kappa").get<double>(), p.at("nu").get<double>(),
                                             rho, horizon, gamma);
    if (family == "straight-line")
        return LiquidityProfile::straight_line(p.at("kappa").get<double>(), p.at("m").get<double>(),
                                               rho, horizon, gamma);
    if (family == "quadratic")
        return LiquidityProfile::quadratic(p.at("c0").get<double>(), p.at("c1").get<double>(),
                                           p.at("c2").get<double>(), rho, horizon, gamma);
    if (family == "tabulated")
        return LiquidityProfile::tabulated(curve_from_json(p.at("table"), "t", "k"), rho, horizon,
                                           gamma);
    throw std::invalid_argument("profile.family: unknown family '" + family + "'");
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::pair<double, double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << header << "\n";
    for (const auto& [t, v] : rows) out << fmt(t) << "," << fmt(v) << "\n";
}

void write_summary(const fs::path& dir, const json& cfg, json results) {
    json summary;
    summary["config"] = cfg;
    summary["results"] = std::move(results);
    std::ofstream out(dir / "summary.json");
    out << summary.dump(2) << "\n";
}

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::size_t n = 0;           // 0 = use config
    std::size_t samples = 10000;
    std::size_t panels = 10000;
    std::string variant = "one-sided";
};

int cmd_solve(const json& cfg, const Options& opt) {
    LiquidityProfile profile = profile_from_json(cfg);
    double x = cfg.at("order").at("x").get<double>();
    double delta = cfg.at("order").value("delta", 0.0);
    double a0 = cfg.at("order").value("a0", 0.0);
    std::size_t n = opt.n ? opt.n : cfg.at("grid").at("n").get<std::size_t>();

    TimeGrid grid = TimeGrid::uniform(profile, n);
    SolveResult result = solve(profile, grid);
    DiscreteStrategy strategy = extract_strategy(result, x, delta);
    CostBreakdown breakdown = cost_decomposition(profile, strategy, delta, a0);

    fs::path dir(opt.out_dir);
    std::vector<std::pair<double, double>> brows, srows;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        brows.emplace_back(grid.nodes[i], result.barrier.values[i]);
        srows.emplace_back(grid.nodes[i], strategy.trades[i]);
    }
    write_csv(dir / "barrier.csv", "t,c", brows);
    write_csv(dir / "strategy.csv", "t,trade", srows);

    json res;
    res["value"] = dp_value(result, 0, delta, x);
    res["cost"] = {{"unaffected", breakdown.unaffected},
                   {"permanent", breakdown.permanent},
                   {"temporary", breakdown.temporary},
                   {"total", breakdown.total}};
    res["diagnostics"] = {{"max_pieces", result.diagnostics.max_pieces},
                          {"dropped_breakpoints", result.diagnostics.dropped_breakpoints},
                          {"merged_breakpoints", result.diagnostics.merged_breakpoints}};
    write_summary(dir, cfg, std::move(res));
    return 0;
}

int cmd_classify(const json& cfg, const Options& opt) {
    LiquidityProfile profile = profile_from_json(cfg);
    ManipulationVerdict verdict = classify_manipulation(profile, opt.samples);

    json res;
    res["regime"] = to_string(verdict.regime);
    if (verdict.witness_time) res["witness_time"] = *verdict.witness_time;
    if (verdict.round_trip) {
        res["round_trip"] = {{"t", verdict.round_trip->t},
                             {"eps", verdict.round_trip->eps},
                             {"cost", verdict.round_trip->cost}};
    }
    write_summary(fs::path(opt.out_dir), cfg, res);
    std::cout << to_string(verdict.regime) << "\n";
    return 0;
}

int cmd_converge(const json& cfg, const Options& opt) {
    LiquidityProfile profile = profile_from_json(cfg);
    double x = cfg.at("order").at("x").get<double>();
    double delta = cfg.at("order").value("delta", 0.0);
    std::vector<std::size_t> n_list = cfg.at("grid").at("n_list").get<std::vector<std::size_t>>();

    double reference;
    if (cfg.contains("reference_value")) {
        reference = cfg.at("reference_value").get<double>();
    } else {
        ManipulationVerdict verdict = classify_manipulation(profile, opt.samples);
        if (verdict.regime != Regime::Clean)
            throw std::runtime_error("converge: profile is not Clean (" + to_string(verdict.regime) +
                                     ") and no reference_value supplied");
        reference = zero_spread_optimal(profile, delta, x, opt.panels).value;
    }

    json rows = json::array();
    for (std::size_t n : n_list) {
        auto t0 = std::chrono::steady_clock::now();
        SolveResult result = solve(profile, TimeGrid::uniform(profile, n));
        double value = dp_value(result, 0, delta, x);
        auto t1 = std::chrono::steady_clock::now();
        double gap = std::abs(value - reference) / std::max(1.0, std::abs(reference));
        rows.push_back({{"n", n},
                        {"dp_value", value},
                        {"reference_value", reference},
                        {"relative_gap", gap},
                        {"wall_seconds", std::chrono::duration<double>(t1 - t0).count()}});
        std::cout << n << "," << fmt(value) << "," << fmt(reference) << "," << fmt(gap) << "\n";
    }
    write_summary(fs::path(opt.out_dir), cfg, json{{"rows", std::move(rows)}});
    return 0;
}

DiscreteStrategy read_strategy_csv(const LiquidityProfile& profile, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open strategy file " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> nodes, trades;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("strategy file: malformed line '" + line + "'");
        nodes.push_back(std::stod(line.substr(0, comma)));
        trades.push_back(std::stod(line.substr(comma + 1)));
    }
    return DiscreteStrategy{TimeGrid::from_nodes(profile, std::move(nodes)), std::move(trades)};
}

int cmd_evaluate(const json& cfg, const Options& opt) {
    LiquidityProfile profile = profile_from_json(cfg);
    double delta = cfg.at("order").value("delta", 0.0);
    double a0 = cfg.at("order").value("a0", 0.0);
    double b0 = cfg.at("order").value("b0", a0);
    DiscreteStrategy strategy = read_strategy_csv(profile, cfg.at("strategy_file").get<std::string>());

    json res;
    res["variant"] = opt.variant;
    if (opt.variant == "one-sided") {
        CostBreakdown breakdown = cost_decomposition(profile, strategy, delta, a0);
        res["cost"] = {{"unaffected", breakdown.unaffected},
                       {"permanent", breakdown.permanent},
                       {"temporary", breakdown.temporary},
                       {"total", breakdown.total}};
    } else if (opt.variant == "zero") {
        res["cost"] = {{"temporary", zero_spread_cost(profile, strategy, delta)}};
    } else if (opt.variant == "dynamic") {
        DiscreteStrategy buys{strategy.grid, strategy.trades};
        DiscreteStrategy sells{strategy.grid, strategy.trades};
        for (double& v : buys.trades) v = std::max(v, 0.0);
        for (double& v : sells.trades) v = std::max(-v, 0.0);
        res["cost"] = {{"total", total_cost_dynamic_spread(profile, buys, sells, delta, delta, a0, b0)}};
    } else {
        throw std::invalid_argument("--variant must be one of one-sided, dynamic, zero");
    }
    write_summary(fs::path(opt.out_dir), cfg, res);
    return 0;
}

int cmd_barrier(const json& cfg, const Options& opt) {
    LiquidityProfile profile = profile_from_json(cfg);
    std::size_t n = opt.n ? opt.n : cfg.at("grid").at("n").get<std::size_t>();
    const double T = profile.horizon();

    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i <= n; ++i) {
        double t = T * static_cast<double>(i) / static_cast<double>(n);
        rows.emplace_back(t, continuous_barrier(profile, t, opt.panels));
    }
    write_csv(fs::path(opt.out_dir) / "barrier.csv", "t,c", rows);
    write_summary(fs::path(opt.out_dir), cfg, json{{"points", n + 1}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal-execution engine for resilient block-shaped order books"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "Path to the JSON run configuration")->required();
    app.add_option("--out", opt.out_dir, "Output directory");
    app.add_option("--n", opt.n, "Grid steps override");
    app.add_option("--samples", opt.samples, "Condition-check sample count");
    app.add_option("--panels", opt.panels, "Quadrature panel count");
    app.add_option("--variant", opt.variant, "Model variant: one-sided | dynamic | zero");

    auto* solve_cmd = app.add_subcommand("solve", "Backward-induction solve: barrier, strategy, cost");
    auto* classify_cmd = app.add_subcommand("classify", "Manipulation-regime classification");
    auto* converge_cmd = app.add_subcommand("converge", "Grid-refinement study against a reference value");
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Cost of a strategy file under a model variant");
    auto* barrier_cmd = app.add_subcommand("barrier", "Closed-form continuous barrier table");
    for (auto* cmd : {solve_cmd, classify_cmd, converge_cmd, evaluate_cmd, barrier_cmd})
        cmd->fallthrough();  // accept the global flags after the subcommand name

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(opt.config_path);
        if (!in) throw std::runtime_error("cannot open config " + opt.config_path);
        json cfg = json::parse(in);
        fs::create_directories(opt.out_dir);

        if (solve_cmd->parsed()) return cmd_solve(cfg, opt);
        if (classify_cmd->parsed()) return cmd_classify(cfg, opt);
        if (converge_cmd->parsed()) return cmd_converge(cfg, opt);
        if (evaluate_cmd->parsed()) return cmd_evaluate(cfg, opt);
        if (barrier_cmd->parsed()) return cmd_barrier(cfg, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

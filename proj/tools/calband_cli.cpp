// calband: run, sweep, validate and export simulation runs.
//
// Exit codes: 0 ok, 1 invalid config or usage, 2 I/O failure, 3 run failure
// (including a sweep with failed runs).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "calband/error.hpp"
#include "calband/harness.hpp"

namespace {

using namespace calband;

struct Common {
    std::string config_path;
    std::string preset_name;
    std::vector<std::size_t> checkpoints;
    std::size_t horizon = 0;
    std::string strategy;
};

void add_common(CLI::App* cmd, Common& c) {
    auto* cfg = cmd->add_option("--config", c.config_path, "JSON run config");
    auto* pre = cmd->add_option("--preset", c.preset_name, "shipped preset")->check(CLI::IsMember(preset_names()));
    cfg->excludes(pre);
    cmd->add_option("--checkpoints", c.checkpoints, "metric horizons in trials")->delimiter(',');
    cmd->add_option("--horizon", c.horizon, "override the horizon in trials");
    cmd->add_option("--strategy", c.strategy, "one strategy for every player (CB NCB GQL AB UR SC)");
}

RunConfig resolve(const Common& c) {
    if (c.config_path.empty() && c.preset_name.empty())
        throw Error(ErrorCode::ConfigInvalid, "one of --config or --preset is required");
    RunConfig cfg = c.config_path.empty() ? preset(c.preset_name) : load_config(c.config_path);
    if (!c.checkpoints.empty()) cfg.checkpoints = c.checkpoints;
    if (c.horizon) (cfg.mode == RunMode::Game ? cfg.game.horizon : cfg.study.horizon) = c.horizon;
    if (!c.strategy.empty()) {
        const StrategyKind kind = strategy_from_string(c.strategy);
        for (auto& p : cfg.game.strategies) p.kind = kind;
    }
    cfg.validate();
    return cfg;
}

int exit_code(const Error& e) {
    switch (e.code()) {
        case ErrorCode::ConfigInvalid: return 1;
        case ErrorCode::IoError: return 2;
        default: return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"calband: calibrated forecasting bandits on a D2D channel game"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, validate_opts, export_opts;
    std::uint64_t run_seed = 0;
    std::string run_out = "out";
    auto* run = app.add_subcommand("run", "run one configuration and write trace, metrics and summary");
    add_common(run, run_opts);
    auto* run_seed_opt = run->add_option("--seed", run_seed, "override the seed");
    run->add_option("--out", run_out, "output directory");

    std::vector<std::uint64_t> seeds;
    std::vector<std::string> strategies;
    std::string sweep_out = "sweep";
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep", "run several seeds (and strategies) and aggregate throughput");
    add_common(sweep, sweep_opts);
    sweep->add_option("--seeds", seeds, "seeds, comma separated")->delimiter(',')->required();
    sweep->add_option("--strategies", strategies, "strategies to compare, comma separated")->delimiter(',');
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--threads", threads, "worker threads (0 = hardware)");

    std::string validate_out;
    double smoothness = 2.0, dimension = 1.0;
    auto* validate = app.add_subcommand("validate", "print the schedule table, bounds and scale warnings");
    add_common(validate, validate_opts);
    validate->add_option("--out", validate_out, "also write rate_curves.csv here");
    validate->add_option("--smoothness", smoothness, "regression smoothness p for rate_curves.csv");
    validate->add_option("--dimension", dimension, "regression dimension d for rate_curves.csv");

    std::string trace_path, export_out = "export";
    std::uint64_t export_seed = 0;
    auto* exp = app.add_subcommand("export", "recompute the metric files from a trace");
    add_common(exp, export_opts);
    exp->add_option("--trace", trace_path, "trace.csv of a game run")->required();
    auto* export_seed_opt = exp->add_option("--seed", export_seed, "seed the trace was produced with");
    exp->add_option("--out", export_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*run) {
            RunConfig cfg = resolve(run_opts);
            if (*run_seed_opt) cfg.game.seed = run_seed;
            const RunSummary s = run_to_directory(cfg, run_out);
            std::printf("%s\ntrace sha256 %s\n", s.directory.c_str(), s.trace_sha256.c_str());
            if (cfg.mode == RunMode::Game)
                std::printf("final aggregate throughput %.6g, CE distance %.6g\n", s.final_throughput,
                            s.final_ce_distance);
            return 0;
        }
        if (*sweep) {
            const RunConfig cfg = resolve(sweep_opts);
            const SweepResult r = run_sweep(cfg, seeds, strategies, sweep_out, threads);
            for (const auto& row : r.rows)
                std::printf("%-6s T=%-8zu runs=%zu mean=%.6g sd=%.3g\n", row.strategy.c_str(), row.horizon, row.runs,
                            row.mean, row.sd);
            for (const auto& f : r.failures)
                std::fprintf(stderr, "failed: %s seed %llu: %s\n", f.strategy.c_str(),
                             static_cast<unsigned long long>(f.seed), f.error.c_str());
            return r.failures.empty() ? 0 : 3;
        }
        if (*validate) {
            const RunConfig cfg = resolve(validate_opts);
            const ValidationReport rep = validate_report(cfg);
            std::cout << rep.text;
            if (!validate_out.empty()) {
                std::filesystem::create_directories(validate_out);
                const auto path = std::filesystem::path(validate_out) / "rate_curves.csv";
                std::ofstream out(path);
                if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
                write_rate_curves_csv(out, cfg, smoothness, dimension);
            }
            return 0;
        }
        if (*exp) {
            RunConfig cfg = resolve(export_opts);
            if (*export_seed_opt) cfg.game.seed = export_seed;
            const RunSummary s = export_metrics(cfg, trace_path, export_out);
            std::printf("%s\ntrace sha256 %s\n", s.directory.c_str(), s.trace_sha256.c_str());
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "calband: %s\n", e.what());
        return exit_code(e);
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "calband: IoError: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "calband: %s\n", e.what());
        return 3;
    }
    return 1;
}

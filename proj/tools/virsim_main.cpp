#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "virsim/config.hpp"
#include "virsim/errors.hpp"
#include "virsim/runner.hpp"

namespace {

using namespace virsim;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitInvalidConfig = 3;
constexpr int kExitIo = 4;

struct MissingInputError : SimError {
    using SimError::SimError;
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    bool quiet{false};
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario file");
    cmd->add_option("--seed", args.seed, "master seed (overrides config)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--trials", args.trials, "Monte Carlo trials override");
    cmd->add_flag("--quiet", args.quiet, "suppress the console summary");
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("SIM_SEED");
    if (!raw) return std::nullopt;
    std::uint64_t seed{};
    const char* end = raw + std::string_view(raw).size();
    auto [p, ec] = std::from_chars(raw, end, seed);
    if (ec != std::errc() || p != end) {
        std::fprintf(stderr, "warning: ignoring unparseable SIM_SEED '%s'\n",
                     raw);
        return std::nullopt;
    }
    return seed;
}

ScenarioConfig resolve_config(const CommonArgs& args) {
    ScenarioConfig config;
    if (!args.config_path.empty()) {
        if (!std::filesystem::exists(args.config_path))
            throw MissingInputError("config file not found: " +
                                    args.config_path);
        config = load_scenario(args.config_path);
    }
    if (args.seed)
        config.world.master_seed = *args.seed;
    else if (!config.world.master_seed)
        config.world.master_seed = env_seed().value_or(42);
    if (args.trials) config.world.mc_trials = *args.trials;
    if (!args.out_dir.empty()) config.world.out_dir = args.out_dir;
    return config;
}

void print_summary(const RunReport& rep, const RunOptions& options) {
    std::printf("seed            %llu\n",
                static_cast<unsigned long long>(rep.master_seed));
    std::printf("outputs         %s\n", rep.out_dir.c_str());
    if (options.with_world)
        std::printf("world           %zu/%zu hosts infected after %llu ticks, "
                    "%zu variants, %zu events\n",
                    rep.infected_hosts, rep.total_hosts,
                    static_cast<unsigned long long>(rep.ticks_run),
                    rep.lineage_size, rep.event_count);
    if (options.with_strategies) {
        for (std::size_t i = 0; i < rep.strategies.size(); ++i)
            std::printf("%-16s recovered %.4f  fitness %+.4f  share %.4f\n",
                        to_string(rep.strategies[i]),
                        rep.stats[i].mean_recovered, rep.fitness_raw[i],
                        rep.final_population[i]);
        std::printf("baseline mix    recovered %.4f\n", rep.baseline_recovery);
    }
    std::printf("wall            %.3f s\n", rep.wall_seconds);
}

int run_one(const CommonArgs& args, const RunOptions& options) {
    const ScenarioConfig config = resolve_config(args);
    const RunReport rep = run_scenario(config, config.world.out_dir, options);
    if (!args.quiet) print_summary(rep, options);
    return kExitOk;
}

std::vector<double> parse_value_list(const std::string& raw) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t comma = raw.find(',', pos);
        if (comma == std::string::npos) comma = raw.size();
        const std::string item = raw.substr(pos, comma - pos);
        double v{};
        const char* b = item.data();
        const char* e = item.data() + item.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e)
            throw ConfigError("--values: not a number: '" + item + "'");
        values.push_back(v);
        if (comma == raw.size()) break;
        pos = comma + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polymorphic ransomware propagation and recovery simulator"};
    app.require_subcommand(1);

    CommonArgs simulate_args, game_args, strategies_args, correlate_args,
        sweep_args, demo_args;
    std::string profile_a, profile_b, sweep_param, sweep_values;

    CLI::App* cmd_simulate =
        app.add_subcommand("simulate", "run the world ticks and export logs");
    attach_common(cmd_simulate, simulate_args);

    CLI::App* cmd_game =
        app.add_subcommand("game", "payoff matrix, dominance, replicator, ESS");
    attach_common(cmd_game, game_args);

    CLI::App* cmd_strategies = app.add_subcommand(
        "strategies", "Monte Carlo evaluation of the recovery strategies");
    attach_common(cmd_strategies, strategies_args);

    CLI::App* cmd_correlate = app.add_subcommand(
        "correlate", "trait and lifecycle comparison of two profiles");
    attach_common(cmd_correlate, correlate_args);
    cmd_correlate->add_option("--profile-a", profile_a,
                              "profile file (builtin Virlock when absent)");
    cmd_correlate->add_option("--profile-b", profile_b,
                              "profile file (builtin phi6 when absent)");

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "run the scenario across parameter values");
    attach_common(cmd_sweep, sweep_args);
    cmd_sweep->add_option("--param", sweep_param, "config path, e.g. game.ransom")
        ->required();
    cmd_sweep->add_option("--values", sweep_values, "comma-separated numbers")
        ->required();

    CLI::App* cmd_demo = app.add_subcommand(
        "demo", "star-with-cloud default scenario, all reports");
    attach_common(cmd_demo, demo_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_simulate->parsed()) {
            RunOptions options;
            options.with_strategies = false;
            options.with_game = false;
            options.with_correlation = false;
            return run_one(simulate_args, options);
        }
        if (cmd_game->parsed()) {
            RunOptions options;
            options.with_world = false;
            options.with_strategies = false;
            options.with_correlation = false;
            return run_one(game_args, options);
        }
        if (cmd_strategies->parsed()) {
            RunOptions options;
            options.with_world = false;
            options.with_game = false;
            options.with_correlation = false;
            return run_one(strategies_args, options);
        }
        if (cmd_correlate->parsed()) {
            RunOptions options;
            options.with_world = false;
            options.with_strategies = false;
            options.with_game = false;
            options.profile_a_path = profile_a;
            options.profile_b_path = profile_b;
            return run_one(correlate_args, options);
        }
        if (cmd_sweep->parsed()) {
            const ScenarioConfig config = resolve_config(sweep_args);
            RunOptions options;
            options.with_game = false;
            options.with_correlation = false;
            const SweepResult result =
                sweep(config, sweep_param, parse_value_list(sweep_values),
                      config.world.out_dir, options);
            if (!sweep_args.quiet) {
                std::printf("sweep %s over %zu values -> %s/sweep.csv\n",
                            result.parameter.c_str(), result.points.size(),
                            config.world.out_dir.c_str());
                for (const auto& point : result.points)
                    std::printf("  %-10.4g infected %zu  baseline %.4f\n",
                                point.value, point.report.infected_hosts,
                                point.report.baseline_recovery);
            }
            return kExitOk;
        }
        if (cmd_demo->parsed()) {
            return run_one(demo_args, RunOptions{});
        }
        std::fprintf(stderr, "no subcommand\n");
        return kExitError;
    } catch (const MissingInputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitMissingInput;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitError;
    }
}

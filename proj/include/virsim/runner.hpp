#ifndef VIRSIM_RUNNER_HPP
#define VIRSIM_RUNNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "virsim/config.hpp"
#include "virsim/game_engine.hpp"
#include "virsim/lifecycle.hpp"

namespace virsim {

// Single-host world whose files have all been encrypted, the shared
// starting point for every strategy trial. A t0 shadow snapshot is taken
// when the scenario enables shadows.
WorldState make_strategy_fixture(const ScenarioConfig& config,
                                 std::uint64_t seed);

struct RunReport {
    ScenarioConfig config;      // with the resolved master seed filled in
    std::uint64_t master_seed{0};
    std::uint64_t ticks_run{0};
    std::size_t infected_hosts{0};
    std::size_t total_hosts{0};
    std::size_t lineage_size{0};
    std::size_t event_count{0};
    std::vector<StrategyKind> strategies;
    std::vector<StrategyStats> stats;
    std::vector<double> fitness_raw;
    std::vector<double> fitness_shifted;
    std::vector<double> final_population;
    double baseline_recovery{0.0};
    double wall_seconds{0.0};  // reported, never written into data files
    std::string out_dir;
};

struct RunOptions {
    bool with_world{true};
    bool with_strategies{true};
    bool with_game{true};
    bool with_correlation{true};
    // Profiles for the correlation report; builtins when empty.
    std::string profile_a_path;
    std::string profile_b_path;
};

// Execute the scenario and write events.csv, lineage.csv, outcomes.csv,
// game_report.json, correlation_report.json, config_echo.cfg and
// run_report.json into out_dir. Every written byte is a pure function of
// (config, master_seed); wall-clock timing goes to timing.txt only.
RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       const RunOptions& options = RunOptions{});

struct SweepPoint {
    double value{0.0};
    std::uint64_t seed{0};
    RunReport report;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points;
};

// Numeric config paths addressable by sweep, e.g. "game.ransom".
std::vector<std::string> sweep_parameter_paths();

// One run per value, each on a split seed, under out_dir/point_<i>/.
// Writes sweep.csv and sweep.json. Unknown path -> ConfigError.
SweepResult sweep(const ScenarioConfig& config, const std::string& param_path,
                  const std::vector<double>& values, const std::string& out_dir,
                  const RunOptions& options = RunOptions{});

// JSON documents, exposed for tests.
std::string game_report_json(const ScenarioConfig& config,
                             const StrategyPopulationResult& population);
std::string correlation_report_json(const OrganismProfile& a,
                                    const OrganismProfile& b);

}  // namespace virsim

#endif

#ifndef VIRSIM_CONFIG_HPP
#define VIRSIM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "virsim/defense_recovery.hpp"
#include "virsim/game_engine.hpp"
#include "virsim/host_network.hpp"
#include "virsim/lifecycle.hpp"

namespace virsim {

// Scenario file sections. Every field has a documented default, so an empty
// file is a valid scenario; the echo emitted after a run always lists every
// field explicitly and flags the invented calibration values.

struct WorldSection {
    std::optional<std::uint64_t> master_seed;
    std::uint64_t ticks{20};
    std::uint64_t mc_trials{2000};
    std::string out_dir{"out"};
    bool shadow_enabled{true};
    bool initial_snapshot{true};

    bool operator==(const WorldSection&) const = default;
};

struct TopologySection {
    Topology kind{Topology::StarCloud};
    std::uint32_t num_hosts{6};
    double er_p{0.10};
    InfectionVector edge_vector{InfectionVector::P2p};
    std::uint32_t files_per_host{12};
    std::uint32_t file_size{64};

    bool operator==(const TopologySection&) const = default;
};

struct VirusSection {
    std::uint32_t encryption_batch{8};
    double open_probability{0.2};
    std::map<InfectionVector, double> vector_probs{
        {InfectionVector::EmailAttachment, 0.05},
        {InfectionVector::Download, 0.03},
        {InfectionVector::RemovableMedia, 0.02},
        {InfectionVector::SecurityExploit, 0.01},
        {InfectionVector::P2p, 0.02},
        {InfectionVector::Malvertising, 0.01},
    };
    std::optional<HostId> initial_infected{0};
    InfectionVector initial_vector{InfectionVector::EmailAttachment};

    bool operator==(const VirusSection&) const = default;
};

struct AvSection {
    std::optional<AvKind> kind{};  // resident AV off when absent
    double coverage{0.0};
    double behavioral_detect_prob{0.30};
    bool db_knows_root{true};

    bool operator==(const AvSection&) const = default;
};

struct StrategiesSection {
    double click_reinfection_hazard{0.002};
    double boot_fail_prob{0.05};
    double fp_prob{0.01};
    bool cleaner_knows_family{true};
    std::uint32_t fixture_files{40};
    std::uint32_t fixture_file_size{64};
    LevelMap levels{};
    double w_effectiveness{1.0};
    double w_complexity{0.25};
    double w_reinfection{0.5};
    double w_money{1.0};
    // Trial mix for the no-payment baseline estimate, indexed like
    // StrategyKind: pay, exploit, shadow, av_remove, av_clean.
    std::array<double, 5> baseline_mix{0.0, 0.30, 0.55, 0.0, 0.15};
    // Per-step complexity overrides; lengths are pinned to the builtin
    // pipelines' step counts.
    std::array<std::vector<int>, 5> step_complexity{
        {{1, 1}, {4, 3}, {3, 2}, {2, 1, 1}, {2, 1, 1, 2}}};

    bool operator==(const StrategiesSection&) const = default;
};

struct GameSection {
    double data_value{100.0};
    double ransom{20.0};
    double p_full{0.08};
    double mean_restore{0.65};
    double alt_recovery{0.90};
    double reputation{0.0};
    double attacker_decrypt_prob{0.08};
    std::uint64_t replicator_horizon{500};
    double replicator_tolerance{1e-10};
    double beta_concentration{10.0};

    bool operator==(const GameSection&) const = default;
};

struct ScenarioConfig {
    WorldSection world;
    TopologySection topology;
    VirusSection virus;
    AvSection av;
    StrategiesSection strategies;
    GameSection game;

    bool operator==(const ScenarioConfig&) const = default;

    WorldBuildConfig build_config() const;
    StrategyParams strategy_params() const;
    std::vector<StrategySpec> strategy_specs() const;
    MatrixParams matrix_params() const;
    FitnessSpec fitness_spec() const;
};

// Parse and validate. Throws ConfigError carrying one message per violated
// constraint, each naming the section.key at fault.
ScenarioConfig parse_scenario_text(const std::string& text);

// read_text_file + parse_scenario_text.
ScenarioConfig load_scenario(const std::string& path);

// Every field, fixed order, reparseable; values that are modeling choices
// rather than reported statistics carry a `# default: not from paper` flag.
std::string echo_config(const ScenarioConfig& config);

// Organism profile file: [profile] name, [lifecycle] repeated
// `stage = STAGE | label` lines, [traits] boolean entries.
OrganismProfile load_profile(const std::string& path);
OrganismProfile parse_profile_text(const std::string& text);

}  // namespace virsim

#endif

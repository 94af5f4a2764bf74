#ifndef VIRSIM_DEFENSE_RECOVERY_HPP
#define VIRSIM_DEFENSE_RECOVERY_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "virsim/av_config.hpp"
#include "virsim/host_network.hpp"
#include "virsim/rng.hpp"

namespace virsim {

enum class StrategyKind {
    PayRansom,
    ExploitDecrypt,
    ShadowRestore,
    AvRemove,
    AvCleanRecover,
};
constexpr int kStrategyCount = 5;

const char* to_string(StrategyKind s);
std::optional<StrategyKind> strategy_from_string(const std::string& name);

enum class Level { Low, Medium, High };

const char* to_string(Level level);
std::optional<Level> level_from_string(const std::string& name);

// Probability mapping for the low/medium/high labels. The labels come from
// the strategy tables; the numbers are declared defaults.
struct LevelMap {
    double low{0.25};
    double medium{0.50};
    double high{0.85};

    bool operator==(const LevelMap&) const = default;

    // ConfigError unless 0 <= low < medium < high <= 1.
    void validate() const;
};

double level_to_prob(Level level, const LevelMap& map = LevelMap{});

// One action in a recovery pipeline. Complexity is on the 0..10 scale for
// an average computer user; reinfection_hazard applies per execution.
struct StepSpec {
    std::string name;
    int complexity{0};
    double reinfection_hazard{0.0};

    bool operator==(const StepSpec&) const = default;
};

struct StrategySpec {
    StrategyKind strategy{StrategyKind::PayRansom};
    std::vector<StepSpec> steps;  // nonempty
    Level effectiveness{Level::Medium};
    Level reinfection_risk{Level::Medium};

    bool operator==(const StrategySpec&) const = default;

    int total_complexity() const;
};

// The five builtin pipelines. Step complexities are declared defaults
// (totals: pay 2, exploit 7 plus per-file scaling, shadow 5, remove 4,
// clean 6), overridable in config.
std::vector<StrategySpec> default_strategy_specs(double click_hazard = 0.002);

struct Outcome {
    double recovered_fraction{0.0};
    bool malware_removed{false};
    bool reinfected{false};
    double ransom_paid{0.0};
    int total_complexity{0};
    int steps_executed{0};

    bool operator==(const Outcome&) const = default;
};

struct StrategyParams {
    double ransom{20.0};
    std::string transfer_id = std::string(64, '0');
    double p_full{0.08};          // chance the attacker restores everything
    double mean_restore{0.65};    // unconditional mean recovered fraction
    double beta_concentration{10.0};
    double boot_fail_prob{0.05};
    double fp_prob{0.01};
    bool cleaner_knows_family{true};
    AVConfig av{};                // used when the host has no resident AV

    bool operator==(const StrategyParams&) const = default;
};

// Detected active variants. Signature AV: exact surface match against the
// database, no false positives, no misses of known surfaces. Behavioral AV:
// one independent draw per active variant at the core-keyed probability.
std::set<VariantId> scan(const HostState& host, const Lineage& lineage,
                         const AVConfig& av, Rng& rng);

// Delete dropped executables and infected files of the detected variants
// (deletion, not decryption). Restores the sabotage flags once the host is
// clean. Returns the number of files removed.
std::size_t remove_detected(WorldState& world, HostId host_id,
                            const std::set<VariantId>& detected);

// Run one recovery strategy on an infected host and sample its outcome.
Outcome apply_strategy(WorldState& world, HostId host_id,
                       const StrategySpec& spec, const StrategyParams& params,
                       Rng& rng);

// CSV with header `trial,strategy,recovered_fraction,malware_removed,
// reinfected,ransom_paid,total_complexity`.
std::string outcomes_csv(const std::vector<std::pair<StrategyKind, std::vector<Outcome>>>& by_strategy);

}  // namespace virsim

#endif

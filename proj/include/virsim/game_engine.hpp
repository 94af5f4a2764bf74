#ifndef VIRSIM_GAME_ENGINE_HPP
#define VIRSIM_GAME_ENGINE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "virsim/defense_recovery.hpp"
#include "virsim/host_network.hpp"

namespace virsim {

enum class UserAction { Pay, NotPay };
enum class AttackerAction { Decrypt, NotDecrypt };

const char* to_string(UserAction a);
const char* to_string(AttackerAction a);

struct PayoffCell {
    double user{0.0};
    double attacker{0.0};

    bool operator==(const PayoffCell&) const = default;
};

// Bimatrix of the one-shot ransom game, indexed [user action][attacker
// action] in declaration order (PAY, NOT_PAY) x (DECRYPT, NOT_DECRYPT).
struct PayoffMatrix2x2 {
    std::array<std::array<PayoffCell, 2>, 2> cells{};

    bool operator==(const PayoffMatrix2x2&) const = default;

    PayoffCell& at(UserAction u, AttackerAction a) {
        return cells[static_cast<int>(u)][static_cast<int>(a)];
    }
    const PayoffCell& at(UserAction u, AttackerAction a) const {
        return cells[static_cast<int>(u)][static_cast<int>(a)];
    }
};

struct MatrixParams {
    double data_value{100.0};    // V, worth of the hostage data
    double ransom{20.0};         // R, demanded payment
    double mean_restore{0.65};   // expected recovered fraction after paying
    double alt_recovery{0.90};   // recovery rate without payment
    double reputation{0.0};      // rho, attacker's cost of decrypting

    bool operator==(const MatrixParams&) const = default;
};

// Payoffs: paying recovers mean_restore of the data value minus the ransom
// if the attacker cooperates, loses the ransom outright otherwise; not
// paying recovers alt_recovery of the data value either way. The attacker
// keeps the ransom when paid and spends rho when decrypting.
// Throws ConstraintError naming the violated inequality.
PayoffMatrix2x2 build_default_matrix(const MatrixParams& params);

struct MixedStrategy {
    std::vector<double> probs;

    static MixedStrategy pure(std::size_t action, std::size_t n);
    static MixedStrategy uniform(std::size_t n);

    // ValidationError unless entries are nonnegative and sum to 1.
    void validate() const;

    bool operator==(const MixedStrategy&) const = default;
};

// (user expectation, attacker expectation) under independent mixing.
std::pair<double, double> expected_payoff(const PayoffMatrix2x2& game,
                                          const MixedStrategy& user,
                                          const MixedStrategy& attacker);

enum class Dominance { None, Weak, Strict };

const char* to_string(Dominance d);

struct DominanceReport {
    Dominance user_kind{Dominance::None};
    int user_action{-1};
    Dominance attacker_kind{Dominance::None};
    int attacker_action{-1};
    // best_response[k] = actions maximizing payoff against opponent action k.
    std::array<std::vector<int>, 2> user_best_response;
    std::array<std::vector<int>, 2> attacker_best_response;
};

DominanceReport dominance_report(const PayoffMatrix2x2& game,
                                 double tol = 1e-12);

struct PopulationState {
    std::vector<double> shares;
    std::uint64_t tick{0};

    // ValidationError unless shares are nonnegative and sum to 1 (1e-9).
    void validate() const;

    bool operator==(const PopulationState&) const = default;
};

// One round of discrete-time replicator dynamics:
// share_i' = share_i * f_i / sum_j share_j * f_j.
// Extinct strategies stay extinct. Throws DegenerateFitnessError when the
// average fitness is not positive, ValidationError on size mismatch.
PopulationState replicator_step(const PopulationState& pop,
                                std::span<const double> fitness);

using FitnessSource =
    std::function<std::vector<double>(const PopulationState&)>;

struct EvolveResult {
    std::vector<PopulationState> trajectory;  // includes the start state
    bool converged{false};
    std::uint64_t steps{0};
};

// Iterate replicator_step until max share movement drops below tolerance
// or the horizon is reached.
EvolveResult evolve(const PopulationState& start, const FitnessSource& source,
                    std::uint64_t horizon, double tolerance);
EvolveResult evolve(const PopulationState& start,
                    const std::vector<double>& fitness, std::uint64_t horizon,
                    double tolerance);

// Evolutionary stability of a candidate in the symmetric game defined by
// the user payoffs; the attacker half must be the exact transpose
// (ValidationError otherwise). Closed-form two-action test, no sampling.
bool is_ess(const PayoffMatrix2x2& game, const MixedStrategy& candidate,
            double tol = 1e-9);

// Fitness of a recovery strategy, estimated from sampled outcomes:
//   w_effectiveness * mean recovered fraction
// - w_complexity    * mean total_complexity / (10 * steps executed)
// - w_reinfection   * reinfection probability
// - w_money         * mean ransom paid / data_value
struct FitnessSpec {
    double w_effectiveness{1.0};
    double w_complexity{0.25};
    double w_reinfection{0.5};
    double w_money{1.0};
    double data_value{100.0};

    bool operator==(const FitnessSpec&) const = default;
};

struct StrategyStats {
    double mean_recovered{0.0};
    double mean_complexity_norm{0.0};
    double p_reinfected{0.0};
    double mean_ransom{0.0};
    double p_malware_removed{0.0};
};

double fitness_of(const StrategyStats& stats, const FitnessSpec& spec);

struct StrategyPopulationResult {
    std::vector<StrategyKind> strategies;
    std::vector<std::vector<Outcome>> outcomes;  // [strategy][trial]
    std::vector<StrategyStats> stats;
    std::vector<double> fitness_raw;
    std::vector<double> fitness_shifted;  // minimum mapped to 0.1
    double shift{0.0};
    EvolveResult dynamics;  // replicator run from the uniform mix
};

StrategyStats summarize(const std::vector<Outcome>& outcomes);

// Monte Carlo tournament: every strategy attacks fresh copies of the same
// fixture world, each trial on its own split seed, so results are identical
// however trials are scheduled.
StrategyPopulationResult strategy_population_game(
    const WorldState& fixture, HostId target,
    const std::vector<StrategySpec>& specs, const StrategyParams& params,
    const FitnessSpec& fitness_spec, std::uint64_t mc_trials,
    std::uint64_t seed, std::uint64_t horizon = 500, double tolerance = 1e-10);

// Mean recovered fraction when each trial draws its strategy from `mix`
// (normalized; indexed like `specs`).
double mixed_strategy_recovery(const WorldState& fixture, HostId target,
                               const std::vector<StrategySpec>& specs,
                               const StrategyParams& params,
                               std::span<const double> mix,
                               std::uint64_t trials, std::uint64_t seed);

}  // namespace virsim

#endif

#include "virsim/game_engine.hpp"

#include <algorithm>
#include <cmath>

#include "virsim/errors.hpp"

namespace virsim {

const char* to_string(UserAction a) {
    return a == UserAction::Pay ? "PAY" : "NOT_PAY";
}

const char* to_string(AttackerAction a) {
    return a == AttackerAction::Decrypt ? "DECRYPT" : "NOT_DECRYPT";
}

const char* to_string(Dominance d) {
    switch (d) {
        case Dominance::None: return "none";
        case Dominance::Weak: return "weak";
        case Dominance::Strict: return "strict";
    }
    return "none";
}

PayoffMatrix2x2 build_default_matrix(const MatrixParams& p) {
    if (!(p.data_value > 0.0))
        throw ConstraintError("data_value > 0");
    if (!(p.ransom > 0.0))
        throw ConstraintError("ransom > 0");
    if (!(p.mean_restore > 0.0 && p.mean_restore < 1.0))
        throw ConstraintError("0 < mean_restore < 1");
    if (!(p.alt_recovery > 0.0 && p.alt_recovery <= 1.0))
        throw ConstraintError("0 < alt_recovery <= 1");
    if (!(p.reputation >= 0.0))
        throw ConstraintError("reputation >= 0");

    PayoffMatrix2x2 g;
    g.at(UserAction::Pay, AttackerAction::Decrypt) = {
        p.mean_restore * p.data_value - p.ransom, p.ransom - p.reputation};
    g.at(UserAction::Pay, AttackerAction::NotDecrypt) = {-p.ransom, p.ransom};
    g.at(UserAction::NotPay, AttackerAction::Decrypt) = {
        p.alt_recovery * p.data_value, 0.0 - p.reputation};
    g.at(UserAction::NotPay, AttackerAction::NotDecrypt) = {
        p.alt_recovery * p.data_value, 0.0};

    // The scenario the whole model rests on: independent recovery beats
    // cooperation with the attacker, so refusing must strictly dominate.
    if (!(p.alt_recovery * p.data_value >
          p.mean_restore * p.data_value - p.ransom))
        throw ConstraintError(
            "alt_recovery * data_value > mean_restore * data_value - ransom");
    return g;
}

MixedStrategy MixedStrategy::pure(std::size_t action, std::size_t n) {
    MixedStrategy m;
    m.probs.assign(n, 0.0);
    m.probs.at(action) = 1.0;
    return m;
}

MixedStrategy MixedStrategy::uniform(std::size_t n) {
    MixedStrategy m;
    m.probs.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
    return m;
}

void MixedStrategy::validate() const {
    if (probs.empty())
        throw ValidationError("mixed strategy has no actions");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0))
            throw ValidationError("mixed strategy has a negative weight");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("mixed strategy weights do not sum to 1");
}

std::pair<double, double> expected_payoff(const PayoffMatrix2x2& game,
                                          const MixedStrategy& user,
                                          const MixedStrategy& attacker) {
    user.validate();
    attacker.validate();
    if (user.probs.size() != 2 || attacker.probs.size() != 2)
        throw ValidationError("the ransom game has exactly two actions per side");

    double u = 0.0, a = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double w = user.probs[i] * attacker.probs[j];
            u += w * game.cells[i][j].user;
            a += w * game.cells[i][j].attacker;
        }
    return {u, a};
}

namespace {

// Dominance of row player action hi over lo given payoff lookup.
Dominance pairwise_dominance(double hi0, double hi1, double lo0, double lo1,
                             double tol) {
    const bool ge = hi0 >= lo0 - tol && hi1 >= lo1 - tol;
    const bool gt0 = hi0 > lo0 + tol;
    const bool gt1 = hi1 > lo1 + tol;
    if (ge && gt0 && gt1) return Dominance::Strict;
    if (ge && (gt0 || gt1)) return Dominance::Weak;
    return Dominance::None;
}

std::vector<int> argmax_pair(double a0, double a1, double tol) {
    std::vector<int> best;
    const double top = std::max(a0, a1);
    if (a0 >= top - tol) best.push_back(0);
    if (a1 >= top - tol) best.push_back(1);
    return best;
}

}  // namespace

DominanceReport dominance_report(const PayoffMatrix2x2& g, double tol) {
    DominanceReport r;

    const auto u = [&](int i, int j) { return g.cells[i][j].user; };
    const auto a = [&](int i, int j) { return g.cells[i][j].attacker; };

    for (int cand = 0; cand < 2; ++cand) {
        const int other = 1 - cand;
        Dominance d = pairwise_dominance(u(cand, 0), u(cand, 1), u(other, 0),
                                         u(other, 1), tol);
        if (d != Dominance::None &&
            (r.user_kind == Dominance::None || d == Dominance::Strict)) {
            r.user_kind = d;
            r.user_action = cand;
        }
    }
    for (int cand = 0; cand < 2; ++cand) {
        const int other = 1 - cand;
        Dominance d = pairwise_dominance(a(0, cand), a(1, cand), a(0, other),
                                         a(1, other), tol);
        if (d != Dominance::None &&
            (r.attacker_kind == Dominance::None || d == Dominance::Strict)) {
            r.attacker_kind = d;
            r.attacker_action = cand;
        }
    }

    for (int j = 0; j < 2; ++j)
        r.user_best_response[j] = argmax_pair(u(0, j), u(1, j), tol);
    for (int i = 0; i < 2; ++i)
        r.attacker_best_response[i] = argmax_pair(a(i, 0), a(i, 1), tol);
    return r;
}

void PopulationState::validate() const {
    if (shares.empty())
        throw ValidationError("population has no strategies");
    double sum = 0.0;
    for (double s : shares) {
        if (!(s >= 0.0))
            throw ValidationError("population share is negative");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("population shares do not sum to 1");
}

PopulationState replicator_step(const PopulationState& pop,
                                std::span<const double> fitness) {
    pop.validate();
    if (fitness.size() != pop.shares.size())
        throw ValidationError("fitness vector size does not match population");
    for (double f : fitness)
        if (!(f >= 0.0) || !std::isfinite(f))
            throw DegenerateFitnessError("fitness values must be finite and >= 0");

    double avg = 0.0;
    for (std::size_t i = 0; i < fitness.size(); ++i)
        avg += pop.shares[i] * fitness[i];
    if (!(avg > 0.0))
        throw DegenerateFitnessError("average population fitness is zero");

    PopulationState next;
    next.tick = pop.tick + 1;
    next.shares.resize(pop.shares.size());
    for (std::size_t i = 0; i < fitness.size(); ++i)
        next.shares[i] = pop.shares[i] * fitness[i] / avg;
    return next;
}

EvolveResult evolve(const PopulationState& start, const FitnessSource& source,
                    std::uint64_t horizon, double tolerance) {
    start.validate();
    EvolveResult r;
    r.trajectory.push_back(start);
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const PopulationState& cur = r.trajectory.back();
        PopulationState next = replicator_step(cur, source(cur));
        double move = 0.0;
        for (std::size_t i = 0; i < next.shares.size(); ++i)
            move = std::max(move, std::abs(next.shares[i] - cur.shares[i]));
        r.trajectory.push_back(std::move(next));
        ++r.steps;
        if (move < tolerance) {
            r.converged = true;
            break;
        }
    }
    return r;
}

EvolveResult evolve(const PopulationState& start,
                    const std::vector<double>& fitness, std::uint64_t horizon,
                    double tolerance) {
    return evolve(
        start, [&fitness](const PopulationState&) { return fitness; }, horizon,
        tolerance);
}

bool is_ess(const PayoffMatrix2x2& game, const MixedStrategy& candidate,
            double tol) {
    candidate.validate();
    if (candidate.probs.size() != 2)
        throw ValidationError("ESS test expects a two-action strategy");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (std::abs(game.cells[i][j].user - game.cells[j][i].attacker) >
                1e-9)
                throw ValidationError(
                    "ESS is defined for symmetric games; the attacker half "
                    "must be the transpose of the user half");

    const auto u = [&](int i, int j) { return game.cells[i][j].user; };
    const double p = candidate.probs[0];

    // Payoff of a pure action against the candidate mix.
    const double e0 = p * u(0, 0) + (1.0 - p) * u(0, 1);
    const double e1 = p * u(1, 0) + (1.0 - p) * u(1, 1);
    const double self = p * e0 + (1.0 - p) * e1;

    if (e0 > self + tol || e1 > self + tol) return false;  // not an equilibrium

    if (std::abs(e0 - e1) > tol) {
        // Unique best reply, so the candidate must already be that pure
        // action and it resists every mutant strictly.
        return true;
    }

    // Every mutant ties against the candidate. Stability then hinges on the
    // candidate beating mutants in the post-invasion population:
    // u(x,y) - u(y,y) = -m (t - p)^2 with m as below, so m must be negative.
    const double m = (u(0, 0) - u(1, 0)) - (u(0, 1) - u(1, 1));
    return m < -tol;
}

double fitness_of(const StrategyStats& stats, const FitnessSpec& spec) {
    return spec.w_effectiveness * stats.mean_recovered -
           spec.w_complexity * stats.mean_complexity_norm -
           spec.w_reinfection * stats.p_reinfected -
           spec.w_money * stats.mean_ransom / spec.data_value;
}

StrategyStats summarize(const std::vector<Outcome>& outcomes) {
    StrategyStats s;
    if (outcomes.empty()) return s;
    for (const Outcome& o : outcomes) {
        s.mean_recovered += o.recovered_fraction;
        s.mean_complexity_norm +=
            o.steps_executed > 0
                ? o.total_complexity / (10.0 * o.steps_executed)
                : 0.0;
        s.p_reinfected += o.reinfected ? 1.0 : 0.0;
        s.mean_ransom += o.ransom_paid;
        s.p_malware_removed += o.malware_removed ? 1.0 : 0.0;
    }
    const auto n = static_cast<double>(outcomes.size());
    s.mean_recovered /= n;
    s.mean_complexity_norm /= n;
    s.p_reinfected /= n;
    s.mean_ransom /= n;
    s.p_malware_removed /= n;
    return s;
}

StrategyPopulationResult strategy_population_game(
    const WorldState& fixture, HostId target,
    const std::vector<StrategySpec>& specs, const StrategyParams& params,
    const FitnessSpec& fitness_spec, std::uint64_t mc_trials,
    std::uint64_t seed, std::uint64_t horizon, double tolerance) {
    if (specs.empty()) throw ValidationError("no strategies to evaluate");
    if (mc_trials == 0) throw ValidationError("mc_trials must be positive");

    StrategyPopulationResult r;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        r.strategies.push_back(specs[s].strategy);
        std::vector<Outcome> outcomes;
        outcomes.reserve(mc_trials);
        for (std::uint64_t t = 0; t < mc_trials; ++t) {
            WorldState trial = fixture;
            Rng rng(split_seed(seed, s * mc_trials + t));
            outcomes.push_back(
                apply_strategy(trial, target, specs[s], params, rng));
        }
        r.stats.push_back(summarize(outcomes));
        r.fitness_raw.push_back(fitness_of(r.stats.back(), fitness_spec));
        r.outcomes.push_back(std::move(outcomes));
    }

    const double low = *std::min_element(r.fitness_raw.begin(),
                                         r.fitness_raw.end());
    r.shift = 0.1 - low;
    for (double f : r.fitness_raw) r.fitness_shifted.push_back(f + r.shift);

    PopulationState uniform;
    uniform.shares.assign(specs.size(), 1.0 / static_cast<double>(specs.size()));
    r.dynamics = evolve(uniform, r.fitness_shifted, horizon, tolerance);
    return r;
}

double mixed_strategy_recovery(const WorldState& fixture, HostId target,
                               const std::vector<StrategySpec>& specs,
                               const StrategyParams& params,
                               std::span<const double> mix,
                               std::uint64_t trials, std::uint64_t seed) {
    if (mix.size() != specs.size())
        throw ValidationError("strategy mix size does not match specs");
    if (trials == 0) throw ValidationError("trials must be positive");
    double total = 0.0;
    for (double w : mix) {
        if (!(w >= 0.0))
            throw ValidationError("strategy mix has a negative weight");
        total += w;
    }
    if (!(total > 0.0))
        throw ValidationError("strategy mix has no weight");

    double sum = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(split_seed(seed, t));
        const double roll = rng.next_double() * total;
        std::size_t pick = 0;
        double acc = 0.0;
        for (std::size_t i = 0; i < mix.size(); ++i) {
            acc += mix[i];
            if (roll < acc) {
                pick = i;
                break;
            }
            pick = i;
        }
        WorldState trial = fixture;
        sum += apply_strategy(trial, target, specs[pick], params, rng)
                   .recovered_fraction;
    }
    return sum / static_cast<double>(trials);
}

}  // namespace virsim

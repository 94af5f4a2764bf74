#include "virsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "virsim/errors.hpp"
#include "virsim/ini.hpp"

namespace virsim {

using nlohmann::json;

WorldState make_strategy_fixture(const ScenarioConfig& config,
                                 std::uint64_t seed) {
    WorldBuildConfig b;
    b.topology = Topology::Complete;  // one host, so no edges either way
    b.num_hosts = 1;
    b.files_per_host = config.strategies.fixture_files;
    b.file_size = config.strategies.fixture_file_size;
    b.open_probability = config.virus.open_probability;
    b.shadow_enabled = config.world.shadow_enabled;
    b.initial_snapshot = config.world.initial_snapshot;
    b.av_coverage = 0.0;
    b.params.encryption_batch = config.virus.encryption_batch;
    b.params.vector_probs = config.virus.vector_probs;
    b.initial_infected = 0;
    b.initial_vector = config.virus.initial_vector;

    WorldState world = make_world(b, seed);
    Rng rng(split_seed(seed, 0xF1C7));
    const std::uint64_t limit =
        config.strategies.fixture_files / config.virus.encryption_batch + 3;
    for (std::uint64_t t = 0; t < limit; ++t) {
        if (world.host(0).encrypted_file_count() >=
            config.strategies.fixture_files)
            break;
        step(world, rng);
    }
    return world;
}

namespace {

json stats_json(const StrategyStats& s) {
    return json{{"mean_recovered", s.mean_recovered},
                {"mean_complexity_norm", s.mean_complexity_norm},
                {"p_reinfected", s.p_reinfected},
                {"mean_ransom", s.mean_ransom},
                {"p_malware_removed", s.p_malware_removed}};
}

json population_json(const EvolveResult& dynamics) {
    json trajectory = json::array();
    const std::size_t n = dynamics.trajectory.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 20); ++i)
        trajectory.push_back(dynamics.trajectory[i].shares);
    return json{{"converged", dynamics.converged},
                {"steps", dynamics.steps},
                {"final", dynamics.trajectory.back().shares},
                {"trajectory_sample", trajectory}};
}

// Symmetric "playing the field" embedding: each user action earns its
// expected payoff against the fixed attacker mix no matter what the
// opponent user plays, which makes the ESS test applicable.
PayoffMatrix2x2 field_game(const std::array<double, 2>& pure_payoffs) {
    PayoffMatrix2x2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g.cells[i][j] = {pure_payoffs[i], pure_payoffs[j]};
    return g;
}

}  // namespace

std::string game_report_json(const ScenarioConfig& config,
                             const StrategyPopulationResult& population) {
    const MatrixParams params = config.matrix_params();
    const PayoffMatrix2x2 game = build_default_matrix(params);
    const DominanceReport dom = dominance_report(game);

    json cells;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            cells[to_string(static_cast<UserAction>(i))]
                 [to_string(static_cast<AttackerAction>(j))] =
                     json{{"user", game.cells[i][j].user},
                          {"attacker", game.cells[i][j].attacker}};

    const double q = config.game.attacker_decrypt_prob;
    MixedStrategy attacker_mix{{q, 1.0 - q}};
    std::array<double, 2> vs_mix{};
    for (int i = 0; i < 2; ++i)
        vs_mix[i] = expected_payoff(game, MixedStrategy::pure(i, 2),
                                    attacker_mix)
                        .first;

    // Two-action replicator over the user population against the fixed
    // attacker mix; payoffs shifted to a 0.1 minimum like every fitness.
    const double low = std::min(vs_mix[0], vs_mix[1]);
    const double shift = 0.1 - low;
    const std::vector<double> user_fitness{vs_mix[0] + shift,
                                           vs_mix[1] + shift};
    PopulationState start;
    start.shares = {0.5, 0.5};
    const EvolveResult user_dynamics =
        evolve(start, user_fitness, config.game.replicator_horizon,
               config.game.replicator_tolerance);

    const PayoffMatrix2x2 field = field_game(vs_mix);

    json best_responses;
    for (int j = 0; j < 2; ++j) {
        json acts = json::array();
        for (int i : dom.user_best_response[j])
            acts.push_back(to_string(static_cast<UserAction>(i)));
        best_responses["user_vs_" +
                       std::string(to_string(static_cast<AttackerAction>(j)))] =
            acts;
    }
    for (int i = 0; i < 2; ++i) {
        json acts = json::array();
        for (int j : dom.attacker_best_response[i])
            acts.push_back(to_string(static_cast<AttackerAction>(j)));
        best_responses["attacker_vs_" +
                       std::string(to_string(static_cast<UserAction>(i)))] =
            acts;
    }

    json strategies = json::array();
    for (StrategyKind k : population.strategies)
        strategies.push_back(to_string(k));
    json stats = json::array();
    for (const auto& s : population.stats) stats.push_back(stats_json(s));

    json doc{
        {"matrix",
         {{"params",
           {{"data_value", params.data_value},
            {"ransom", params.ransom},
            {"mean_restore", params.mean_restore},
            {"alt_recovery", params.alt_recovery},
            {"reputation", params.reputation}}},
          {"cells", cells}}},
        {"dominance",
         {{"user",
           {{"kind", to_string(dom.user_kind)},
            {"action", dom.user_action >= 0
                           ? json(to_string(
                                 static_cast<UserAction>(dom.user_action)))
                           : json()}}},
          {"attacker",
           {{"kind", to_string(dom.attacker_kind)},
            {"action",
             dom.attacker_action >= 0
                 ? json(to_string(
                       static_cast<AttackerAction>(dom.attacker_action)))
                 : json()}}},
          {"best_responses", best_responses}}},
        {"attacker_mix",
         {{"DECRYPT", attacker_mix.probs[0]},
          {"NOT_DECRYPT", attacker_mix.probs[1]}}},
        {"expected_vs_attacker_mix",
         {{"PAY", vs_mix[0]}, {"NOT_PAY", vs_mix[1]}}},
        {"user_replicator",
         {{"fitness_shifted", user_fitness},
          {"shift", shift},
          {"converged", user_dynamics.converged},
          {"steps", user_dynamics.steps},
          {"final", user_dynamics.trajectory.back().shares}}},
        {"ess",
         {{"PAY", is_ess(field, MixedStrategy::pure(0, 2))},
          {"NOT_PAY", is_ess(field, MixedStrategy::pure(1, 2))}}},
        {"strategy_population",
         {{"strategies", strategies},
          {"stats", stats},
          {"fitness_raw", population.fitness_raw},
          {"fitness_shifted", population.fitness_shifted},
          {"shift", population.shift},
          {"dynamics", population_json(population.dynamics)}}},
    };
    return doc.dump(2) + "\n";
}

std::string correlation_report_json(const OrganismProfile& a,
                                    const OrganismProfile& b) {
    auto profile_json = [](const OrganismProfile& p) {
        json stages = json::array();
        for (const auto& s : p.lifecycle.steps)
            stages.push_back(
                json{{"stage", to_string(s.stage)}, {"label", s.label}});
        return json{{"name", p.name},
                    {"lifecycle", stages},
                    {"traits", p.traits.traits}};
    };

    std::vector<std::string> shared, only_a, only_b;
    auto truth = [](const TraitVector& v, const std::string& name) {
        auto it = v.traits.find(name);
        return it != v.traits.end() && it->second;
    };
    std::set<std::string> universe;
    for (const auto& [name, value] : a.traits.traits) universe.insert(name);
    for (const auto& [name, value] : b.traits.traits) universe.insert(name);
    for (const auto& name : universe) {
        const bool ta = truth(a.traits, name), tb = truth(b.traits, name);
        if (ta && tb) shared.push_back(name);
        else if (ta) only_a.push_back(name);
        else if (tb) only_b.push_back(name);
    }

    const Alignment alignment = align_lifecycles(a.lifecycle, b.lifecycle);
    json pairs = json::array();
    for (const auto& p : alignment.pairs)
        pairs.push_back(json{{"stage", to_string(p.stage)},
                             {"label_a", p.label_a},
                             {"label_b", p.label_b}});

    json doc{
        {"profiles", {{"a", profile_json(a)}, {"b", profile_json(b)}}},
        {"similarity",
         {{"all_traits", similarity(a.traits, b.traits)},
          {"core_traits", core_similarity(a.traits, b.traits)}}},
        {"traits",
         {{"shared_true", shared}, {"only_a", only_a}, {"only_b", only_b}}},
        {"alignment",
         {{"lcs_length", alignment.lcs_length},
          {"score", alignment.score},
          {"pairs", pairs}}},
    };
    return doc.dump(2) + "\n";
}

namespace {

void write_file_checked(const std::string& path, const std::string& content) {
    write_text_file(path, content);
}

json run_report_json_doc(const RunReport& rep, const RunOptions& options) {
    json strategies = json::array();
    for (StrategyKind k : rep.strategies) strategies.push_back(to_string(k));
    json stats = json::array();
    for (const auto& s : rep.stats) stats.push_back(stats_json(s));

    json doc{
        {"master_seed", rep.master_seed},
        {"out_dir", rep.out_dir},
        {"phases",
         {{"world", options.with_world},
          {"strategies", options.with_strategies},
          {"game", options.with_game},
          {"correlation", options.with_correlation}}},
        {"config_echo", "config_echo.cfg"},
    };
    if (options.with_world)
        doc["world"] = json{{"ticks_run", rep.ticks_run},
                            {"hosts", rep.total_hosts},
                            {"infected_final", rep.infected_hosts},
                            {"lineage_size", rep.lineage_size},
                            {"event_count", rep.event_count},
                            {"event_log", "events.csv"},
                            {"lineage", "lineage.csv"}};
    if (options.with_strategies)
        doc["strategies"] = json{{"names", strategies},
                                 {"stats", stats},
                                 {"fitness_raw", rep.fitness_raw},
                                 {"fitness_shifted", rep.fitness_shifted},
                                 {"final_population", rep.final_population},
                                 {"baseline_recovery", rep.baseline_recovery},
                                 {"outcomes", "outcomes.csv"}};
    if (options.with_game) doc["game_report"] = "game_report.json";
    if (options.with_correlation)
        doc["correlation_report"] = "correlation_report.json";
    return doc;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();

    RunReport rep;
    rep.config = config;
    if (!rep.config.world.master_seed) rep.config.world.master_seed = 42;
    rep.master_seed = *rep.config.world.master_seed;
    rep.out_dir = out_dir;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir + ": " +
                      ec.message());
    const auto path = [&](const char* name) { return out_dir + "/" + name; };

    const std::uint64_t seed = rep.master_seed;

    if (options.with_world) {
        WorldState world = make_world(rep.config.build_config(),
                                      split_seed(seed, 1));
        Rng world_rng(split_seed(seed, 2));
        for (std::uint64_t t = 0; t < rep.config.world.ticks; ++t)
            step(world, world_rng);

        rep.ticks_run = world.tick;
        rep.total_hosts = world.hosts.size();
        rep.infected_hosts = world.infected_host_count();
        rep.lineage_size = world.lineage.size();
        rep.event_count = world.event_log.size();

        write_file_checked(path("events.csv"), events_csv(world.event_log));
        write_file_checked(path("lineage.csv"), world.lineage.export_csv());
    }

    StrategyPopulationResult population;
    if (options.with_strategies || options.with_game) {
        const WorldState fixture =
            make_strategy_fixture(rep.config, split_seed(seed, 3));
        const auto specs = rep.config.strategy_specs();
        const auto params = rep.config.strategy_params();
        population = strategy_population_game(
            fixture, 0, specs, params, rep.config.fitness_spec(),
            rep.config.world.mc_trials, split_seed(seed, 4),
            rep.config.game.replicator_horizon,
            rep.config.game.replicator_tolerance);

        rep.strategies = population.strategies;
        rep.stats = population.stats;
        rep.fitness_raw = population.fitness_raw;
        rep.fitness_shifted = population.fitness_shifted;
        rep.final_population = population.dynamics.trajectory.back().shares;

        rep.baseline_recovery = mixed_strategy_recovery(
            fixture, 0, specs, params, rep.config.strategies.baseline_mix,
            rep.config.world.mc_trials, split_seed(seed, 5));

        if (options.with_strategies) {
            std::vector<std::pair<StrategyKind, std::vector<Outcome>>> rows;
            for (std::size_t i = 0; i < population.strategies.size(); ++i)
                rows.emplace_back(population.strategies[i],
                                  population.outcomes[i]);
            write_file_checked(path("outcomes.csv"), outcomes_csv(rows));
        }
    }

    if (options.with_game)
        write_file_checked(path("game_report.json"),
                           game_report_json(rep.config, population));

    if (options.with_correlation) {
        const OrganismProfile a = options.profile_a_path.empty()
                                      ? virlock_profile()
                                      : load_profile(options.profile_a_path);
        const OrganismProfile b = options.profile_b_path.empty()
                                      ? phi6_profile()
                                      : load_profile(options.profile_b_path);
        write_file_checked(path("correlation_report.json"),
                           correlation_report_json(a, b));
    }

    write_file_checked(path("config_echo.cfg"), echo_config(rep.config));
    write_file_checked(path("run_report.json"),
                       run_report_json_doc(rep, options).dump(2) + "\n");

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    char timing[64];
    std::snprintf(timing, sizeof timing, "wall_seconds = %.3f\n",
                  rep.wall_seconds);
    write_file_checked(path("timing.txt"), timing);
    return rep;
}

namespace {

struct ParamAccess {
    double (*get)(const ScenarioConfig&);
    void (*set)(ScenarioConfig&, double);
};

const std::map<std::string, ParamAccess>& param_registry() {
    static const std::map<std::string, ParamAccess> registry = {
        {"game.ransom",
         {[](const ScenarioConfig& c) { return c.game.ransom; },
          [](ScenarioConfig& c, double v) { c.game.ransom = v; }}},
        {"game.data_value",
         {[](const ScenarioConfig& c) { return c.game.data_value; },
          [](ScenarioConfig& c, double v) { c.game.data_value = v; }}},
        {"game.p_full",
         {[](const ScenarioConfig& c) { return c.game.p_full; },
          [](ScenarioConfig& c, double v) { c.game.p_full = v; }}},
        {"game.mean_restore",
         {[](const ScenarioConfig& c) { return c.game.mean_restore; },
          [](ScenarioConfig& c, double v) { c.game.mean_restore = v; }}},
        {"game.alt_recovery",
         {[](const ScenarioConfig& c) { return c.game.alt_recovery; },
          [](ScenarioConfig& c, double v) { c.game.alt_recovery = v; }}},
        {"game.reputation",
         {[](const ScenarioConfig& c) { return c.game.reputation; },
          [](ScenarioConfig& c, double v) { c.game.reputation = v; }}},
        {"virus.open_probability",
         {[](const ScenarioConfig& c) { return c.virus.open_probability; },
          [](ScenarioConfig& c, double v) { c.virus.open_probability = v; }}},
        {"virus.encryption_batch",
         {[](const ScenarioConfig& c) {
              return static_cast<double>(c.virus.encryption_batch);
          },
          [](ScenarioConfig& c, double v) {
              c.virus.encryption_batch = static_cast<std::uint32_t>(v + 0.5);
          }}},
        {"topology.er_p",
         {[](const ScenarioConfig& c) { return c.topology.er_p; },
          [](ScenarioConfig& c, double v) { c.topology.er_p = v; }}},
        {"topology.num_hosts",
         {[](const ScenarioConfig& c) {
              return static_cast<double>(c.topology.num_hosts);
          },
          [](ScenarioConfig& c, double v) {
              c.topology.num_hosts = static_cast<std::uint32_t>(v + 0.5);
          }}},
        {"av.coverage",
         {[](const ScenarioConfig& c) { return c.av.coverage; },
          [](ScenarioConfig& c, double v) { c.av.coverage = v; }}},
        {"av.behavioral_detect_prob",
         {[](const ScenarioConfig& c) { return c.av.behavioral_detect_prob; },
          [](ScenarioConfig& c, double v) {
              c.av.behavioral_detect_prob = v;
          }}},
        {"strategies.click_reinfection_hazard",
         {[](const ScenarioConfig& c) {
              return c.strategies.click_reinfection_hazard;
          },
          [](ScenarioConfig& c, double v) {
              c.strategies.click_reinfection_hazard = v;
          }}},
        {"strategies.boot_fail_prob",
         {[](const ScenarioConfig& c) { return c.strategies.boot_fail_prob; },
          [](ScenarioConfig& c, double v) {
              c.strategies.boot_fail_prob = v;
          }}},
        {"strategies.fp_prob",
         {[](const ScenarioConfig& c) { return c.strategies.fp_prob; },
          [](ScenarioConfig& c, double v) { c.strategies.fp_prob = v; }}},
        {"world.ticks",
         {[](const ScenarioConfig& c) {
              return static_cast<double>(c.world.ticks);
          },
          [](ScenarioConfig& c, double v) {
              c.world.ticks = static_cast<std::uint64_t>(v + 0.5);
          }}},
        {"world.mc_trials",
         {[](const ScenarioConfig& c) {
              return static_cast<double>(c.world.mc_trials);
          },
          [](ScenarioConfig& c, double v) {
              c.world.mc_trials = static_cast<std::uint64_t>(v + 0.5);
          }}},
    };
    return registry;
}

}  // namespace

std::vector<std::string> sweep_parameter_paths() {
    std::vector<std::string> out;
    for (const auto& [path, access] : param_registry()) out.push_back(path);
    return out;
}

SweepResult sweep(const ScenarioConfig& config, const std::string& param_path,
                  const std::vector<double>& values, const std::string& out_dir,
                  const RunOptions& options) {
    const auto it = param_registry().find(param_path);
    if (it == param_registry().end())
        throw ConfigError("unknown sweep parameter '" + param_path +
                          "'; valid paths: " + [] {
                              std::string all;
                              for (const auto& p : sweep_parameter_paths()) {
                                  if (!all.empty()) all += ", ";
                                  all += p;
                              }
                              return all;
                          }());
    if (values.empty())
        throw ConfigError("sweep needs at least one value");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir + ": " +
                      ec.message());

    ScenarioConfig base = config;
    if (!base.world.master_seed) base.world.master_seed = 42;
    const std::uint64_t master = *base.world.master_seed;

    // The sweep table needs world and strategy metrics for every point.
    RunOptions point_options = options;
    point_options.with_world = true;
    point_options.with_strategies = true;

    SweepResult result;
    result.parameter = param_path;

    std::string csv = "index,value,seed,infected_final,baseline_recovery";
    for (int s = 0; s < kStrategyCount; ++s) {
        csv += ",fitness_raw_";
        csv += to_string(static_cast<StrategyKind>(s));
        csv += ",mean_recovered_";
        csv += to_string(static_cast<StrategyKind>(s));
    }
    csv += '\n';

    json points = json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig point_config = base;
        it->second.set(point_config, values[i]);
        // Round-trip through the echo so every swept point passes the same
        // validation as a loaded file.
        point_config = parse_scenario_text(echo_config(point_config));
        point_config.world.master_seed = split_seed(master, 0xA110 + i);

        SweepPoint point;
        point.value = values[i];
        point.seed = *point_config.world.master_seed;
        point.report = run_scenario(point_config,
                                    out_dir + "/point_" + std::to_string(i),
                                    point_options);

        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%llu,%zu,%.6f", i,
                      values[i],
                      static_cast<unsigned long long>(point.seed),
                      point.report.infected_hosts,
                      point.report.baseline_recovery);
        csv += buf;
        for (int s = 0; s < kStrategyCount; ++s) {
            std::snprintf(buf, sizeof buf, ",%.10g,%.6f",
                          point.report.fitness_raw[s],
                          point.report.stats[s].mean_recovered);
            csv += buf;
        }
        csv += '\n';

        points.push_back(json{
            {"index", i},
            {"value", values[i]},
            {"seed", point.seed},
            {"out_dir", "point_" + std::to_string(i)},
            {"infected_final", point.report.infected_hosts},
            {"baseline_recovery", point.report.baseline_recovery},
            {"fitness_raw", point.report.fitness_raw},
        });
        result.points.push_back(std::move(point));
    }

    write_text_file(out_dir + "/sweep.csv", csv);
    json doc{{"parameter", param_path}, {"points", points}};
    write_text_file(out_dir + "/sweep.json", doc.dump(2) + "\n");
    return result;
}

}  // namespace virsim

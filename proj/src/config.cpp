#include "virsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "virsim/errors.hpp"
#include "virsim/ini.hpp"

namespace virsim {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

// Field parsers collect problems instead of throwing so one pass reports
// every violation at once.
struct FieldReader {
    const IniDoc& doc;
    std::vector<std::string>& issues;

    void fail(const std::string& section, const std::string& key,
              const std::string& what) const {
        issues.push_back(section + "." + key + ": " + what);
    }

    template <typename T, typename Parser>
    void read(const std::string& section, const std::string& key, T& out,
              Parser parse) const {
        const auto raw = doc.get(section, key);
        if (!raw) return;
        parse(*raw, out, section, key);
    }

    void read_double(const std::string& section, const std::string& key,
                     double& out) const {
        read(section, key, out,
             [this](const std::string& raw, double& v, const std::string& s,
                    const std::string& k) {
                 const char* b = raw.data();
                 const char* e = raw.data() + raw.size();
                 double parsed{};
                 auto [p, ec] = std::from_chars(b, e, parsed);
                 if (ec != std::errc() || p != e)
                     fail(s, k, "not a number: '" + raw + "'");
                 else
                     v = parsed;
             });
    }

    void read_prob(const std::string& section, const std::string& key,
                   double& out) const {
        double v = out;
        read_double(section, key, v);
        if (!(v >= 0.0 && v <= 1.0))
            fail(section, key, "probability outside [0,1]: " + format_double(v));
        else
            out = v;
    }

    template <typename U>
    void read_unsigned(const std::string& section, const std::string& key,
                       U& out) const {
        read(section, key, out,
             [this](const std::string& raw, U& v, const std::string& s,
                    const std::string& k) {
                 U parsed{};
                 const char* b = raw.data();
                 const char* e = raw.data() + raw.size();
                 auto [p, ec] = std::from_chars(b, e, parsed);
                 if (ec != std::errc() || p != e)
                     fail(s, k, "not an unsigned integer: '" + raw + "'");
                 else
                     v = parsed;
             });
    }

    void read_bool(const std::string& section, const std::string& key,
                   bool& out) const {
        read(section, key, out,
             [this](const std::string& raw, bool& v, const std::string& s,
                    const std::string& k) {
                 if (raw == "true")
                     v = true;
                 else if (raw == "false")
                     v = false;
                 else
                     fail(s, k, "expected true or false, got '" + raw + "'");
             });
    }

    void read_int_list(const std::string& section, const std::string& key,
                       std::vector<int>& out) const {
        read(section, key, out,
             [this](const std::string& raw, std::vector<int>& v,
                    const std::string& s, const std::string& k) {
                 std::vector<int> parsed;
                 std::size_t pos = 0;
                 while (pos <= raw.size()) {
                     std::size_t comma = raw.find(',', pos);
                     if (comma == std::string::npos) comma = raw.size();
                     std::string item = raw.substr(pos, comma - pos);
                     const auto first = item.find_first_not_of(" \t");
                     const auto last = item.find_last_not_of(" \t");
                     if (first == std::string::npos) {
                         fail(s, k, "empty item in list '" + raw + "'");
                         return;
                     }
                     item = item.substr(first, last - first + 1);
                     int value{};
                     const char* b = item.data();
                     const char* e = item.data() + item.size();
                     auto [p, ec] = std::from_chars(b, e, value);
                     if (ec != std::errc() || p != e) {
                         fail(s, k, "not an integer: '" + item + "'");
                         return;
                     }
                     parsed.push_back(value);
                     pos = comma + 1;
                     if (comma == raw.size()) break;
                 }
                 v = std::move(parsed);
             });
    }
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"world",
         {"master_seed", "ticks", "mc_trials", "out_dir", "shadow_enabled",
          "initial_snapshot"}},
        {"topology",
         {"kind", "num_hosts", "er_p", "edge_vector", "files_per_host",
          "file_size"}},
        {"virus",
         {"encryption_batch", "open_probability", "prob_email",
          "prob_download", "prob_removable", "prob_security_exploit",
          "prob_p2p", "prob_malvertising", "initial_infected",
          "initial_vector"}},
        {"av", {"kind", "coverage", "behavioral_detect_prob", "db_knows_root"}},
        {"strategies",
         {"click_reinfection_hazard", "boot_fail_prob", "fp_prob",
          "cleaner_knows_family", "fixture_files", "fixture_file_size",
          "level_low", "level_medium", "level_high", "w_effectiveness",
          "w_complexity", "w_reinfection", "w_money", "baseline_pay_ransom",
          "baseline_exploit_decrypt", "baseline_shadow_restore",
          "baseline_av_remove", "baseline_av_clean_recover",
          "complexity_pay_ransom", "complexity_exploit_decrypt",
          "complexity_shadow_restore", "complexity_av_remove",
          "complexity_av_clean_recover"}},
        {"game",
         {"data_value", "ransom", "p_full", "mean_restore", "alt_recovery",
          "reputation", "attacker_decrypt_prob", "replicator_horizon",
          "replicator_tolerance", "beta_concentration"}},
    };
    return keys;
}

const std::array<std::pair<InfectionVector, const char*>, 6>& prob_keys() {
    static const std::array<std::pair<InfectionVector, const char*>, 6> keys = {
        {{InfectionVector::EmailAttachment, "prob_email"},
         {InfectionVector::Download, "prob_download"},
         {InfectionVector::RemovableMedia, "prob_removable"},
         {InfectionVector::SecurityExploit, "prob_security_exploit"},
         {InfectionVector::P2p, "prob_p2p"},
         {InfectionVector::Malvertising, "prob_malvertising"}}};
    return keys;
}

const std::array<const char*, 5>& strategy_key_names() {
    static const std::array<const char*, 5> names = {
        "pay_ransom", "exploit_decrypt", "shadow_restore", "av_remove",
        "av_clean_recover"};
    return names;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
    const IniDoc doc = parse_ini(text);
    std::vector<std::string> issues;
    FieldReader r{doc, issues};

    for (const auto& section : doc.sections) {
        auto it = known_keys().find(section.name);
        if (it == known_keys().end()) {
            issues.push_back(section.name + ": unknown section");
            continue;
        }
        for (const auto& [key, value] : section.entries)
            if (!it->second.count(key))
                issues.push_back(section.name + "." + key + ": unknown key");
    }

    ScenarioConfig c;

    if (auto raw = doc.get("world", "master_seed")) {
        std::uint64_t seed{};
        const char* b = raw->data();
        const char* e = raw->data() + raw->size();
        auto [p, ec] = std::from_chars(b, e, seed);
        if (ec != std::errc() || p != e)
            r.fail("world", "master_seed", "not an unsigned integer: '" + *raw + "'");
        else
            c.world.master_seed = seed;
    }
    r.read_unsigned("world", "ticks", c.world.ticks);
    r.read_unsigned("world", "mc_trials", c.world.mc_trials);
    if (auto raw = doc.get("world", "out_dir")) c.world.out_dir = *raw;
    r.read_bool("world", "shadow_enabled", c.world.shadow_enabled);
    r.read_bool("world", "initial_snapshot", c.world.initial_snapshot);
    if (c.world.mc_trials == 0)
        r.fail("world", "mc_trials", "must be at least 1");

    if (auto raw = doc.get("topology", "kind")) {
        if (auto kind = topology_from_string(*raw))
            c.topology.kind = *kind;
        else
            r.fail("topology", "kind", "unknown topology '" + *raw + "'");
    }
    r.read_unsigned("topology", "num_hosts", c.topology.num_hosts);
    r.read_prob("topology", "er_p", c.topology.er_p);
    if (auto raw = doc.get("topology", "edge_vector")) {
        if (auto v = vector_from_string(*raw))
            c.topology.edge_vector = *v;
        else
            r.fail("topology", "edge_vector", "unknown vector '" + *raw + "'");
    }
    r.read_unsigned("topology", "files_per_host", c.topology.files_per_host);
    r.read_unsigned("topology", "file_size", c.topology.file_size);
    if (c.topology.num_hosts == 0)
        r.fail("topology", "num_hosts", "must be at least 1");
    if (c.topology.edge_vector == InfectionVector::CloudSync)
        r.fail("topology", "edge_vector",
               "CLOUD_SYNC spreads through shares, not contact edges");

    r.read_unsigned("virus", "encryption_batch", c.virus.encryption_batch);
    r.read_prob("virus", "open_probability", c.virus.open_probability);
    for (const auto& [vector, key] : prob_keys())
        r.read_prob("virus", key, c.virus.vector_probs[vector]);
    if (auto raw = doc.get("virus", "initial_infected")) {
        if (*raw == "none") {
            c.virus.initial_infected.reset();
        } else {
            HostId host{};
            const char* b = raw->data();
            const char* e = raw->data() + raw->size();
            auto [p, ec] = std::from_chars(b, e, host);
            if (ec != std::errc() || p != e)
                r.fail("virus", "initial_infected",
                       "expected host id or none, got '" + *raw + "'");
            else
                c.virus.initial_infected = host;
        }
    }
    if (auto raw = doc.get("virus", "initial_vector")) {
        if (auto v = vector_from_string(*raw))
            c.virus.initial_vector = *v;
        else
            r.fail("virus", "initial_vector", "unknown vector '" + *raw + "'");
    }
    if (c.virus.encryption_batch == 0)
        r.fail("virus", "encryption_batch", "must be at least 1");
    if (c.virus.initial_infected &&
        *c.virus.initial_infected >= c.topology.num_hosts)
        r.fail("virus", "initial_infected",
               "host id " + std::to_string(*c.virus.initial_infected) +
                   " does not exist in a " +
                   std::to_string(c.topology.num_hosts) + "-host world");

    if (auto raw = doc.get("av", "kind")) {
        if (*raw == "none")
            c.av.kind.reset();
        else if (*raw == "signature")
            c.av.kind = AvKind::Signature;
        else if (*raw == "behavioral")
            c.av.kind = AvKind::Behavioral;
        else
            r.fail("av", "kind",
                   "expected none, signature or behavioral, got '" + *raw + "'");
    }
    r.read_prob("av", "coverage", c.av.coverage);
    r.read_prob("av", "behavioral_detect_prob", c.av.behavioral_detect_prob);
    r.read_bool("av", "db_knows_root", c.av.db_knows_root);
    if (!c.av.kind && c.av.coverage > 0.0)
        r.fail("av", "coverage", "nonzero coverage with kind = none");

    auto& s = c.strategies;
    r.read_prob("strategies", "click_reinfection_hazard",
                s.click_reinfection_hazard);
    r.read_prob("strategies", "boot_fail_prob", s.boot_fail_prob);
    r.read_prob("strategies", "fp_prob", s.fp_prob);
    r.read_bool("strategies", "cleaner_knows_family", s.cleaner_knows_family);
    r.read_unsigned("strategies", "fixture_files", s.fixture_files);
    r.read_unsigned("strategies", "fixture_file_size", s.fixture_file_size);
    r.read_prob("strategies", "level_low", s.levels.low);
    r.read_prob("strategies", "level_medium", s.levels.medium);
    r.read_prob("strategies", "level_high", s.levels.high);
    r.read_double("strategies", "w_effectiveness", s.w_effectiveness);
    r.read_double("strategies", "w_complexity", s.w_complexity);
    r.read_double("strategies", "w_reinfection", s.w_reinfection);
    r.read_double("strategies", "w_money", s.w_money);
    for (std::size_t i = 0; i < 5; ++i) {
        double w = s.baseline_mix[i];
        r.read_double("strategies",
                      std::string("baseline_") + strategy_key_names()[i], w);
        if (!(w >= 0.0))
            r.fail("strategies",
                   std::string("baseline_") + strategy_key_names()[i],
                   "weight must be nonnegative");
        else
            s.baseline_mix[i] = w;
    }
    if (std::all_of(s.baseline_mix.begin(), s.baseline_mix.end(),
                    [](double w) { return w == 0.0; }))
        r.fail("strategies", "baseline_*", "baseline mix has no weight");
    {
        const std::array<std::size_t, 5> expected_lengths = {2, 2, 2, 3, 4};
        for (std::size_t i = 0; i < 5; ++i) {
            const std::string key =
                std::string("complexity_") + strategy_key_names()[i];
            std::vector<int> list = s.step_complexity[i];
            r.read_int_list("strategies", key, list);
            if (list.size() != expected_lengths[i]) {
                r.fail("strategies", key,
                       "pipeline has " + std::to_string(expected_lengths[i]) +
                           " steps, got " + std::to_string(list.size()) +
                           " values");
                continue;
            }
            bool in_range = true;
            for (int v : list)
                if (v < 0 || v > 10) in_range = false;
            if (!in_range) {
                r.fail("strategies", key, "step complexity outside 0..10");
                continue;
            }
            s.step_complexity[i] = std::move(list);
        }
    }
    if (!(s.levels.low < s.levels.medium && s.levels.medium < s.levels.high))
        r.fail("strategies", "level_low/level_medium/level_high",
               "level mapping must be strictly increasing");
    if (s.fixture_files == 0)
        r.fail("strategies", "fixture_files", "must be at least 1");

    auto& g = c.game;
    r.read_double("game", "data_value", g.data_value);
    r.read_double("game", "ransom", g.ransom);
    r.read_prob("game", "p_full", g.p_full);
    r.read_prob("game", "mean_restore", g.mean_restore);
    r.read_prob("game", "alt_recovery", g.alt_recovery);
    r.read_double("game", "reputation", g.reputation);
    r.read_prob("game", "attacker_decrypt_prob", g.attacker_decrypt_prob);
    r.read_unsigned("game", "replicator_horizon", g.replicator_horizon);
    r.read_double("game", "replicator_tolerance", g.replicator_tolerance);
    r.read_double("game", "beta_concentration", g.beta_concentration);
    if (!(g.replicator_tolerance > 0.0))
        r.fail("game", "replicator_tolerance", "must be positive");
    if (!(g.beta_concentration > 0.0))
        r.fail("game", "beta_concentration", "must be positive");
    try {
        build_default_matrix(c.matrix_params());
    } catch (const ConstraintError& e) {
        issues.push_back(std::string("game: payoff constraint violated: ") +
                         e.what());
    }

    if (!issues.empty()) throw ConfigError(issues);
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    return parse_scenario_text(read_text_file(path));
}

namespace {

// The three quoted statistics keep their bare lines; everything else is an
// invented or calibrated default and says so.
constexpr const char* kNotFromPaper = "  # default: not from paper";

void emit(std::string& out, const std::string& key, const std::string& value,
          bool from_paper = false) {
    out += key;
    out += " = ";
    out += value;
    if (!from_paper) out += kNotFromPaper;
    out += '\n';
}

}  // namespace

std::string echo_config(const ScenarioConfig& c) {
    std::string out;
    out += "[world]\n";
    if (c.world.master_seed)
        emit(out, "master_seed", std::to_string(*c.world.master_seed));
    emit(out, "ticks", std::to_string(c.world.ticks));
    emit(out, "mc_trials", std::to_string(c.world.mc_trials));
    emit(out, "out_dir", c.world.out_dir);
    emit(out, "shadow_enabled", format_bool(c.world.shadow_enabled));
    emit(out, "initial_snapshot", format_bool(c.world.initial_snapshot));

    out += "\n[topology]\n";
    emit(out, "kind", to_string(c.topology.kind));
    emit(out, "num_hosts", std::to_string(c.topology.num_hosts));
    emit(out, "er_p", format_double(c.topology.er_p));
    emit(out, "edge_vector", to_string(c.topology.edge_vector));
    emit(out, "files_per_host", std::to_string(c.topology.files_per_host));
    emit(out, "file_size", std::to_string(c.topology.file_size));

    out += "\n[virus]\n";
    emit(out, "encryption_batch", std::to_string(c.virus.encryption_batch));
    emit(out, "open_probability", format_double(c.virus.open_probability));
    for (const auto& [vector, key] : prob_keys())
        emit(out, key, format_double(c.virus.vector_probs.at(vector)));
    emit(out, "initial_infected",
         c.virus.initial_infected ? std::to_string(*c.virus.initial_infected)
                                  : std::string("none"));
    emit(out, "initial_vector", to_string(c.virus.initial_vector));

    out += "\n[av]\n";
    emit(out, "kind",
         c.av.kind ? to_string(*c.av.kind) : "none");
    emit(out, "coverage", format_double(c.av.coverage));
    emit(out, "behavioral_detect_prob",
         format_double(c.av.behavioral_detect_prob), true);
    emit(out, "db_knows_root", format_bool(c.av.db_knows_root));

    out += "\n[strategies]\n";
    const auto& s = c.strategies;
    emit(out, "click_reinfection_hazard",
         format_double(s.click_reinfection_hazard));
    emit(out, "boot_fail_prob", format_double(s.boot_fail_prob));
    emit(out, "fp_prob", format_double(s.fp_prob));
    emit(out, "cleaner_knows_family", format_bool(s.cleaner_knows_family));
    emit(out, "fixture_files", std::to_string(s.fixture_files));
    emit(out, "fixture_file_size", std::to_string(s.fixture_file_size));
    emit(out, "level_low", format_double(s.levels.low));
    emit(out, "level_medium", format_double(s.levels.medium));
    emit(out, "level_high", format_double(s.levels.high));
    emit(out, "w_effectiveness", format_double(s.w_effectiveness));
    emit(out, "w_complexity", format_double(s.w_complexity));
    emit(out, "w_reinfection", format_double(s.w_reinfection));
    emit(out, "w_money", format_double(s.w_money));
    for (std::size_t i = 0; i < 5; ++i)
        emit(out, std::string("baseline_") + strategy_key_names()[i],
             format_double(s.baseline_mix[i]));
    for (std::size_t i = 0; i < 5; ++i) {
        std::string list;
        for (std::size_t j = 0; j < s.step_complexity[i].size(); ++j) {
            if (j) list += ',';
            list += std::to_string(s.step_complexity[i][j]);
        }
        emit(out, std::string("complexity_") + strategy_key_names()[i], list);
    }

    out += "\n[game]\n";
    const auto& g = c.game;
    emit(out, "data_value", format_double(g.data_value));
    emit(out, "ransom", format_double(g.ransom));
    emit(out, "p_full", format_double(g.p_full), true);
    emit(out, "mean_restore", format_double(g.mean_restore), true);
    emit(out, "alt_recovery", format_double(g.alt_recovery));
    emit(out, "reputation", format_double(g.reputation));
    emit(out, "attacker_decrypt_prob", format_double(g.attacker_decrypt_prob));
    emit(out, "replicator_horizon", std::to_string(g.replicator_horizon));
    emit(out, "replicator_tolerance", format_double(g.replicator_tolerance));
    emit(out, "beta_concentration", format_double(g.beta_concentration));
    return out;
}

WorldBuildConfig ScenarioConfig::build_config() const {
    WorldBuildConfig b;
    b.topology = topology.kind;
    b.num_hosts = topology.num_hosts;
    b.er_p = topology.er_p;
    b.edge_vector = topology.edge_vector;
    b.files_per_host = topology.files_per_host;
    b.file_size = topology.file_size;
    b.open_probability = virus.open_probability;
    b.shadow_enabled = world.shadow_enabled;
    b.initial_snapshot = world.initial_snapshot;
    b.av_kind = av.kind.value_or(AvKind::Behavioral);
    b.av_coverage = av.kind ? av.coverage : 0.0;
    b.behavioral_detect_prob = av.behavioral_detect_prob;
    b.av_db_knows_root = av.db_knows_root;
    b.params.encryption_batch = virus.encryption_batch;
    b.params.vector_probs = virus.vector_probs;
    b.initial_infected = virus.initial_infected;
    b.initial_vector = virus.initial_vector;
    return b;
}

StrategyParams ScenarioConfig::strategy_params() const {
    StrategyParams p;
    p.ransom = game.ransom;
    p.transfer_id = std::string(64, '0');
    p.p_full = game.p_full;
    p.mean_restore = game.mean_restore;
    p.beta_concentration = game.beta_concentration;
    p.boot_fail_prob = strategies.boot_fail_prob;
    p.fp_prob = strategies.fp_prob;
    p.cleaner_knows_family = strategies.cleaner_knows_family;
    p.av.kind = AvKind::Behavioral;
    p.av.behavioral_detect_prob = av.behavioral_detect_prob;
    return p;
}

std::vector<StrategySpec> ScenarioConfig::strategy_specs() const {
    auto specs = default_strategy_specs(strategies.click_reinfection_hazard);
    for (std::size_t i = 0; i < specs.size(); ++i)
        for (std::size_t j = 0; j < specs[i].steps.size(); ++j)
            specs[i].steps[j].complexity = strategies.step_complexity[i][j];
    return specs;
}

MatrixParams ScenarioConfig::matrix_params() const {
    MatrixParams m;
    m.data_value = game.data_value;
    m.ransom = game.ransom;
    m.mean_restore = game.mean_restore;
    m.alt_recovery = game.alt_recovery;
    m.reputation = game.reputation;
    return m;
}

FitnessSpec ScenarioConfig::fitness_spec() const {
    FitnessSpec f;
    f.w_effectiveness = strategies.w_effectiveness;
    f.w_complexity = strategies.w_complexity;
    f.w_reinfection = strategies.w_reinfection;
    f.w_money = strategies.w_money;
    f.data_value = game.data_value;
    return f;
}

OrganismProfile parse_profile_text(const std::string& text) {
    const IniDoc doc = parse_ini(text);
    std::vector<std::string> issues;

    std::string name;
    if (auto n = doc.get("profile", "name"))
        name = *n;
    else
        issues.push_back("profile.name: missing");

    std::vector<LifecycleStep> steps;
    const IniSection* lifecycle = doc.find("lifecycle");
    if (!lifecycle) {
        issues.push_back("lifecycle: missing section");
    } else {
        for (const auto& raw : lifecycle->all("stage")) {
            const auto bar = raw.find('|');
            std::string stage_name =
                bar == std::string::npos ? raw : raw.substr(0, bar);
            const auto last = stage_name.find_last_not_of(" \t");
            stage_name = last == std::string::npos
                             ? std::string()
                             : stage_name.substr(0, last + 1);
            std::string label;
            if (bar != std::string::npos) {
                label = raw.substr(bar + 1);
                const auto first = label.find_first_not_of(" \t");
                label = first == std::string::npos ? std::string()
                                                   : label.substr(first);
            }
            if (auto stage = stage_from_string(stage_name))
                steps.push_back({*stage, label});
            else
                issues.push_back("lifecycle.stage: unknown stage '" +
                                 stage_name + "'");
        }
    }

    std::map<std::string, bool> traits;
    if (const IniSection* trait_section = doc.find("traits"))
        for (const auto& [key, value] : trait_section->entries) {
            if (value == "true")
                traits[key] = true;
            else if (value == "false")
                traits[key] = false;
            else
                issues.push_back("traits." + key +
                                 ": expected true or false, got '" + value +
                                 "'");
        }

    if (!issues.empty()) throw ConfigError(issues);

    OrganismProfile profile;
    profile.name = std::move(name);
    profile.lifecycle = make_lifecycle_model(profile.name, std::move(steps));
    profile.traits = make_trait_vector(std::move(traits));
    return profile;
}

OrganismProfile load_profile(const std::string& path) {
    return parse_profile_text(read_text_file(path));
}

}  // namespace virsim

#include "virsim/defense_recovery.hpp"

#include <algorithm>
#include <cmath>

#include "virsim/errors.hpp"
#include "virsim/payload_codec.hpp"

namespace virsim {

const char* to_string(AvKind kind) {
    return kind == AvKind::Signature ? "signature" : "behavioral";
}

const char* to_string(StrategyKind s) {
    switch (s) {
        case StrategyKind::PayRansom: return "PAY_RANSOM";
        case StrategyKind::ExploitDecrypt: return "EXPLOIT_DECRYPT";
        case StrategyKind::ShadowRestore: return "SHADOW_RESTORE";
        case StrategyKind::AvRemove: return "AV_REMOVE";
        case StrategyKind::AvCleanRecover: return "AV_CLEAN_RECOVER";
    }
    return "UNKNOWN";
}

std::optional<StrategyKind> strategy_from_string(const std::string& name) {
    static const std::pair<const char*, StrategyKind> table[] = {
        {"PAY_RANSOM", StrategyKind::PayRansom},
        {"EXPLOIT_DECRYPT", StrategyKind::ExploitDecrypt},
        {"SHADOW_RESTORE", StrategyKind::ShadowRestore},
        {"AV_REMOVE", StrategyKind::AvRemove},
        {"AV_CLEAN_RECOVER", StrategyKind::AvCleanRecover},
    };
    for (const auto& [key, value] : table)
        if (name == key) return value;
    return std::nullopt;
}

const char* to_string(Level level) {
    switch (level) {
        case Level::Low: return "LOW";
        case Level::Medium: return "MEDIUM";
        case Level::High: return "HIGH";
    }
    return "UNKNOWN";
}

std::optional<Level> level_from_string(const std::string& name) {
    if (name == "LOW") return Level::Low;
    if (name == "MEDIUM") return Level::Medium;
    if (name == "HIGH") return Level::High;
    return std::nullopt;
}

void LevelMap::validate() const {
    if (!(0.0 <= low && low < medium && medium < high && high <= 1.0))
        throw ConfigError(std::string(
            "level map must satisfy 0 <= low < medium < high <= 1"));
}

double level_to_prob(Level level, const LevelMap& map) {
    map.validate();
    switch (level) {
        case Level::Low: return map.low;
        case Level::Medium: return map.medium;
        case Level::High: return map.high;
    }
    return map.medium;
}

int StrategySpec::total_complexity() const {
    int sum = 0;
    for (const auto& s : steps) sum += s.complexity;
    return sum;
}

std::vector<StrategySpec> default_strategy_specs(double click_hazard) {
    std::vector<StrategySpec> specs;

    specs.push_back({StrategyKind::PayRansom,
                     {{"acquire_payment", 1, 0.0}, {"submit_and_wait", 1, 0.0}},
                     Level::Medium,
                     Level::High});
    specs.push_back({StrategyKind::ExploitDecrypt,
                     {{"enter_zero_transfer_id", 4, 0.0},
                      {"click_decrypt_file", 3, click_hazard}},
                     Level::High,
                     Level::High});
    specs.push_back({StrategyKind::ShadowRestore,
                     {{"boot_safe_mode", 3, 0.0}, {"restore_shadow_copies", 2, 0.0}},
                     Level::High,
                     Level::Low});
    specs.push_back({StrategyKind::AvRemove,
                     {{"boot_safe_mode", 2, 0.0},
                      {"install_update_av", 1, 0.0},
                      {"scan_and_remove", 1, 0.0}},
                     Level::Low,
                     Level::Low});
    specs.push_back({StrategyKind::AvCleanRecover,
                     {{"boot_safe_mode", 2, 0.0},
                      {"install_update_av", 1, 0.0},
                      {"scan_and_remove", 1, 0.0},
                      {"run_family_cleaner", 2, 0.0}},
                     Level::High,
                     Level::Low});
    return specs;
}

std::set<VariantId> scan(const HostState& host, const Lineage& lineage,
                         const AVConfig& av, Rng& rng) {
    std::set<VariantId> detected;
    const bool behavioral = av.kind == AvKind::Behavioral && av.live_analysis;
    for (VariantId id : host.active_infections) {
        if (behavioral) {
            // One independent draw per active variant; the probability is a
            // property of the shared core, not of the surface decoration.
            if (rng.bernoulli(av.behavioral_detect_prob)) detected.insert(id);
        } else if (av.signature_db.count(lineage.variant(id).surface_signature)) {
            detected.insert(id);
        }
    }
    return detected;
}

std::size_t remove_detected(WorldState& world, HostId host_id,
                            const std::set<VariantId>& detected) {
    HostState& host = world.host(host_id);
    std::vector<FileRecord> kept;
    kept.reserve(host.files.size());
    std::size_t removed = 0;
    for (auto& f : host.files) {
        if (f.owner && detected.count(*f.owner)) {
            Event e;
            e.tick = world.tick;
            e.type = EventType::AvRemoveFile;
            e.host = host_id;
            e.variant = f.owner;
            e.detail = f.name;
            world.event_log.push_back(std::move(e));
            ++removed;
        } else {
            kept.push_back(std::move(f));
        }
    }
    host.files = std::move(kept);
    host.recompute_active_infections();
    if (!host.infected()) host.set_sabotage(true);
    return removed;
}

namespace {

std::vector<std::uint64_t> encrypted_file_ids(const HostState& host) {
    std::vector<std::uint64_t> ids;
    for (const auto& f : host.files)
        if (f.encrypted_original()) ids.push_back(f.file_id);
    return ids;
}

// Decrypt one infected original back to its clean self.
void restore_file(WorldState& world, FileRecord& f) {
    const VirusVariant& variant = world.lineage.variant(*f.owner);
    PayloadLayout layout = parse_layout(f.content);
    f.content = unwrap(layout, variant);
    f.name = layout.original_name;
    f.status = FileStatus::Clean;
    f.owner.reset();
    f.visible_extension = true;
    f.is_dropped_executable = false;
}

void push_event(WorldState& world, EventType type, HostId host,
                std::optional<VariantId> variant, std::string detail) {
    Event e;
    e.tick = world.tick;
    e.type = type;
    e.host = host;
    e.variant = variant;
    e.detail = std::move(detail);
    world.event_log.push_back(std::move(e));
}

// First pipeline step is the safe-mode boot; on failure the attempt ends
// with nothing else executed.
bool boot_fails(WorldState& world, HostId host_id, const StepSpec& boot,
                const StrategyParams& params, Outcome& o, Rng& rng) {
    o.total_complexity += boot.complexity;
    ++o.steps_executed;
    if (rng.bernoulli(params.boot_fail_prob)) {
        push_event(world, EventType::BootFail, host_id, std::nullopt, boot.name);
        return true;
    }
    return false;
}

void run_plain_steps(const StrategySpec& spec, std::size_t first,
                     std::size_t last_excl, Outcome& o) {
    for (std::size_t i = first; i < last_excl; ++i) {
        o.total_complexity += spec.steps[i].complexity;
        ++o.steps_executed;
    }
}

double fraction_or_vacuous(std::size_t got, std::size_t want) {
    return want == 0 ? 1.0 : static_cast<double>(got) / static_cast<double>(want);
}

Outcome pay_ransom(WorldState& world, HostId host_id, const StrategySpec& spec,
                   const StrategyParams& params, Rng& rng) {
    Outcome o;
    run_plain_steps(spec, 0, spec.steps.size(), o);
    HostState& host = world.host(host_id);

    o.ransom_paid = params.ransom;
    push_event(world, EventType::RansomPaid, host_id, std::nullopt,
               std::to_string(params.ransom));

    const auto enc = encrypted_file_ids(host);
    std::size_t quota = enc.size();
    if (!rng.bernoulli(params.p_full)) {
        // Attacker restores only part of the data. The conditional mean is
        // chosen so that full and partial cases together average out to
        // mean_restore.
        double cond = params.p_full < 1.0
                          ? (params.mean_restore - params.p_full) /
                                (1.0 - params.p_full)
                          : 1.0;
        cond = std::clamp(cond, 0.001, 0.999);
        const double kappa = params.beta_concentration;
        const double frac = rng.beta(cond * kappa, (1.0 - cond) * kappa);
        quota = static_cast<std::size_t>(
            std::llround(frac * static_cast<double>(enc.size())));
    }

    std::size_t restored = 0;
    for (auto& f : host.files) {
        if (restored >= quota) break;
        if (!f.encrypted_original()) continue;
        const VariantId owner = *f.owner;
        restore_file(world, f);
        push_event(world, EventType::RecoverFile, host_id, owner, f.name);
        ++restored;
    }
    host.recompute_active_infections();

    o.recovered_fraction = fraction_or_vacuous(restored, enc.size());
    o.malware_removed = false;
    return o;
}

Outcome exploit_decrypt(WorldState& world, HostId host_id,
                        const StrategySpec& spec, const StrategyParams& params,
                        Rng& rng) {
    Outcome o;
    run_plain_steps(spec, 0, spec.steps.size() - 1, o);

    TransferId id(params.transfer_id);
    if (!exploit_check(id)) return o;

    HostState& host = world.host(host_id);
    const StepSpec& click = spec.steps.back();
    const auto enc = encrypted_file_ids(host);

    std::size_t decrypted = 0;
    for (auto& f : host.files) {
        if (!f.encrypted_original()) continue;
        const VariantId owner = *f.owner;
        restore_file(world, f);
        push_event(world, EventType::ClickDecrypt, host_id, owner, f.name);
        o.total_complexity += click.complexity;
        ++o.steps_executed;
        ++decrypted;
        if (rng.bernoulli(click.reinfection_hazard)) {
            // The decrypt shell is still Virlock code; a stray launch
            // reinfects and the user gives up on the remaining files.
            o.reinfected = true;
            push_event(world, EventType::Reinfect, host_id, owner, "click");
            break;
        }
    }
    host.recompute_active_infections();

    o.recovered_fraction = fraction_or_vacuous(decrypted, enc.size());
    o.malware_removed = false;
    return o;
}

Outcome shadow_restore(WorldState& world, HostId host_id,
                       const StrategySpec& spec, const StrategyParams& params,
                       Rng& rng) {
    HostState& host = world.host(host_id);
    if (!host.shadow_enabled)
        throw StrategyUnavailableError("shadow copies are disabled on host " +
                                       std::to_string(host_id));

    Outcome o;
    if (boot_fails(world, host_id, spec.steps.front(), params, o, rng)) return o;
    run_plain_steps(spec, 1, spec.steps.size(), o);

    if (host.shadow_snapshots.empty()) return o;

    const auto enc = encrypted_file_ids(host);
    restore_snapshot(world, host_id, host.shadow_snapshots.size() - 1);

    std::size_t recovered = 0;
    for (std::uint64_t id : enc)
        for (const auto& f : host.files)
            if (f.file_id == id && !f.infected()) {
                ++recovered;
                break;
            }

    o.recovered_fraction = fraction_or_vacuous(recovered, enc.size());
    o.malware_removed = !host.infected();
    return o;
}

Outcome av_remove(WorldState& world, HostId host_id, const StrategySpec& spec,
                  const StrategyParams& params, Rng& rng) {
    Outcome o;
    if (boot_fails(world, host_id, spec.steps.front(), params, o, rng)) return o;
    run_plain_steps(spec, 1, spec.steps.size(), o);

    HostState& host = world.host(host_id);
    const AVConfig& av = host.av ? *host.av : params.av;
    std::set<VariantId> detected = scan(host, world.lineage, av, rng);
    for (VariantId v : detected)
        push_event(world, EventType::AvDetect, host_id, v, "");
    remove_detected(world, host_id, detected);

    o.recovered_fraction = 0.0;
    o.malware_removed = !host.infected();
    return o;
}

Outcome av_clean_recover(WorldState& world, HostId host_id,
                         const StrategySpec& spec, const StrategyParams& params,
                         Rng& rng) {
    Outcome o;
    if (boot_fails(world, host_id, spec.steps.front(), params, o, rng)) return o;
    run_plain_steps(spec, 1, spec.steps.size(), o);

    HostState& host = world.host(host_id);
    const auto enc = encrypted_file_ids(host);

    const AVConfig& av = host.av ? *host.av : params.av;
    std::set<VariantId> detected = scan(host, world.lineage, av, rng);
    for (VariantId v : detected)
        push_event(world, EventType::AvDetect, host_id, v, "");

    std::optional<Digest128> known_core;
    if (params.cleaner_knows_family && !world.lineage.empty())
        known_core = world.lineage.variant(world.lineage.root_id()).core_signature;

    // Variants the family cleaner handles are left to it; plain removal
    // would delete the encrypted originals it can still win back.
    std::set<VariantId> unknown;
    for (VariantId v : detected)
        if (!known_core ||
            !(world.lineage.variant(v).core_signature == *known_core))
            unknown.insert(v);
    remove_detected(world, host_id, unknown);

    if (known_core) {
        std::vector<FileRecord> kept;
        kept.reserve(host.files.size());
        for (auto& f : host.files) {
            if (f.infected() && f.owner &&
                world.lineage.variant(*f.owner).core_signature == *known_core) {
                if (f.is_dropped_executable) {
                    push_event(world, EventType::AvRemoveFile, host_id, f.owner,
                               f.name);
                    continue;
                }
                const VariantId owner = *f.owner;
                restore_file(world, f);
                push_event(world, EventType::RecoverFile, host_id, owner, f.name);
            }
            kept.push_back(std::move(f));
        }
        host.files = std::move(kept);
        host.recompute_active_infections();
        if (!host.infected()) host.set_sabotage(true);
    }

    if (params.fp_prob > 0.0) {
        std::vector<FileRecord> kept;
        kept.reserve(host.files.size());
        for (auto& f : host.files) {
            if (!f.infected() && rng.bernoulli(params.fp_prob)) {
                push_event(world, EventType::FpDelete, host_id, std::nullopt,
                           f.name);
                continue;
            }
            kept.push_back(std::move(f));
        }
        host.files = std::move(kept);
    }

    std::size_t recovered = 0;
    for (std::uint64_t id : enc)
        for (const auto& f : host.files)
            if (f.file_id == id && !f.infected()) {
                ++recovered;
                break;
            }

    o.recovered_fraction = fraction_or_vacuous(recovered, enc.size());
    o.malware_removed = !host.infected();
    return o;
}

}  // namespace

Outcome apply_strategy(WorldState& world, HostId host_id,
                       const StrategySpec& spec, const StrategyParams& params,
                       Rng& rng) {
    if (spec.steps.empty())
        throw ValidationError("strategy pipeline has no steps");
    world.host(host_id);  // existence check up front

    switch (spec.strategy) {
        case StrategyKind::PayRansom:
            return pay_ransom(world, host_id, spec, params, rng);
        case StrategyKind::ExploitDecrypt:
            return exploit_decrypt(world, host_id, spec, params, rng);
        case StrategyKind::ShadowRestore:
            return shadow_restore(world, host_id, spec, params, rng);
        case StrategyKind::AvRemove:
            return av_remove(world, host_id, spec, params, rng);
        case StrategyKind::AvCleanRecover:
            return av_clean_recover(world, host_id, spec, params, rng);
    }
    throw ValidationError("unknown strategy kind");
}

std::string outcomes_csv(
    const std::vector<std::pair<StrategyKind, std::vector<Outcome>>>& by_strategy) {
    std::string out =
        "trial,strategy,recovered_fraction,malware_removed,reinfected,"
        "ransom_paid,total_complexity\n";
    char buf[64];
    for (const auto& [strategy, outcomes] : by_strategy) {
        for (std::size_t t = 0; t < outcomes.size(); ++t) {
            const Outcome& o = outcomes[t];
            std::snprintf(buf, sizeof buf, "%zu,%s,%.6f,%d,%d,%.6f,%d\n", t,
                          to_string(strategy), o.recovered_fraction,
                          o.malware_removed ? 1 : 0, o.reinfected ? 1 : 0,
                          o.ransom_paid, o.total_complexity);
            out += buf;
        }
    }
    return out;
}

}  // namespace virsim

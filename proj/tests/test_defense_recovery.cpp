#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "virsim/defense_recovery.hpp"
#include "virsim/errors.hpp"
#include "virsim/host_network.hpp"

using namespace virsim;

namespace {

// Single host, every document encrypted, t0 snapshot available.
WorldState encrypted_host(std::uint32_t files = 10, bool shadow = true) {
    WorldBuildConfig c;
    c.topology = Topology::Complete;
    c.num_hosts = 1;
    c.files_per_host = files;
    c.file_size = 24;
    c.shadow_enabled = shadow;
    c.params.encryption_batch = files;
    WorldState world = make_world(c, 99);
    Rng rng(100);
    while (world.host(0).encrypted_file_count() < files) step(world, rng);
    return world;
}

StrategySpec spec_for(StrategyKind kind, double click_hazard = 0.0) {
    for (auto& s : default_strategy_specs(click_hazard))
        if (s.strategy == kind) return s;
    throw std::logic_error("unknown kind");
}

std::size_t count_events(const WorldState& world, EventType type) {
    return static_cast<std::size_t>(
        std::count_if(world.event_log.begin(), world.event_log.end(),
                      [type](const Event& e) { return e.type == type; }));
}

}  // namespace

TEST_CASE("builtin pipelines carry the declared shapes and complexities") {
    const auto specs = default_strategy_specs(0.002);
    REQUIRE(specs.size() == 5);
    const std::array<StrategyKind, 5> kinds = {
        StrategyKind::PayRansom, StrategyKind::ExploitDecrypt,
        StrategyKind::ShadowRestore, StrategyKind::AvRemove,
        StrategyKind::AvCleanRecover};
    const std::array<std::size_t, 5> steps = {2, 2, 2, 3, 4};
    const std::array<int, 5> totals = {2, 7, 5, 4, 6};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(specs[i].strategy == kinds[i]);
        CHECK(specs[i].steps.size() == steps[i]);
        CHECK(specs[i].total_complexity() == totals[i]);
    }
    CHECK(specs[1].steps.back().reinfection_hazard == 0.002);
}

TEST_CASE("the level map converts labels and rejects bad orderings") {
    CHECK(level_to_prob(Level::Low) == 0.25);
    CHECK(level_to_prob(Level::Medium) == 0.50);
    CHECK(level_to_prob(Level::High) == 0.85);
    CHECK_THROWS_AS((LevelMap{0.5, 0.5, 0.9}.validate()), ConfigError);
    CHECK_THROWS_AS((LevelMap{0.2, 0.1, 0.9}.validate()), ConfigError);
    CHECK_THROWS_AS((LevelMap{0.2, 0.5, 1.5}.validate()), ConfigError);
}

TEST_CASE("signature scanning matches database surfaces exactly") {
    WorldState world = encrypted_host(4);
    const HostState& host = world.host(0);
    REQUIRE(host.active_infections.size() > 1);

    const VariantId first = *host.active_infections.begin();
    AVConfig av;
    av.kind = AvKind::Signature;
    av.signature_db.insert(world.lineage.variant(first).surface_signature);

    Rng rng(1);
    const auto detected = scan(host, world.lineage, av, rng);
    CHECK(detected == std::set<VariantId>{first});
}

TEST_CASE("behavioral scanning detects per-variant at the configured rate") {
    WorldState world = encrypted_host(6);
    const HostState& host = world.host(0);
    Rng rng(2);

    AVConfig av;
    av.kind = AvKind::Behavioral;
    av.behavioral_detect_prob = 1.0;
    CHECK(scan(host, world.lineage, av, rng) == host.active_infections);

    av.behavioral_detect_prob = 0.0;
    CHECK(scan(host, world.lineage, av, rng).empty());

    // without live analysis the scanner degrades to its signature database
    av.behavioral_detect_prob = 1.0;
    av.live_analysis = false;
    CHECK(scan(host, world.lineage, av, rng).empty());
}

TEST_CASE("removal deletes the detected variants' files and repairs flags") {
    WorldState world = encrypted_host(4);
    HostState& host = world.host(0);
    const std::size_t infected_files = host.files.size();

    const std::size_t removed =
        remove_detected(world, 0, host.active_infections);
    CHECK(removed == infected_files);  // droppers plus encrypted documents
    CHECK(host.files.empty());
    CHECK_FALSE(host.infected());
    CHECK(host.flags_benign());
    CHECK(count_events(world, EventType::AvRemoveFile) == removed);
}

TEST_CASE("paying with a fully cooperative attacker restores everything") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.p_full = 1.0;
    Rng rng(3);

    const Outcome o = apply_strategy(world, 0, spec_for(StrategyKind::PayRansom),
                                     params, rng);
    CHECK(o.recovered_fraction == 1.0);
    CHECK(o.ransom_paid == params.ransom);
    CHECK_FALSE(o.malware_removed);
    CHECK_FALSE(o.reinfected);
    CHECK(o.steps_executed == 2);
    CHECK(o.total_complexity == 2);

    CHECK(world.host(0).encrypted_file_count() == 0);
    CHECK(world.host(0).dropped_executable_count() == 3);  // malware stays
    CHECK(count_events(world, EventType::RansomPaid) == 1);
    CHECK(count_events(world, EventType::RecoverFile) == 10);
}

TEST_CASE("a partial restore recovers at most the attacker's quota") {
    StrategyParams params;
    params.p_full = 0.0;
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        WorldState world = encrypted_host(8);
        Rng rng(500 + trial);
        const Outcome o = apply_strategy(
            world, 0, spec_for(StrategyKind::PayRansom), params, rng);
        CHECK(o.ransom_paid == params.ransom);
        CHECK(o.recovered_fraction >= 0.0);
        CHECK(o.recovered_fraction <= 1.0);
        const double files_back = o.recovered_fraction * 8.0;
        CHECK(std::abs(files_back - std::round(files_back)) < 1e-9);
    }
}

TEST_CASE("the all-zero transfer id decrypts every file for free") {
    WorldState world = encrypted_host();
    StrategyParams params;  // transfer id defaults to 64 zeros
    Rng rng(4);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::ExploitDecrypt, 0.0), params, rng);
    CHECK(o.recovered_fraction == 1.0);
    CHECK(o.ransom_paid == 0.0);
    CHECK_FALSE(o.reinfected);
    CHECK_FALSE(o.malware_removed);
    CHECK(o.steps_executed == 1 + 10);  // id entry plus one click per file

    CHECK(world.host(0).encrypted_file_count() == 0);
    CHECK(count_events(world, EventType::ClickDecrypt) == 10);
}

TEST_CASE("any non-zero transfer id recovers nothing") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.transfer_id = std::string(63, '0') + "1";
    Rng rng(5);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::ExploitDecrypt, 0.0), params, rng);
    CHECK(o.recovered_fraction == 0.0);
    CHECK(world.host(0).encrypted_file_count() == 10);
    CHECK(count_events(world, EventType::ClickDecrypt) == 0);
}

TEST_CASE("a certain click hazard reinfects after the first decryption") {
    WorldState world = encrypted_host();
    StrategyParams params;
    Rng rng(6);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::ExploitDecrypt, 1.0), params, rng);
    CHECK(o.reinfected);
    CHECK(o.recovered_fraction == doctest::Approx(0.1));  // 1 of 10, then abort
    CHECK(count_events(world, EventType::ClickDecrypt) == 1);
    CHECK(count_events(world, EventType::Reinfect) == 1);
}

TEST_CASE("shadow restore rolls the host back to the pre-infection snapshot") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 0.0;
    Rng rng(7);

    const std::vector<FileRecord> pristine =
        world.host(0).shadow_snapshots[0].files;
    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::ShadowRestore), params, rng);
    CHECK(o.recovered_fraction == 1.0);
    CHECK(o.malware_removed);
    CHECK(o.steps_executed == 2);
    CHECK(world.host(0).files == pristine);
    // registry repair is not part of the rollback
    CHECK_FALSE(world.host(0).flags_benign());
}

TEST_CASE("a failed safe-mode boot aborts the pipeline early") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 1.0;
    Rng rng(8);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::ShadowRestore), params, rng);
    CHECK(o.recovered_fraction == 0.0);
    CHECK_FALSE(o.malware_removed);
    CHECK(o.steps_executed == 1);
    CHECK(count_events(world, EventType::BootFail) == 1);
    CHECK(world.host(0).encrypted_file_count() == 10);
}

TEST_CASE("shadow restore is unavailable when the host has no shadows") {
    WorldState world = encrypted_host(10, false);
    StrategyParams params;
    Rng rng(9);
    CHECK_THROWS_AS(apply_strategy(world, 0,
                                   spec_for(StrategyKind::ShadowRestore),
                                   params, rng),
                    StrategyUnavailableError);
}

TEST_CASE("plain removal deletes the malware and the data with it") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 0.0;
    params.av.behavioral_detect_prob = 1.0;
    Rng rng(10);

    const Outcome o = apply_strategy(world, 0,
                                     spec_for(StrategyKind::AvRemove), params,
                                     rng);
    CHECK(o.recovered_fraction == 0.0);
    CHECK(o.malware_removed);
    CHECK(o.steps_executed == 3);
    CHECK(world.host(0).files.empty());  // every file carried the infection
}

TEST_CASE("the family cleaner restores documents instead of deleting them") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 0.0;
    params.fp_prob = 0.0;
    params.av.behavioral_detect_prob = 1.0;
    Rng rng(11);

    const std::vector<FileRecord> pristine =
        world.host(0).shadow_snapshots[0].files;
    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::AvCleanRecover), params, rng);
    CHECK(o.recovered_fraction == 1.0);
    CHECK(o.malware_removed);
    CHECK_FALSE(o.reinfected);
    CHECK(world.host(0).files == pristine);
    CHECK(world.host(0).flags_benign());
}

TEST_CASE("without family knowledge the cleanup degrades to plain removal") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 0.0;
    params.fp_prob = 0.0;
    params.cleaner_knows_family = false;
    params.av.behavioral_detect_prob = 1.0;
    Rng rng(12);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::AvCleanRecover), params, rng);
    CHECK(o.recovered_fraction == 0.0);
    CHECK(o.malware_removed);
    CHECK(world.host(0).files.empty());
}

TEST_CASE("false positives during cleanup count against the recovery") {
    WorldState world = encrypted_host();
    StrategyParams params;
    params.boot_fail_prob = 0.0;
    params.fp_prob = 1.0;
    params.av.behavioral_detect_prob = 1.0;
    Rng rng(13);

    const Outcome o = apply_strategy(
        world, 0, spec_for(StrategyKind::AvCleanRecover), params, rng);
    CHECK(o.recovered_fraction == 0.0);
    CHECK(world.host(0).files.empty());
    CHECK(count_events(world, EventType::FpDelete) == 10);
}

TEST_CASE("strategies with no encrypted files report a vacuous full recovery") {
    WorldBuildConfig c;
    c.topology = Topology::Complete;
    c.num_hosts = 1;
    c.files_per_host = 5;
    WorldState world = make_world(c, 55);  // infected, nothing encrypted yet
    StrategyParams params;
    params.p_full = 1.0;
    Rng rng(14);

    const Outcome o = apply_strategy(world, 0,
                                     spec_for(StrategyKind::PayRansom), params,
                                     rng);
    CHECK(o.recovered_fraction == 1.0);
}

TEST_CASE("apply_strategy validates its inputs") {
    WorldState world = encrypted_host();
    StrategyParams params;
    Rng rng(15);

    StrategySpec empty = spec_for(StrategyKind::PayRansom);
    empty.steps.clear();
    CHECK_THROWS_AS(apply_strategy(world, 0, empty, params, rng),
                    ValidationError);
    CHECK_THROWS_AS(apply_strategy(world, 9, spec_for(StrategyKind::PayRansom),
                                   params, rng),
                    WorldIntegrityError);
}

TEST_CASE("outcomes replay identically from one rng seed") {
    StrategyParams params;
    for (StrategyKind kind :
         {StrategyKind::PayRansom, StrategyKind::ExploitDecrypt,
          StrategyKind::ShadowRestore, StrategyKind::AvRemove,
          StrategyKind::AvCleanRecover}) {
        WorldState wa = encrypted_host();
        WorldState wb = encrypted_host();
        Rng ra(1234), rb(1234);
        const Outcome oa =
            apply_strategy(wa, 0, spec_for(kind, 0.01), params, ra);
        const Outcome ob =
            apply_strategy(wb, 0, spec_for(kind, 0.01), params, rb);
        CHECK(oa == ob);
        CHECK(events_csv(wa.event_log) == events_csv(wb.event_log));
    }
}

TEST_CASE("outcome rows serialize under the documented header") {
    Outcome o;
    o.recovered_fraction = 0.5;
    o.ransom_paid = 20.0;
    o.total_complexity = 7;
    o.steps_executed = 3;
    const std::string csv =
        outcomes_csv({{StrategyKind::ExploitDecrypt, {o, o}}});
    CHECK(csv.rfind("trial,strategy,recovered_fraction,malware_removed,"
                    "reinfected,ransom_paid,total_complexity\n",
                    0) == 0);
    CHECK(csv.find("0,EXPLOIT_DECRYPT,0.500000,0,0,20.000000,7\n") !=
          std::string::npos);
    CHECK(csv.find("1,EXPLOIT_DECRYPT,") != std::string::npos);
}

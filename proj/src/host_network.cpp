#include "virsim/host_network.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "virsim/defense_recovery.hpp"
#include "virsim/errors.hpp"
#include "virsim/payload_codec.hpp"

namespace virsim {

const char* to_string(InfectionVector v) {
    switch (v) {
        case InfectionVector::EmailAttachment: return "EMAIL";
        case InfectionVector::Download: return "DOWNLOAD";
        case InfectionVector::RemovableMedia: return "REMOVABLE";
        case InfectionVector::SecurityExploit: return "SECURITY_EXPLOIT";
        case InfectionVector::P2p: return "P2P";
        case InfectionVector::Malvertising: return "MALVERTISING";
        case InfectionVector::CloudSync: return "CLOUD_SYNC";
    }
    return "UNKNOWN";
}

std::optional<InfectionVector> vector_from_string(const std::string& name) {
    static const std::pair<const char*, InfectionVector> table[] = {
        {"EMAIL", InfectionVector::EmailAttachment},
        {"DOWNLOAD", InfectionVector::Download},
        {"REMOVABLE", InfectionVector::RemovableMedia},
        {"SECURITY_EXPLOIT", InfectionVector::SecurityExploit},
        {"P2P", InfectionVector::P2p},
        {"MALVERTISING", InfectionVector::Malvertising},
        {"CLOUD_SYNC", InfectionVector::CloudSync},
    };
    for (const auto& [key, value] : table)
        if (name == key) return value;
    return std::nullopt;
}

const char* to_string(EventType t) {
    switch (t) {
        case EventType::Infect: return "INFECT";
        case EventType::Reinfect: return "REINFECT";
        case EventType::DropExec: return "DROP_EXEC";
        case EventType::Sabotage: return "SABOTAGE";
        case EventType::EncryptFile: return "ENCRYPT_FILE";
        case EventType::CloudSync: return "CLOUD_SYNC";
        case EventType::CloudOpen: return "CLOUD_OPEN";
        case EventType::EdgeFire: return "EDGE_FIRE";
        case EventType::AvDetect: return "AV_DETECT";
        case EventType::AvRemoveFile: return "AV_REMOVE_FILE";
        case EventType::Snapshot: return "SNAPSHOT";
        case EventType::Restore: return "RESTORE";
        case EventType::ClickDecrypt: return "CLICK_DECRYPT";
        case EventType::RecoverFile: return "RECOVER_FILE";
        case EventType::FpDelete: return "FP_DELETE";
        case EventType::RansomPaid: return "RANSOM_PAID";
        case EventType::BootFail: return "BOOT_FAIL";
    }
    return "UNKNOWN";
}

const char* to_string(Topology t) {
    switch (t) {
        case Topology::Complete: return "complete";
        case Topology::ErdosRenyi: return "erdos_renyi";
        case Topology::StarCloud: return "star_cloud";
    }
    return "unknown";
}

std::optional<Topology> topology_from_string(const std::string& name) {
    if (name == "complete") return Topology::Complete;
    if (name == "erdos_renyi") return Topology::ErdosRenyi;
    if (name == "star_cloud") return Topology::StarCloud;
    return std::nullopt;
}

void HostState::set_sabotage(bool benign) {
    uac_enabled = benign;
    task_manager_enabled = benign;
    explorer_running = benign;
    extensions_shown = benign;
    hidden_files_shown = benign;
}

std::size_t HostState::dropped_executable_count() const {
    std::size_t n = 0;
    for (const auto& f : files)
        if (f.is_dropped_executable) ++n;
    return n;
}

std::size_t HostState::encrypted_file_count() const {
    std::size_t n = 0;
    for (const auto& f : files)
        if (f.encrypted_original()) ++n;
    return n;
}

void HostState::recompute_active_infections() {
    active_infections.clear();
    for (const auto& f : files)
        if (f.infected() && f.owner) active_infections.insert(*f.owner);
}

HostState& WorldState::host(HostId id) {
    if (id >= hosts.size())
        throw WorldIntegrityError("unknown host id " + std::to_string(id));
    return hosts[id];
}

const HostState& WorldState::host(HostId id) const {
    if (id >= hosts.size())
        throw WorldIntegrityError("unknown host id " + std::to_string(id));
    return hosts[id];
}

std::size_t WorldState::infected_host_count() const {
    std::size_t n = 0;
    for (const auto& h : hosts)
        if (h.infected()) ++n;
    return n;
}

namespace {

std::string random_file_name(Rng& rng) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string name(12, 'a');
    for (auto& c : name) c = alphabet[rng.uniform_index(36)];
    return name;
}

Event make_event(const WorldState& world, EventType type, HostId host) {
    Event e;
    e.tick = world.tick;
    e.type = type;
    e.host = host;
    return e;
}

}  // namespace

std::vector<Event> infect_host(WorldState& world, HostId host_id,
                               const VirusVariant& parent,
                               InfectionVector vector, Rng& rng) {
    HostState& host = world.host(host_id);
    if (!world.lineage.contains(parent.id) ||
        !(world.lineage.variant(parent.id) == parent))
        throw LineageError("infection parent is not a registered variant");

    std::vector<Event> out;
    if (host.infected()) {
        Event e = make_event(world, EventType::Reinfect, host_id);
        e.variant = parent.id;
        e.vector = vector;
        out.push_back(e);
        world.event_log.push_back(e);
        return out;
    }

    {
        Event e = make_event(world, EventType::Infect, host_id);
        e.variant = parent.id;
        e.vector = vector;
        out.push_back(e);
    }

    for (int i = 0; i < 3; ++i) {
        VirusVariant child = world.lineage.mutate(parent, rng, world.tick);
        std::string name = random_file_name(rng);
        PayloadLayout layout = wrap(Bytes{}, name, child);

        FileRecord f;
        f.file_id = host.next_file_id++;
        f.name = name;
        f.content = serialize(layout);
        f.status = FileStatus::Infected;
        f.owner = child.id;
        f.visible_extension = host.extensions_shown;
        f.is_dropped_executable = true;
        host.files.push_back(std::move(f));
        host.active_infections.insert(child.id);

        Event e = make_event(world, EventType::DropExec, host_id);
        e.variant = child.id;
        e.detail = name;
        out.push_back(e);
    }

    host.set_sabotage(false);
    {
        Event e = make_event(world, EventType::Sabotage, host_id);
        e.variant = parent.id;
        out.push_back(e);
    }

    world.event_log.insert(world.event_log.end(), out.begin(), out.end());
    return out;
}

namespace {

void log_event(WorldState& world, std::vector<Event>& out, Event e) {
    out.push_back(e);
    world.event_log.push_back(std::move(e));
}

// Encrypt-in-place pass for one infected host: up to encryption_batch clean
// files become polymorphic carriers, each wrapped by a fresh child variant.
void encrypt_pass(WorldState& world, HostState& host, Rng& rng,
                  std::vector<Event>& out) {
    const VirusVariant parent =
        world.lineage.variant(*host.active_infections.begin());
    std::uint32_t done = 0;
    for (auto& f : host.files) {
        if (done >= world.params.encryption_batch) break;
        if (f.status != FileStatus::Clean) continue;

        VirusVariant child = world.lineage.mutate(parent, rng, world.tick);
        PayloadLayout layout = wrap(f.content, f.name, child);
        f.content = serialize(layout);
        f.status = FileStatus::Infected;
        f.owner = child.id;
        f.visible_extension = host.extensions_shown;
        host.active_infections.insert(child.id);
        ++done;

        Event e = make_event(world, EventType::EncryptFile, host.host_id);
        e.variant = child.id;
        e.detail = f.name;
        log_event(world, out, std::move(e));
    }
}

}  // namespace

std::vector<Event> step(WorldState& world, Rng& rng) {
    std::vector<Event> out;

    // Transmission sources are judged by the state at the start of the tick,
    // so an infection landing this round only starts acting next round.
    // Targets are judged live, which keeps a host from being infected twice
    // within one round.
    std::vector<bool> infected_at_start(world.hosts.size());
    for (std::size_t i = 0; i < world.hosts.size(); ++i)
        infected_at_start[i] = world.hosts[i].infected();

    for (auto& host : world.hosts)
        if (infected_at_start[host.host_id]) encrypt_pass(world, host, rng, out);

    for (auto& share : world.shares) {
        for (HostId member : share.members) {
            const HostState& host = world.host(member);
            for (const auto& f : host.files) {
                if (!f.infected()) continue;
                if (!share.synced_keys.insert({member, f.file_id}).second)
                    continue;
                share.synced.push_back(SyncedImage{member, f});

                Event e = make_event(world, EventType::CloudSync, member);
                e.variant = f.owner;
                e.detail = f.name;
                log_event(world, out, std::move(e));
            }
        }
    }

    for (auto& share : world.shares) {
        if (share.synced.empty()) continue;
        for (HostId member : share.members) {
            HostState& host = world.host(member);
            if (host.infected()) continue;
            if (!rng.bernoulli(host.open_probability)) continue;

            // Opening any synced image is enough; the first one stands in
            // for the user double-clicking a familiar-looking document.
            const SyncedImage& image = share.synced.front();
            const VirusVariant parent =
                world.lineage.variant(*image.image.owner);

            Event e = make_event(world, EventType::CloudOpen, member);
            e.variant = parent.id;
            e.vector = InfectionVector::CloudSync;
            e.detail = image.image.name;
            log_event(world, out, std::move(e));

            auto sub = infect_host(world, member, parent,
                                   InfectionVector::CloudSync, rng);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }

    for (const auto& edge : world.edges) {
        if (!infected_at_start[edge.src]) continue;
        if (world.host(edge.dst).infected()) continue;
        auto it = world.params.vector_probs.find(edge.vector);
        const double p = it == world.params.vector_probs.end() ? 0.0 : it->second;
        if (!rng.bernoulli(p)) continue;

        const HostState& src = world.host(edge.src);
        const VirusVariant parent =
            world.lineage.variant(*src.active_infections.begin());

        Event e = make_event(world, EventType::EdgeFire, edge.dst);
        e.variant = parent.id;
        e.vector = edge.vector;
        e.detail = "src_" + std::to_string(edge.src);
        log_event(world, out, std::move(e));

        auto sub = infect_host(world, edge.dst, parent, edge.vector, rng);
        out.insert(out.end(), sub.begin(), sub.end());
    }

    for (auto& host : world.hosts) {
        if (!host.av || !host.infected()) continue;
        std::set<VariantId> detected = scan(host, world.lineage, *host.av, rng);
        if (detected.empty()) continue;
        for (VariantId v : detected) {
            Event e = make_event(world, EventType::AvDetect, host.host_id);
            e.variant = v;
            log_event(world, out, std::move(e));
        }
        const std::size_t before = world.event_log.size();
        remove_detected(world, host.host_id, detected);
        out.insert(out.end(), world.event_log.begin() + static_cast<long>(before),
                   world.event_log.end());
    }

    ++world.tick;
    return out;
}

std::size_t take_snapshot(WorldState& world, HostId host_id) {
    HostState& host = world.host(host_id);
    if (!host.shadow_enabled)
        throw StrategyUnavailableError("shadow copies are disabled on host " +
                                       std::to_string(host_id));
    host.shadow_snapshots.push_back(ShadowSnapshot{world.tick, host.files});

    Event e;
    e.tick = world.tick;
    e.type = EventType::Snapshot;
    e.host = host_id;
    e.detail = "id_" + std::to_string(host.shadow_snapshots.size() - 1);
    world.event_log.push_back(e);
    return host.shadow_snapshots.size() - 1;
}

std::size_t restore_snapshot(WorldState& world, HostId host_id,
                             std::size_t snapshot_id) {
    HostState& host = world.host(host_id);
    if (!host.shadow_enabled)
        throw StrategyUnavailableError("shadow copies are disabled on host " +
                                       std::to_string(host_id));
    if (snapshot_id >= host.shadow_snapshots.size())
        throw WorldIntegrityError("missing snapshot " +
                                  std::to_string(snapshot_id) + " on host " +
                                  std::to_string(host_id));
    host.files = host.shadow_snapshots[snapshot_id].files;
    host.recompute_active_infections();

    Event e;
    e.tick = world.tick;
    e.type = EventType::Restore;
    e.host = host_id;
    e.detail = "id_" + std::to_string(snapshot_id);
    world.event_log.push_back(e);
    return host.files.size();
}

std::string events_csv(const std::vector<Event>& events) {
    std::string out = "tick,event_type,host_id,variant_id,vector,detail\n";
    for (const auto& e : events) {
        out += std::to_string(e.tick);
        out += ',';
        out += to_string(e.type);
        out += ',';
        out += std::to_string(e.host);
        out += ',';
        if (e.variant) out += std::to_string(*e.variant);
        out += ',';
        if (e.vector) out += to_string(*e.vector);
        out += ',';
        out += e.detail;
        out += '\n';
    }
    return out;
}

WorldState make_world(const WorldBuildConfig& config, std::uint64_t world_seed) {
    if (config.num_hosts == 0)
        throw ValidationError("a world needs at least one host");
    if (config.edge_vector == InfectionVector::CloudSync)
        throw ValidationError(
            "cloud sync propagates through shares, not contact edges");

    WorldState world;
    world.rng_seed = world_seed;
    world.params = config.params;

    Rng build(split_seed(world_seed, 0xB111D));

    for (HostId i = 0; i < config.num_hosts; ++i) {
        HostState host;
        host.host_id = i;
        host.open_probability = config.open_probability;
        host.shadow_enabled = config.shadow_enabled;
        for (std::uint32_t j = 0; j < config.files_per_host; ++j) {
            FileRecord f;
            f.file_id = host.next_file_id++;
            f.name = "doc_" + std::to_string(j);
            f.content = seeded_bytes(build.next_u64(), 0xF11E5EED00000000ULL,
                                     config.file_size);
            host.files.push_back(std::move(f));
        }
        world.hosts.push_back(std::move(host));
    }

    switch (config.topology) {
        case Topology::Complete:
            for (HostId a = 0; a < config.num_hosts; ++a)
                for (HostId b = 0; b < config.num_hosts; ++b)
                    if (a != b)
                        world.edges.push_back({a, b, config.edge_vector});
            break;
        case Topology::ErdosRenyi:
            for (HostId a = 0; a < config.num_hosts; ++a)
                for (HostId b = 0; b < config.num_hosts; ++b)
                    if (a != b && build.bernoulli(config.er_p))
                        world.edges.push_back({a, b, config.edge_vector});
            break;
        case Topology::StarCloud: {
            CloudShare share;
            share.share_id = 0;
            for (HostId i = 0; i < config.num_hosts; ++i)
                share.members.push_back(i);
            world.shares.push_back(std::move(share));
            break;
        }
    }

    const VirusVariant root = world.lineage.spawn_root(world_seed);

    if (config.av_coverage > 0.0) {
        auto covered = static_cast<std::uint32_t>(
            config.av_coverage * config.num_hosts + 0.5);
        covered = std::min(covered, config.num_hosts);
        SignatureDb db;
        if (config.av_db_knows_root) db.insert(root.surface_signature);
        for (HostId i = 0; i < covered; ++i) {
            AVConfig av;
            av.kind = config.av_kind;
            av.signature_db = db;
            av.behavioral_detect_prob = config.behavioral_detect_prob;
            world.hosts[i].av = av;
        }
    }

    if (config.shadow_enabled && config.initial_snapshot)
        for (HostId i = 0; i < config.num_hosts; ++i) take_snapshot(world, i);

    if (config.initial_infected)
        infect_host(world, *config.initial_infected, root,
                    config.initial_vector, build);

    return world;
}

}  // namespace virsim

#ifndef VIRSIM_HOST_NETWORK_HPP
#define VIRSIM_HOST_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "virsim/av_config.hpp"
#include "virsim/digest.hpp"
#include "virsim/payload_codec.hpp"
#include "virsim/rng.hpp"
#include "virsim/virus_model.hpp"

namespace virsim {

using HostId = std::uint32_t;

enum class InfectionVector {
    EmailAttachment,
    Download,
    RemovableMedia,
    SecurityExploit,
    P2p,
    Malvertising,
    CloudSync,
};

const char* to_string(InfectionVector v);
std::optional<InfectionVector> vector_from_string(const std::string& name);

enum class FileStatus : std::uint8_t { Clean, Infected };

// One simulated file. Infected files hold the serialized payload image as
// their content and carry exactly one owning variant.
struct FileRecord {
    std::uint64_t file_id{0};
    std::string name;
    Bytes content;
    FileStatus status{FileStatus::Clean};
    std::optional<VariantId> owner{};
    bool visible_extension{true};
    bool is_dropped_executable{false};

    bool operator==(const FileRecord&) const = default;

    bool infected() const { return status == FileStatus::Infected; }
    // An encrypted original: infected but not a dropper, so there is clean
    // content to win back.
    bool encrypted_original() const {
        return infected() && !is_dropped_executable;
    }
};

struct ShadowSnapshot {
    std::uint64_t taken_tick{0};
    std::vector<FileRecord> files;

    bool operator==(const ShadowSnapshot&) const = default;
};

struct HostState {
    HostId host_id{0};
    std::vector<FileRecord> files;

    // Registry sabotage flags; benign position is all true.
    bool uac_enabled{true};
    bool task_manager_enabled{true};
    bool explorer_running{true};
    bool extensions_shown{true};
    bool hidden_files_shown{true};

    bool shadow_enabled{false};
    std::vector<ShadowSnapshot> shadow_snapshots;
    std::optional<AVConfig> av{};
    std::set<VariantId> active_infections;
    double open_probability{0.2};

    std::uint64_t next_file_id{0};

    bool infected() const { return !active_infections.empty(); }
    bool flags_benign() const {
        return uac_enabled && task_manager_enabled && explorer_running &&
               extensions_shown && hidden_files_shown;
    }
    std::size_t dropped_executable_count() const;
    std::size_t encrypted_file_count() const;
    void recompute_active_infections();
    // Flip all five flags at once: false on infection, true on cleanup.
    void set_sabotage(bool benign);
};

struct SyncedImage {
    HostId provenance{0};
    FileRecord image;
};

struct CloudShare {
    std::uint32_t share_id{0};
    std::vector<HostId> members;
    std::vector<SyncedImage> synced;
    // (provenance host, file id) pairs already synced; images are immutable
    // once infected, so one copy per pair suffices.
    std::set<std::pair<HostId, std::uint64_t>> synced_keys;
};

struct ContactEdge {
    HostId src{0};
    HostId dst{0};
    InfectionVector vector{InfectionVector::P2p};
};

enum class EventType {
    Infect,
    Reinfect,
    DropExec,
    Sabotage,
    EncryptFile,
    CloudSync,
    CloudOpen,
    EdgeFire,
    AvDetect,
    AvRemoveFile,
    Snapshot,
    Restore,
    ClickDecrypt,
    RecoverFile,
    FpDelete,
    RansomPaid,
    BootFail,
};

const char* to_string(EventType t);

struct Event {
    std::uint64_t tick{0};
    EventType type{EventType::Infect};
    HostId host{0};
    std::optional<VariantId> variant{};
    std::optional<InfectionVector> vector{};
    std::string detail;

    bool operator==(const Event&) const = default;
};

// Tick-engine knobs. All invented calibration defaults, config-overridable.
struct WorldParams {
    std::uint32_t encryption_batch{8};
    std::map<InfectionVector, double> vector_probs{
        {InfectionVector::EmailAttachment, 0.05},
        {InfectionVector::Download, 0.03},
        {InfectionVector::RemovableMedia, 0.02},
        {InfectionVector::SecurityExploit, 0.01},
        {InfectionVector::P2p, 0.02},
        {InfectionVector::Malvertising, 0.01},
    };
};

// The whole simulated world. Owned and mutated by exactly one execution
// context; independent worlds run concurrently on split seeds.
struct WorldState {
    std::vector<HostState> hosts;
    std::vector<CloudShare> shares;
    std::vector<ContactEdge> edges;
    std::uint64_t tick{0};
    std::uint64_t rng_seed{0};
    Lineage lineage;
    std::vector<Event> event_log;
    WorldParams params;

    HostState& host(HostId id);
    const HostState& host(HostId id) const;

    std::size_t infected_host_count() const;
};

// Full Virlock arrival on one host: three freshly mutated dropper
// executables plus the registry sabotage. Re-arrival on an already
// infected host is logged distinctly and does not re-drop.
std::vector<Event> infect_host(WorldState& world, HostId host_id,
                               const VirusVariant& parent_variant,
                               InfectionVector vector, Rng& rng);

// One synchronous tick: background encryption, cloud sync, cloud opens,
// contact-edge transmission, resident AV, tick increment.
std::vector<Event> step(WorldState& world, Rng& rng);

// Deep copy of the host's current files; later infection never touches it.
std::size_t take_snapshot(WorldState& world, HostId host_id);

// Replace the host's files with the snapshot copy. Sabotage flags are not
// reset here; flag repair belongs to the recovery strategies.
std::size_t restore_snapshot(WorldState& world, HostId host_id,
                             std::size_t snapshot_id);

// CSV with header `tick,event_type,host_id,variant_id,vector,detail`.
std::string events_csv(const std::vector<Event>& events);

enum class Topology { Complete, ErdosRenyi, StarCloud };

const char* to_string(Topology t);
std::optional<Topology> topology_from_string(const std::string& name);

struct WorldBuildConfig {
    Topology topology{Topology::StarCloud};
    std::uint32_t num_hosts{6};
    double er_p{0.10};
    InfectionVector edge_vector{InfectionVector::P2p};
    std::uint32_t files_per_host{12};
    std::uint32_t file_size{64};
    double open_probability{0.2};
    bool shadow_enabled{true};
    bool initial_snapshot{true};
    AvKind av_kind{AvKind::Behavioral};
    double av_coverage{0.0};  // fraction of hosts (lowest ids first)
    double behavioral_detect_prob{0.30};
    bool av_db_knows_root{true};
    WorldParams params;
    std::optional<HostId> initial_infected{0};
    InfectionVector initial_vector{InfectionVector::EmailAttachment};
};

// Deterministic world from (config, seed): hosts with seeded file contents,
// topology edges/shares, optional t0 snapshots, then the initial infection.
WorldState make_world(const WorldBuildConfig& config, std::uint64_t world_seed);

}  // namespace virsim

#endif

#include "virsim/virus_model.hpp"

#include <cstdio>

#include "virsim/errors.hpp"

namespace virsim {

namespace {
constexpr std::uint64_t kCoreLabel = 0xC07E516000000001ULL;
constexpr std::uint64_t kRootDecoLabel = 0xDEC0000000000002ULL;
}  // namespace

const VirusVariant& Lineage::spawn_root(std::uint64_t world_seed) {
    if (!variants_.empty()) {
        throw LineageError("lineage already has a root");
    }
    VirusVariant root;
    root.id = 0;
    root.parent = std::nullopt;
    root.generation = 0;
    root.core_signature = digest128_u64(world_seed, kCoreLabel);
    root.decoration_seed = mix64(world_seed ^ kRootDecoLabel);
    root.surface_signature = digest128_pair(root.core_signature, root.decoration_seed);
    root.created_tick = 0;
    return insert(std::move(root));
}

const VirusVariant& Lineage::mutate(const VirusVariant& parent, Rng& rng,
                                    std::uint64_t created_tick) {
    if (!contains(parent.id) || variants_[parent.id] != parent) {
        throw LineageError("mutate: parent variant not registered in this lineage");
    }
    VirusVariant child;
    child.id = static_cast<VariantId>(variants_.size());
    child.parent = parent.id;
    child.generation = parent.generation + 1;
    child.core_signature = parent.core_signature;
    child.decoration_seed = rng.next_u64();
    child.surface_signature = digest128_pair(child.core_signature, child.decoration_seed);
    child.created_tick = created_tick;
    return insert(std::move(child));
}

const VirusVariant& Lineage::variant(VariantId id) const {
    if (!contains(id)) {
        throw LineageError("unknown variant id " + std::to_string(id));
    }
    return variants_[id];
}

const std::vector<VariantId>& Lineage::children(VariantId id) const {
    if (!contains(id)) {
        throw LineageError("unknown variant id " + std::to_string(id));
    }
    return children_[id];
}

VariantId Lineage::root_id() const {
    if (variants_.empty()) {
        throw LineageError("lineage is empty");
    }
    return 0;
}

const VirusVariant& Lineage::insert(VirusVariant v) {
    if (!surfaces_.insert(v.surface_signature).second) {
        // 2^-128-scale event; surfacing it loudly beats silently breaking
        // the uniqueness invariant downstream.
        throw LineageError("surface signature collision at variant " +
                           std::to_string(v.id));
    }
    if (v.parent) {
        children_[*v.parent].push_back(v.id);
    }
    variants_.push_back(std::move(v));
    children_.emplace_back();
    return variants_.back();
}

std::string Lineage::export_csv() const {
    std::string out = "variant_id,parent_id,generation,created_tick,surface_signature_hex\n";
    char buf[128];
    for (const auto& v : variants_) {
        std::string parent = v.parent ? std::to_string(*v.parent) : std::string();
        std::snprintf(buf, sizeof(buf), "%llu,%s,%llu,%llu,",
                      static_cast<unsigned long long>(v.id), parent.c_str(),
                      static_cast<unsigned long long>(v.generation),
                      static_cast<unsigned long long>(v.created_tick));
        out += buf;
        out += v.surface_signature.hex();
        out += '\n';
    }
    return out;
}

}  // namespace virsim

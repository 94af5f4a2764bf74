#ifndef VIRSIM_VIRUS_MODEL_HPP
#define VIRSIM_VIRUS_MODEL_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "virsim/digest.hpp"
#include "virsim/rng.hpp"

namespace virsim {

// Unique within one world, assigned sequentially, never reused.
using VariantId = std::uint64_t;

// One node in the polymorphic lineage: an invariant behavioral core wrapped
// in per-copy decoration. The core signature is shared by the entire
// lineage; the surface signature changes with every decoration seed.
struct VirusVariant {
    VariantId id{0};
    std::optional<VariantId> parent{};
    std::uint64_t generation{0};
    Digest128 core_signature{};
    std::uint64_t decoration_seed{0};
    Digest128 surface_signature{};
    std::uint64_t created_tick{0};

    bool operator==(const VirusVariant&) const = default;
};

// Mutation history of one world's virus population. Owns every variant;
// ids index into the internal store. Mutated only by the single-threaded
// world engine; variants themselves are immutable values.
class Lineage {
public:
    // Generation-0 variant, derived deterministically from the world seed.
    // Throws LineageError if a root already exists.
    const VirusVariant& spawn_root(std::uint64_t world_seed);

    // Child with a fresh decoration seed and the parent's core.
    // Throws LineageError if the parent is not registered.
    const VirusVariant& mutate(const VirusVariant& parent, Rng& rng,
                               std::uint64_t created_tick = 0);

    bool contains(VariantId id) const { return id < variants_.size(); }
    const VirusVariant& variant(VariantId id) const;
    const std::vector<VariantId>& children(VariantId id) const;
    VariantId root_id() const;
    bool empty() const { return variants_.empty(); }
    std::size_t size() const { return variants_.size(); }

    // Newline-delimited `variant_id,parent_id,generation,created_tick,
    // surface_signature_hex`; parent_id empty for the root.
    std::string export_csv() const;

private:
    std::vector<VirusVariant> variants_;
    std::vector<std::vector<VariantId>> children_;
    std::set<Digest128> surfaces_;  // collision guard over the whole run

    const VirusVariant& insert(VirusVariant v);
};

using SignatureDb = std::set<Digest128>;

// Signature-based detection: known iff this exact surface has been seen.
inline bool is_known(const VirusVariant& variant, const SignatureDb& db) {
    return db.count(variant.surface_signature) > 0;
}

}  // namespace virsim

#endif

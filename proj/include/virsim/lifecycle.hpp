#ifndef VIRSIM_LIFECYCLE_HPP
#define VIRSIM_LIFECYCLE_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace virsim {

// Canonical infection stages, ordered. Concrete models pick a subset;
// DORMANCY in particular is optional.
enum class LifecycleStage {
    Attachment,
    Penetration,
    Unpacking,
    Replication,
    SpreadRelease,
    Dormancy,
};

const char* to_string(LifecycleStage s);
std::optional<LifecycleStage> stage_from_string(const std::string& name);

struct LifecycleStep {
    LifecycleStage stage{LifecycleStage::Attachment};
    std::string label;  // organism-specific wording for the stage

    bool operator==(const LifecycleStep&) const = default;
};

struct LifecycleModel {
    std::string organism;
    std::vector<LifecycleStep> steps;

    bool operator==(const LifecycleModel&) const = default;
};

// Validated constructor: at least two steps, stages in non-decreasing
// canonical order, ATTACHMENT and REPLICATION both present.
// Throws ValidationError otherwise.
LifecycleModel make_lifecycle_model(std::string organism,
                                    std::vector<LifecycleStep> steps);

// Named boolean traits. The nine core traits are always present; profiles
// may add difference traits on top.
struct TraitVector {
    std::map<std::string, bool> traits;

    bool operator==(const TraitVector&) const = default;
};

const std::array<std::string, 9>& core_trait_names();

// Fills in any missing core trait as false.
TraitVector make_trait_vector(std::map<std::string, bool> traits);

struct OrganismProfile {
    std::string name;
    LifecycleModel lifecycle;
    TraitVector traits;

    bool operator==(const OrganismProfile&) const = default;
};

// The two builtin profiles the correlation analysis ships with.
OrganismProfile virlock_profile();
OrganismProfile phi6_profile();

// Jaccard index over true traits, union of both universes, absent = false.
// Both all-false counts as identical (1.0).
double similarity(const TraitVector& a, const TraitVector& b);

// Same, restricted to the nine core traits.
double core_similarity(const TraitVector& a, const TraitVector& b);

struct AlignmentPair {
    LifecycleStage stage{LifecycleStage::Attachment};
    std::string label_a;
    std::string label_b;

    bool operator==(const AlignmentPair&) const = default;
};

struct Alignment {
    std::vector<AlignmentPair> pairs;
    std::size_t lcs_length{0};
    double score{0.0};  // lcs_length / max(|a|, |b|)
};

// Longest common subsequence over the canonical stage sequences, with the
// matched stages reported under both organisms' labels.
Alignment align_lifecycles(const LifecycleModel& a, const LifecycleModel& b);

}  // namespace virsim

#endif

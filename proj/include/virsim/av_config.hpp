#ifndef VIRSIM_AV_CONFIG_HPP
#define VIRSIM_AV_CONFIG_HPP

#include "virsim/virus_model.hpp"

namespace virsim {

// Signature AV matches exact surface signatures from its database.
// Behavioral AV recognizes the invariant core with some probability per
// scan; the probability is keyed on the core signature, so every member
// of a lineage is equally detectable.
enum class AvKind { Signature, Behavioral };

struct AVConfig {
    AvKind kind{AvKind::Behavioral};
    SignatureDb signature_db;
    double behavioral_detect_prob{0.30};  // 70% of malware evades detection
    bool live_analysis{true};

    bool operator==(const AVConfig&) const = default;
};

const char* to_string(AvKind kind);

}  // namespace virsim

#endif

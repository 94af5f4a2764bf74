#include "virsim/lifecycle.hpp"

#include <algorithm>

#include "virsim/errors.hpp"

namespace virsim {

const char* to_string(LifecycleStage s) {
    switch (s) {
        case LifecycleStage::Attachment: return "ATTACHMENT";
        case LifecycleStage::Penetration: return "PENETRATION";
        case LifecycleStage::Unpacking: return "UNPACKING";
        case LifecycleStage::Replication: return "REPLICATION";
        case LifecycleStage::SpreadRelease: return "SPREAD_RELEASE";
        case LifecycleStage::Dormancy: return "DORMANCY";
    }
    return "UNKNOWN";
}

std::optional<LifecycleStage> stage_from_string(const std::string& name) {
    static const std::pair<const char*, LifecycleStage> table[] = {
        {"ATTACHMENT", LifecycleStage::Attachment},
        {"PENETRATION", LifecycleStage::Penetration},
        {"UNPACKING", LifecycleStage::Unpacking},
        {"REPLICATION", LifecycleStage::Replication},
        {"SPREAD_RELEASE", LifecycleStage::SpreadRelease},
        {"DORMANCY", LifecycleStage::Dormancy},
    };
    for (const auto& [key, value] : table)
        if (name == key) return value;
    return std::nullopt;
}

LifecycleModel make_lifecycle_model(std::string organism,
                                    std::vector<LifecycleStep> steps) {
    if (steps.size() < 2)
        throw ValidationError("a lifecycle model needs at least two stages");
    bool attachment = false, replication = false;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i > 0 && steps[i].stage < steps[i - 1].stage)
            throw ValidationError(
                "lifecycle stages must appear in canonical order");
        attachment |= steps[i].stage == LifecycleStage::Attachment;
        replication |= steps[i].stage == LifecycleStage::Replication;
    }
    if (!attachment || !replication)
        throw ValidationError(
            "a lifecycle model needs ATTACHMENT and REPLICATION stages");
    return LifecycleModel{std::move(organism), std::move(steps)};
}

const std::array<std::string, 9>& core_trait_names() {
    static const std::array<std::string, 9> names = {
        "self_replication_exponential_growth",
        "host_manipulation_self_protection",
        "full_host_takeover",
        "host_type_specificity",
        "parasitic_embedding",
        "contact_spread",
        "mutable_wrapper_stable_core",
        "rapid_mutation_external_help",
        "stealth_hard_elimination",
    };
    return names;
}

TraitVector make_trait_vector(std::map<std::string, bool> traits) {
    for (const auto& name : core_trait_names())
        traits.emplace(name, false);
    return TraitVector{std::move(traits)};
}

OrganismProfile virlock_profile() {
    std::map<std::string, bool> traits;
    for (const auto& name : core_trait_names()) traits[name] = true;
    traits["monetary_ransom_objective"] = true;
    traits["requires_living_host_cell"] = false;
    traits["dormant_prophage_stage"] = false;

    return OrganismProfile{
        "virlock",
        make_lifecycle_model(
            "virlock",
            {{LifecycleStage::Attachment, "malicious attachment opened"},
             {LifecycleStage::Penetration, "execution"},
             {LifecycleStage::Unpacking, "dropper deploys 3 executables"},
             {LifecycleStage::Replication, "file encryption/embedding"},
             {LifecycleStage::SpreadRelease, "cloud sync"}}),
        make_trait_vector(std::move(traits))};
}

OrganismProfile phi6_profile() {
    std::map<std::string, bool> traits;
    for (const auto& name : core_trait_names()) traits[name] = true;
    traits["monetary_ransom_objective"] = false;
    traits["requires_living_host_cell"] = true;
    traits["dormant_prophage_stage"] = true;

    return OrganismProfile{
        "phi6",
        make_lifecycle_model(
            "phi6", {{LifecycleStage::Attachment, "P3 binding"},
                     {LifecycleStage::Penetration, "virion entry"},
                     {LifecycleStage::Unpacking, "uncoating"},
                     {LifecycleStage::Replication,
                      "genome replication/translation"},
                     {LifecycleStage::SpreadRelease, "lysis"},
                     {LifecycleStage::Dormancy, "prophage"}}),
        make_trait_vector(std::move(traits))};
}

namespace {

double jaccard(const std::map<std::string, bool>& a,
               const std::map<std::string, bool>& b) {
    std::size_t both = 0, either = 0;
    auto tally = [&](bool x, bool y) {
        if (x && y) ++both;
        if (x || y) ++either;
    };
    for (const auto& [name, value] : a) {
        auto it = b.find(name);
        tally(value, it != b.end() && it->second);
    }
    for (const auto& [name, value] : b)
        if (!a.count(name)) tally(false, value);
    return either == 0 ? 1.0
                       : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace

double similarity(const TraitVector& a, const TraitVector& b) {
    return jaccard(a.traits, b.traits);
}

double core_similarity(const TraitVector& a, const TraitVector& b) {
    std::map<std::string, bool> ca, cb;
    for (const auto& name : core_trait_names()) {
        auto ia = a.traits.find(name);
        auto ib = b.traits.find(name);
        ca[name] = ia != a.traits.end() && ia->second;
        cb[name] = ib != b.traits.end() && ib->second;
    }
    return jaccard(ca, cb);
}

Alignment align_lifecycles(const LifecycleModel& a, const LifecycleModel& b) {
    const std::size_t n = a.steps.size(), m = b.steps.size();
    std::vector<std::vector<std::size_t>> dp(n + 1,
                                             std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            dp[i][j] = a.steps[i - 1].stage == b.steps[j - 1].stage
                           ? dp[i - 1][j - 1] + 1
                           : std::max(dp[i - 1][j], dp[i][j - 1]);

    Alignment out;
    out.lcs_length = dp[n][m];
    out.score = n == 0 && m == 0
                    ? 1.0
                    : static_cast<double>(dp[n][m]) /
                          static_cast<double>(std::max(n, m));

    std::size_t i = n, j = m;
    while (i > 0 && j > 0) {
        if (a.steps[i - 1].stage == b.steps[j - 1].stage &&
            dp[i][j] == dp[i - 1][j - 1] + 1) {
            out.pairs.push_back({a.steps[i - 1].stage, a.steps[i - 1].label,
                                 b.steps[j - 1].label});
            --i;
            --j;
        } else if (dp[i - 1][j] >= dp[i][j - 1]) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.pairs.begin(), out.pairs.end());
    return out;
}

}  // namespace virsim

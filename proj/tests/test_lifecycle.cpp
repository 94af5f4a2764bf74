#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "virsim/errors.hpp"
#include "virsim/lifecycle.hpp"
#include "virsim/rng.hpp"

using namespace virsim;

namespace {

LifecycleModel model_from(const std::vector<int>& stages,
                          const std::string& prefix = "s") {
    // Direct aggregate construction: alignment must cope with arbitrary
    // stage sequences, not just ones that pass the model validator.
    LifecycleModel m;
    m.organism = prefix;
    for (std::size_t i = 0; i < stages.size(); ++i)
        m.steps.push_back({static_cast<LifecycleStage>(stages[i] % 6),
                           prefix + std::to_string(i)});
    return m;
}

bool is_subsequence(const std::vector<int>& needle,
                    const std::vector<int>& hay) {
    std::size_t i = 0;
    for (int h : hay)
        if (i < needle.size() && needle[i] == h) ++i;
    return i == needle.size();
}

// Exponential reference: longest subsequence of `a` that also embeds in `b`.
std::size_t lcs_brute(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
        std::vector<int> sub;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (mask & (1u << i)) sub.push_back(a[i]);
        if (sub.size() > best && is_subsequence(sub, b)) best = sub.size();
    }
    return best;
}

TraitVector traits_of(std::map<std::string, bool> m) {
    return make_trait_vector(std::move(m));
}

}  // namespace

TEST_CASE("stage names round-trip and unknown names are rejected") {
    const LifecycleStage all[] = {
        LifecycleStage::Attachment,   LifecycleStage::Penetration,
        LifecycleStage::Unpacking,    LifecycleStage::Replication,
        LifecycleStage::SpreadRelease, LifecycleStage::Dormancy,
    };
    for (LifecycleStage s : all) {
        const auto back = stage_from_string(to_string(s));
        REQUIRE(back.has_value());
        CHECK(*back == s);
    }
    CHECK(std::string(to_string(LifecycleStage::SpreadRelease)) ==
          "SPREAD_RELEASE");
    CHECK_FALSE(stage_from_string("LYSIS").has_value());
    CHECK_FALSE(stage_from_string("attachment").has_value());
    CHECK_FALSE(stage_from_string("").has_value());
}

TEST_CASE("model validation enforces shape, order, and mandatory stages") {
    CHECK_THROWS_AS(make_lifecycle_model("x", {}), ValidationError);
    CHECK_THROWS_AS(
        make_lifecycle_model("x", {{LifecycleStage::Attachment, "a"}}),
        ValidationError);
    CHECK_THROWS_AS(
        make_lifecycle_model("x", {{LifecycleStage::Replication, "r"},
                                   {LifecycleStage::Attachment, "a"}}),
        ValidationError);
    CHECK_THROWS_AS(
        make_lifecycle_model("x", {{LifecycleStage::Penetration, "p"},
                                   {LifecycleStage::Replication, "r"}}),
        ValidationError);
    CHECK_THROWS_AS(
        make_lifecycle_model("x", {{LifecycleStage::Attachment, "a"},
                                   {LifecycleStage::Penetration, "p"}}),
        ValidationError);

    const LifecycleModel ok =
        make_lifecycle_model("worm", {{LifecycleStage::Attachment, "land"},
                                      {LifecycleStage::Attachment, "probe"},
                                      {LifecycleStage::Replication, "copy"}});
    CHECK(ok.organism == "worm");
    CHECK(ok.steps.size() == 3);
}

TEST_CASE("trait vectors always carry the nine core traits") {
    const TraitVector empty = make_trait_vector({});
    CHECK(empty.traits.size() == 9);
    for (const auto& [name, value] : empty.traits) CHECK_FALSE(value);

    const auto& cores = core_trait_names();
    const TraitVector mixed =
        traits_of({{"extra", true}, {cores[0], true}});
    CHECK(mixed.traits.size() == 10);
    CHECK(mixed.traits.at("extra"));
    CHECK(mixed.traits.at(cores[0]));
    CHECK_FALSE(mixed.traits.at(cores[1]));
}

TEST_CASE("trait similarity is a Jaccard index over the true traits") {
    const auto& c = core_trait_names();

    const TraitVector a = traits_of({{c[0], true}, {c[1], true}});
    const TraitVector b = traits_of({{c[1], true}, {c[2], true}});
    CHECK(similarity(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(similarity(b, a) == doctest::Approx(1.0 / 3.0));
    CHECK(similarity(a, a) == doctest::Approx(1.0));

    // a trait missing on one side counts as false there
    const TraitVector wide = traits_of({{"only_here", true}, {c[0], true}});
    const TraitVector narrow = traits_of({{c[0], true}});
    CHECK(similarity(wide, narrow) == doctest::Approx(0.5));
    CHECK(similarity(narrow, wide) == doctest::Approx(0.5));

    // nothing asserted on either side reads as identical
    CHECK(similarity(make_trait_vector({}), make_trait_vector({})) == 1.0);
    CHECK(core_similarity(make_trait_vector({}), make_trait_vector({})) == 1.0);
}

TEST_CASE("core similarity ignores the difference traits") {
    std::map<std::string, bool> all_true;
    for (const auto& name : core_trait_names()) all_true[name] = true;

    TraitVector a = traits_of(all_true);
    a.traits["quirk_a"] = true;
    TraitVector b = traits_of(all_true);
    b.traits["quirk_b"] = true;

    CHECK(core_similarity(a, b) == doctest::Approx(1.0));
    CHECK(similarity(a, b) == doctest::Approx(9.0 / 11.0));

    const auto& c = core_trait_names();
    const TraitVector partial_a = traits_of({{c[0], true}, {c[1], true}});
    const TraitVector partial_b = traits_of({{c[1], true}, {c[2], true}});
    CHECK(core_similarity(partial_a, partial_b) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("the builtin profiles share every core trait") {
    const OrganismProfile v = virlock_profile();
    const OrganismProfile p = phi6_profile();

    CHECK(v.name == "virlock");
    CHECK(p.name == "phi6");
    CHECK(v.lifecycle.steps.size() == 5);
    CHECK(p.lifecycle.steps.size() == 6);
    CHECK(v.traits.traits.size() == 12);
    CHECK(p.traits.traits.size() == 12);

    CHECK(core_similarity(v.traits, p.traits) == doctest::Approx(1.0));
    // 9 shared core traits; each side asserts one or two private ones
    CHECK(similarity(v.traits, p.traits) == doctest::Approx(0.75));

    CHECK(v.traits.traits.at("monetary_ransom_objective"));
    CHECK_FALSE(p.traits.traits.at("monetary_ransom_objective"));
    CHECK(p.traits.traits.at("requires_living_host_cell"));
    CHECK(p.traits.traits.at("dormant_prophage_stage"));
}

TEST_CASE("the builtin lifecycles align on five of six stages") {
    const Alignment al =
        align_lifecycles(virlock_profile().lifecycle, phi6_profile().lifecycle);
    CHECK(al.lcs_length == 5);
    CHECK(al.score == doctest::Approx(5.0 / 6.0));
    REQUIRE(al.pairs.size() == 5);

    CHECK(al.pairs.front().stage == LifecycleStage::Attachment);
    CHECK(al.pairs.front().label_a == "malicious attachment opened");
    CHECK(al.pairs.front().label_b == "P3 binding");
    CHECK(al.pairs.back().stage == LifecycleStage::SpreadRelease);
    CHECK(al.pairs.back().label_a == "cloud sync");
    CHECK(al.pairs.back().label_b == "lysis");

    for (std::size_t i = 1; i < al.pairs.size(); ++i)
        CHECK(al.pairs[i - 1].stage < al.pairs[i].stage);

    // alignment is symmetric in length and score
    const Alignment rev =
        align_lifecycles(phi6_profile().lifecycle, virlock_profile().lifecycle);
    CHECK(rev.lcs_length == 5);
    CHECK(rev.score == doctest::Approx(5.0 / 6.0));
    CHECK(rev.pairs.front().label_a == "P3 binding");
}

TEST_CASE("alignment handles empty and disjoint sequences") {
    const LifecycleModel none = model_from({});
    const LifecycleModel some = model_from({0, 3});

    const Alignment empty = align_lifecycles(none, none);
    CHECK(empty.lcs_length == 0);
    CHECK(empty.score == 1.0);
    CHECK(empty.pairs.empty());

    const Alignment half = align_lifecycles(none, some);
    CHECK(half.lcs_length == 0);
    CHECK(half.score == 0.0);

    const Alignment disjoint =
        align_lifecycles(model_from({0, 1, 2}), model_from({3, 4, 5}));
    CHECK(disjoint.lcs_length == 0);
    CHECK(disjoint.score == 0.0);
}

TEST_CASE("alignment equals the exponential reference on random sequences") {
    Rng rng(1234);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<int> sa, sb;
        const std::size_t na = rng.uniform_index(9);
        const std::size_t nb = rng.uniform_index(9);
        for (std::size_t i = 0; i < na; ++i)
            sa.push_back(static_cast<int>(rng.uniform_index(6)));
        for (std::size_t i = 0; i < nb; ++i)
            sb.push_back(static_cast<int>(rng.uniform_index(6)));

        const LifecycleModel a = model_from(sa, "a");
        const LifecycleModel b = model_from(sb, "b");
        const Alignment al = align_lifecycles(a, b);

        CHECK(al.lcs_length == lcs_brute(sa, sb));
        CHECK(al.pairs.size() == al.lcs_length);
        CHECK(al.lcs_length <= std::min(sa.size(), sb.size()));
        if (!sa.empty() || !sb.empty())
            CHECK(al.score ==
                  doctest::Approx(static_cast<double>(al.lcs_length) /
                                  static_cast<double>(
                                      std::max(sa.size(), sb.size()))));

        // the reported pairs must be an actual common subsequence
        std::vector<int> stages;
        for (const auto& pr : al.pairs)
            stages.push_back(static_cast<int>(pr.stage));
        CHECK(is_subsequence(stages, sa));
        CHECK(is_subsequence(stages, sb));

        // self alignment recovers the whole sequence
        CHECK(align_lifecycles(a, a).lcs_length == sa.size());
    }
}

TEST_CASE("alignment depends on stages, never on labels") {
    const std::vector<int> stages{0, 1, 1, 3, 4};
    const Alignment plain =
        align_lifecycles(model_from(stages, "x"), model_from(stages, "y"));
    const Alignment relabeled =
        align_lifecycles(model_from(stages, "left"), model_from(stages, "right"));
    CHECK(plain.lcs_length == relabeled.lcs_length);
    CHECK(plain.score == relabeled.score);
    CHECK(plain.lcs_length == stages.size());
}

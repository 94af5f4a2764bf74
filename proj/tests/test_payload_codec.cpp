#include <array>
#include <set>

#include <doctest.h>

#include "virsim/errors.hpp"
#include "virsim/payload_codec.hpp"
#include "virsim/virus_model.hpp"

using namespace virsim;

namespace {

VirusVariant variant_with_seed(std::uint64_t decoration_seed) {
    VirusVariant v;
    v.core_signature = digest128_u64(1, 2);
    v.decoration_seed = decoration_seed;
    v.surface_signature = digest128_pair(v.core_signature, decoration_seed);
    return v;
}

}  // namespace

TEST_CASE("key derivation picks the documented seed octets") {
    const CodecKey key = derive_key(variant_with_seed(0x00A50153));
    CHECK(key.k1 == 0x53);
    CHECK(key.rotate == 1);
    CHECK(key.k2 == 0xA5);

    // rotate comes from bits 8..15 reduced mod 8
    CHECK(derive_key(variant_with_seed(0x0000FF00)).rotate == 0xFF % 8);
    CHECK(derive_key(variant_with_seed(0)).rotate == 0);
}

TEST_CASE("single octet tracks the xor-rotate-xor pipeline") {
    const CodecKey key{0x0F, 1, 0xA5};
    const Bytes cipher = encrypt(Bytes{0x53}, key);
    REQUIRE(cipher.size() == 1);
    CHECK(cipher[0] == 0x1D);
    CHECK(decrypt(cipher, key) == Bytes{0x53});
}

TEST_CASE("every key is a byte-level bijection") {
    for (int rotate = 0; rotate < 8; ++rotate) {
        const CodecKey key{static_cast<std::uint8_t>(0x11 * rotate + 3), rotate,
                           static_cast<std::uint8_t>(0xC8 - rotate)};
        std::set<std::uint8_t> outputs;
        for (int b = 0; b < 256; ++b) {
            const Bytes c = encrypt(Bytes{static_cast<std::uint8_t>(b)}, key);
            outputs.insert(c[0]);
            CHECK(decrypt(c, key)[0] == static_cast<std::uint8_t>(b));
        }
        CHECK(outputs.size() == 256);
    }
}

TEST_CASE("round trip holds for random contents and keys") {
    Rng rng(77);
    for (int i = 0; i < 2000; ++i) {
        const CodecKey key{static_cast<std::uint8_t>(rng.next_u64()),
                           static_cast<int>(rng.uniform_index(8)),
                           static_cast<std::uint8_t>(rng.next_u64())};
        const Bytes content =
            seeded_bytes(rng.next_u64(), 1, rng.uniform_index(200));
        CHECK(decrypt(encrypt(content, key), key) == content);
    }
}

TEST_CASE("encryption is length preserving, including empty input") {
    const CodecKey key{0xAA, 3, 0x55};
    CHECK(encrypt(Bytes{}, key).empty());
    CHECK(encrypt(Bytes(37, 0), key).size() == 37);
}

TEST_CASE("wrap embeds the encrypted original and unwrap recovers it") {
    const VirusVariant v = variant_with_seed(0xDEADBEEF);
    const Bytes clean = seeded_bytes(5, 6, 120);
    const PayloadLayout layout = wrap(clean, "report.doc", v);

    CHECK(layout.original_name == "report.doc");
    CHECK(layout.marked_executable);
    CHECK_FALSE(layout.deco_head.empty());
    CHECK_FALSE(layout.deco_tail.empty());
    CHECK_FALSE(layout.malicious_core.empty());
    CHECK(layout.clean_encrypted.size() == clean.size());
    CHECK(layout.clean_encrypted != clean);
    CHECK(unwrap(layout, v) == clean);
}

TEST_CASE("the malicious core is lineage-invariant, the decoration is not") {
    const VirusVariant a = variant_with_seed(100);
    const VirusVariant b = variant_with_seed(200);
    const Bytes clean{1, 2, 3};
    const PayloadLayout la = wrap(clean, "x", a);
    const PayloadLayout lb = wrap(clean, "x", b);

    CHECK(la.malicious_core == lb.malicious_core);
    CHECK(la.deco_head != lb.deco_head);
    CHECK(la.deco_tail != lb.deco_tail);
    CHECK(la.clean_encrypted != lb.clean_encrypted);

    VirusVariant other_family = variant_with_seed(100);
    other_family.core_signature = digest128_u64(9, 9);
    CHECK(wrap(clean, "x", other_family).malicious_core != la.malicious_core);
}

TEST_CASE("serialize and parse_layout are inverse") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const VirusVariant v = variant_with_seed(rng.next_u64());
        const Bytes clean = seeded_bytes(rng.next_u64(), 2, rng.uniform_index(64));
        const PayloadLayout layout =
            wrap(clean, "file_" + std::to_string(i), v);
        CHECK(parse_layout(serialize(layout)) == layout);
    }
}

TEST_CASE("parse_layout rejects malformed images") {
    CHECK_THROWS_AS(parse_layout(Bytes{}), ValidationError);
    CHECK_THROWS_AS(parse_layout(Bytes{0, 0, 0}), ValidationError);
    // segment length pointing past the end
    CHECK_THROWS_AS(parse_layout(Bytes{0, 0, 0, 200, 1, 2}), ValidationError);

    const PayloadLayout layout = wrap(Bytes{9, 9}, "a", variant_with_seed(4));
    Bytes image = serialize(layout);

    Bytes truncated(image.begin(), image.end() - 1);
    CHECK_THROWS_AS(parse_layout(truncated), ValidationError);

    Bytes trailing = image;
    trailing.push_back(0);
    CHECK_THROWS_AS(parse_layout(trailing), ValidationError);

    Bytes bad_flag = image;
    bad_flag.back() = 7;
    CHECK_THROWS_AS(parse_layout(bad_flag), ValidationError);
}

TEST_CASE("transfer ids must have exactly 64 characters") {
    CHECK_THROWS_AS(TransferId(""), ValidationError);
    CHECK_THROWS_AS(TransferId(std::string(63, '0')), ValidationError);
    CHECK_THROWS_AS(TransferId(std::string(65, '0')), ValidationError);
    CHECK(TransferId(std::string(64, 'a')).chars().size() == 64);
}

TEST_CASE("only the all-zero transfer id triggers the exploit") {
    CHECK(exploit_check(TransferId::zeros()));
    std::string nearly(64, '0');
    nearly[17] = '1';
    CHECK_FALSE(exploit_check(TransferId(nearly)));
    CHECK_FALSE(exploit_check(TransferId(std::string(64, 'O'))));
}

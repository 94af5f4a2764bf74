#ifndef VIRSIM_PAYLOAD_CODEC_HPP
#define VIRSIM_PAYLOAD_CODEC_HPP

#include <cstdint>
#include <span>
#include <string>

#include "virsim/digest.hpp"
#include "virsim/virus_model.hpp"

namespace virsim {

// Two-stage XOR / XOR-ROL key. Derived deterministically from a variant's
// decoration seed: k1 = low octet, rotate = (seed >> 8) mod 8,
// k2 = octet at bits 16..23.
struct CodecKey {
    std::uint8_t k1{0};
    int rotate{0};  // left-rotate amount, 0..7
    std::uint8_t k2{0};

    bool operator==(const CodecKey&) const = default;
};

CodecKey derive_key(const VirusVariant& variant);

// Per octet: c = ROL(b ^ k1, rotate) ^ k2. Length-preserving.
Bytes encrypt(std::span<const std::uint8_t> content, CodecKey key);

// Exact inverse: b = ROR(c ^ k2, rotate) ^ k1. A wrong key is not
// detectable and silently yields garbage; callers track the owning variant.
Bytes decrypt(std::span<const std::uint8_t> cipher, CodecKey key);

// Simulated infected-file image: decoration code wrapping the invariant
// malicious core and the encrypted clean content. Serialized order is
// exactly deco_head | malicious_core | clean_encrypted | deco_tail.
struct PayloadLayout {
    Bytes deco_head;
    Bytes malicious_core;
    Bytes clean_encrypted;
    Bytes deco_tail;
    std::string original_name;
    bool marked_executable{true};

    bool operator==(const PayloadLayout&) const = default;
};

PayloadLayout wrap(std::span<const std::uint8_t> clean, std::string name,
                   const VirusVariant& variant);

// Original clean content of a layout produced by wrap() with this variant.
Bytes unwrap(const PayloadLayout& layout, const VirusVariant& variant);

// Segments in fixed order, each prefixed with a 4-octet big-endian length,
// then the name (same prefix) and one marked_executable octet. Documented
// in docs/formats.md.
Bytes serialize(const PayloadLayout& layout);
PayloadLayout parse_layout(std::span<const std::uint8_t> data);  // ValidationError

// Ransom payment identifier, exactly 64 characters.
class TransferId {
public:
    explicit TransferId(std::string chars);  // ValidationError if length != 64

    static TransferId zeros() { return TransferId(std::string(64, '0')); }

    const std::string& chars() const { return chars_; }

private:
    std::string chars_;
};

// True iff every character is the digit zero: the payment-bypass exploit.
bool exploit_check(const TransferId& id);

}  // namespace virsim

#endif

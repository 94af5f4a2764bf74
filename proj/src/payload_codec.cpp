#include "virsim/payload_codec.hpp"

#include <algorithm>
#include <bit>

#include "virsim/errors.hpp"

namespace virsim {

namespace {

constexpr std::size_t kDecoSegmentSize = 32;
constexpr std::size_t kCoreSegmentSize = 64;
constexpr std::uint64_t kHeadLabel = 0x4EAD000000000011ULL;
constexpr std::uint64_t kTailLabel = 0x7A11000000000012ULL;
constexpr std::uint64_t kCoreBytesLabel = 0xC0DE000000000013ULL;

void put_u32_be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint32_t u32_be() {
        if (pos_ + 4 > data_.size()) throw ValidationError("payload image truncated");
        std::uint32_t v = (static_cast<std::uint32_t>(data_[pos_]) << 24) |
                          (static_cast<std::uint32_t>(data_[pos_ + 1]) << 16) |
                          (static_cast<std::uint32_t>(data_[pos_ + 2]) << 8) |
                          static_cast<std::uint32_t>(data_[pos_ + 3]);
        pos_ += 4;
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > data_.size()) throw ValidationError("payload image truncated");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_{0};
};

}  // namespace

CodecKey derive_key(const VirusVariant& variant) {
    const std::uint64_t seed = variant.decoration_seed;
    CodecKey key;
    key.k1 = static_cast<std::uint8_t>(seed & 0xFF);
    key.rotate = static_cast<int>((seed >> 8) % 8);
    key.k2 = static_cast<std::uint8_t>((seed >> 16) & 0xFF);
    return key;
}

Bytes encrypt(std::span<const std::uint8_t> content, CodecKey key) {
    Bytes out(content.size());
    const auto r = static_cast<int>(key.rotate);
    for (std::size_t i = 0; i < content.size(); ++i) {
        std::uint8_t b = static_cast<std::uint8_t>(content[i] ^ key.k1);
        out[i] = static_cast<std::uint8_t>(std::rotl(b, r) ^ key.k2);
    }
    return out;
}

Bytes decrypt(std::span<const std::uint8_t> cipher, CodecKey key) {
    Bytes out(cipher.size());
    const auto r = static_cast<int>(key.rotate);
    for (std::size_t i = 0; i < cipher.size(); ++i) {
        std::uint8_t b = static_cast<std::uint8_t>(cipher[i] ^ key.k2);
        out[i] = static_cast<std::uint8_t>(std::rotr(b, r) ^ key.k1);
    }
    return out;
}

PayloadLayout wrap(std::span<const std::uint8_t> clean, std::string name,
                   const VirusVariant& variant) {
    PayloadLayout layout;
    layout.deco_head = seeded_bytes(variant.decoration_seed, kHeadLabel, kDecoSegmentSize);
    layout.deco_tail = seeded_bytes(variant.decoration_seed, kTailLabel, kDecoSegmentSize);
    // Same core bytes for the whole lineage; decoration is what mutates.
    layout.malicious_core = seeded_bytes(variant.core_signature.hi ^ variant.core_signature.lo,
                                         kCoreBytesLabel, kCoreSegmentSize);
    layout.clean_encrypted = encrypt(clean, derive_key(variant));
    layout.original_name = std::move(name);
    layout.marked_executable = true;
    return layout;
}

Bytes unwrap(const PayloadLayout& layout, const VirusVariant& variant) {
    return decrypt(layout.clean_encrypted, derive_key(variant));
}

Bytes serialize(const PayloadLayout& layout) {
    Bytes out;
    out.reserve(layout.deco_head.size() + layout.malicious_core.size() +
                layout.clean_encrypted.size() + layout.deco_tail.size() +
                layout.original_name.size() + 4 * 5 + 1);
    for (const Bytes* seg : {&layout.deco_head, &layout.malicious_core,
                             &layout.clean_encrypted, &layout.deco_tail}) {
        put_u32_be(out, static_cast<std::uint32_t>(seg->size()));
        out.insert(out.end(), seg->begin(), seg->end());
    }
    put_u32_be(out, static_cast<std::uint32_t>(layout.original_name.size()));
    out.insert(out.end(), layout.original_name.begin(), layout.original_name.end());
    out.push_back(layout.marked_executable ? 1 : 0);
    return out;
}

PayloadLayout parse_layout(std::span<const std::uint8_t> data) {
    Reader r(data);
    PayloadLayout layout;
    for (Bytes* seg : {&layout.deco_head, &layout.malicious_core,
                       &layout.clean_encrypted, &layout.deco_tail}) {
        auto s = r.take(r.u32_be());
        seg->assign(s.begin(), s.end());
    }
    auto name = r.take(r.u32_be());
    layout.original_name.assign(name.begin(), name.end());
    auto flag = r.take(1);
    if (flag[0] > 1) throw ValidationError("payload image: bad executable flag");
    layout.marked_executable = flag[0] == 1;
    if (!r.done()) throw ValidationError("payload image: trailing bytes");
    return layout;
}

TransferId::TransferId(std::string chars) : chars_(std::move(chars)) {
    if (chars_.size() != 64) {
        throw ValidationError("TransferId must be exactly 64 characters, got " +
                              std::to_string(chars_.size()));
    }
}

bool exploit_check(const TransferId& id) {
    return std::all_of(id.chars().begin(), id.chars().end(),
                       [](char c) { return c == '0'; });
}

}  // namespace virsim

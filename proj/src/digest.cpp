#include "virsim/digest.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace virsim {

namespace {

constexpr std::uint64_t kLaneSeedHi = 0x2545F4914F6CDD1DULL;
constexpr std::uint64_t kLaneSeedLo = 0x9E6C63D0876A9A35ULL;

std::uint64_t absorb(std::uint64_t state, std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
        state = mix64(state ^ (static_cast<std::uint64_t>(b) + 0xA24BAED4963EE407ULL));
    }
    return mix64(state ^ static_cast<std::uint64_t>(data.size()));
}

}  // namespace

std::string Digest128::hex() const {
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                  static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return std::string(buf);
}

Digest128 digest128(std::span<const std::uint8_t> data) {
    return Digest128{absorb(kLaneSeedHi, data), absorb(kLaneSeedLo, data)};
}

Digest128 digest128_pair(const Digest128& core, std::uint64_t decoration_seed) {
    std::array<std::uint8_t, 24> buf{};
    for (int i = 0; i < 8; ++i) {
        buf[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(core.hi >> (8 * i));
        buf[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(core.lo >> (8 * i));
        buf[static_cast<std::size_t>(16 + i)] = static_cast<std::uint8_t>(decoration_seed >> (8 * i));
    }
    return digest128(buf);
}

Digest128 digest128_u64(std::uint64_t value, std::uint64_t label) {
    std::array<std::uint8_t, 16> buf{};
    for (int i = 0; i < 8; ++i) {
        buf[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value >> (8 * i));
        buf[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>(label >> (8 * i));
    }
    return digest128(buf);
}

Bytes seeded_bytes(std::uint64_t seed, std::uint64_t label, std::size_t count) {
    Rng stream(mix64(seed ^ label));
    Bytes out(count);
    for (auto& b : out) {
        b = static_cast<std::uint8_t>(stream.next_u64() & 0xFF);
    }
    return out;
}

double byte_entropy(std::span<const std::uint8_t> data) {
    if (data.empty()) return 0.0;
    std::array<std::uint64_t, 256> hist{};
    for (std::uint8_t b : data) ++hist[b];
    const double n = static_cast<double>(data.size());
    double h = 0.0;
    for (std::uint64_t c : hist) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace virsim

#ifndef VIRSIM_DIGEST_HPP
#define VIRSIM_DIGEST_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "virsim/rng.hpp"

namespace virsim {

using Bytes = std::vector<std::uint8_t>;

// 128-bit value used for core and surface signatures. Non-cryptographic;
// only injectivity-in-practice matters at simulation scale.
struct Digest128 {
    std::uint64_t hi{0};
    std::uint64_t lo{0};

    auto operator<=>(const Digest128&) const = default;

    std::string hex() const;
};

// Two independent splitmix-style absorption lanes over the input bytes.
Digest128 digest128(std::span<const std::uint8_t> data);

// Digest of (core_signature || decoration_seed little-endian).
Digest128 digest128_pair(const Digest128& core, std::uint64_t decoration_seed);

// Digest of a single 64-bit value under a domain label.
Digest128 digest128_u64(std::uint64_t value, std::uint64_t label);

// `count` pseudo-random bytes from a stream seeded with (seed ^ label).
Bytes seeded_bytes(std::uint64_t seed, std::uint64_t label, std::size_t count);

// Shannon entropy of the byte histogram, in bits per octet (0..8).
double byte_entropy(std::span<const std::uint8_t> data);

}  // namespace virsim

#endif

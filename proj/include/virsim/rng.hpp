#ifndef VIRSIM_RNG_HPP
#define VIRSIM_RNG_HPP

#include <cstdint>

namespace virsim {

// splitmix64 finalizer. Used both as the engine mixer and for seed splitting.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent stream seed for sub-task `index` of a master seed. Every
// parallel unit (world, Monte Carlo trial, sweep point) gets its own stream
// so results do not depend on execution order or thread count.
constexpr std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return mix64((master ^ 0x6A09E667F3BCC909ULL) +
                 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Deterministic PRNG (splitmix64). Fixed algorithm, not std::mt19937 +
// std:: distributions, so output streams are identical across platforms
// and standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1]; safe as a log() argument.
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform index in [0, bound). Modulo bias is ~bound/2^64, irrelevant at
    // the bounds used here.
    std::uint64_t uniform_index(std::uint64_t bound) {
        return bound == 0 ? 0 : next_u64() % bound;
    }

    double normal();                    // standard normal, Box-Muller
    double gamma(double alpha);         // shape alpha > 0, unit scale
    double beta(double alpha, double beta_param);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace virsim

#endif

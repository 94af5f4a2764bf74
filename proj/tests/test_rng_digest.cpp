#include <cmath>
#include <set>

#include <doctest.h>

#include "virsim/digest.hpp"
#include "virsim/rng.hpp"

using namespace virsim;

TEST_CASE("splitmix64 stream matches the reference values for seed 0") {
    Rng rng(0);
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next_u64() == 0x06C45D188009454FULL);
}

TEST_CASE("split_seed is frozen and spreads masters and indices apart") {
    CHECK(split_seed(42, 0) == 0xD86E1008EAC15BC5ULL);
    CHECK(split_seed(42, 1) == 0x35DB6426726E5376ULL);
    CHECK(split_seed(7, 0) == 0xDE18BA9E4BC6EC06ULL);

    std::set<std::uint64_t> seen;
    for (std::uint64_t master = 0; master < 64; ++master)
        for (std::uint64_t index = 0; index < 64; ++index)
            seen.insert(split_seed(master, index));
    CHECK(seen.size() == 64 * 64);
}

TEST_CASE("unit interval draws stay inside their half-open bounds") {
    Rng rng(1234);
    for (int i = 0; i < 100000; ++i) {
        const double d = rng.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
        const double o = rng.next_double_open();
        CHECK(o > 0.0);
        CHECK(o <= 1.0);
    }
}

TEST_CASE("bernoulli honors the degenerate probabilities") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("bernoulli frequency tracks p") {
    Rng rng(77);
    int hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(0.3)) ++hits;
    // sd = sqrt(p(1-p)/n) ~ 0.001; 5 sigma band
    CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.006);
}

TEST_CASE("uniform_index stays below its bound") {
    Rng rng(9);
    CHECK(rng.uniform_index(0) == 0);
    for (int i = 0; i < 10000; ++i) CHECK(rng.uniform_index(7) < 7);
    for (int i = 0; i < 100; ++i) CHECK(rng.uniform_index(1) == 0);
}

TEST_CASE("normal draws have the right first two moments") {
    Rng rng(2024);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("gamma mean and variance match the shape parameter") {
    Rng rng(31337);
    for (double alpha : {0.5, 1.0, 2.5, 9.0}) {
        const int n = 200000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rng.gamma(alpha);
            CHECK(x > 0.0);
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(std::abs(mean - alpha) < 0.05 * std::max(1.0, alpha));
        CHECK(std::abs(var - alpha) < 0.10 * std::max(1.0, alpha));
    }
}

TEST_CASE("beta draws live in (0,1) with the analytic mean") {
    Rng rng(101);
    const double a = 6.5, b = 3.5;
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.beta(a, b);
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - a / (a + b)) < 0.005);
}

TEST_CASE("identical seeds give identical streams, different seeds diverge") {
    Rng a(555), b(555), c(556);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("digest128 is deterministic and collision-free at working scale") {
    const Bytes empty;
    CHECK(digest128(empty) == digest128(empty));

    Rng rng(8);
    std::set<Digest128> seen;
    for (int i = 0; i < 100000; ++i) {
        Bytes data = seeded_bytes(rng.next_u64(), 0x1234, 16);
        seen.insert(digest128(data));
    }
    CHECK(seen.size() == 100000);
}

TEST_CASE("digest128 reacts to any single flipped byte") {
    Bytes base = seeded_bytes(99, 0x42, 32);
    const Digest128 ref = digest128(base);
    for (std::size_t i = 0; i < base.size(); ++i) {
        Bytes mod = base;
        mod[i] ^= 0x01;
        CHECK(digest128(mod) != ref);
    }
}

TEST_CASE("hex prints 32 lowercase hex characters") {
    const std::string h = digest128_u64(42, 7).hex();
    CHECK(h.size() == 32);
    for (char ch : h)
        CHECK(((ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f')));
}

TEST_CASE("pair and u64 digests separate their argument spaces") {
    const Digest128 core = digest128_u64(1, 2);
    CHECK(digest128_pair(core, 10) != digest128_pair(core, 11));
    CHECK(digest128_u64(5, 1) != digest128_u64(5, 2));
    CHECK(digest128_u64(5, 1) != digest128_u64(6, 1));
}

TEST_CASE("seeded_bytes is a pure function of seed, label and count") {
    const Bytes a = seeded_bytes(7, 9, 64);
    CHECK(a.size() == 64);
    CHECK(a == seeded_bytes(7, 9, 64));
    CHECK(a != seeded_bytes(8, 9, 64));
    CHECK(a != seeded_bytes(7, 10, 64));
    CHECK(seeded_bytes(7, 9, 0).empty());
}

TEST_CASE("byte_entropy spans its 0..8 range") {
    CHECK(byte_entropy(Bytes{}) == 0.0);
    CHECK(byte_entropy(Bytes(100, 0xAB)) == 0.0);

    Bytes all;
    for (int b = 0; b < 256; ++b) all.push_back(static_cast<std::uint8_t>(b));
    CHECK(byte_entropy(all) == doctest::Approx(8.0));

    // decoration bytes should look noisy
    CHECK(byte_entropy(seeded_bytes(3, 4, 4096)) > 7.5);
}

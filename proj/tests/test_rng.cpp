#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "nanboltz/rng.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("rng");

// Reference blocks generated with an independent Philox 4x64 (10 rounds)
// implementation; counter and key words are little-endian limbs.
TEST_CASE("philox4x64 known-answer blocks") {
    using B = std::array<uint64_t, 4>;
    using K = std::array<uint64_t, 2>;

    CHECK(Philox4x64::block(B{0, 0, 0, 0}, K{0, 0}) ==
          B{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
            0x907d7a052fd5b4dcULL});

    CHECK(Philox4x64::block(B{1, 0, 0, 0}, K{0, 0}) ==
          B{0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL,
            0xfc6ed66767a457bcULL});

    CHECK(Philox4x64::block(B{0, 0, 0, 0}, K{0xdeadbeefcafef00dULL, 0}) ==
          B{0x9c94b47be935b3e1ULL, 0x7283025a2e12c518ULL, 0x23cef89483fc70acULL,
            0xd69ba1dd473c30fdULL});

    const uint64_t m = ~uint64_t{0};
    CHECK(Philox4x64::block(B{m, m, m, m}, K{m, m}) ==
          B{0x44b7493d1acfc229ULL, 0x6636af8e997921ddULL, 0x3f73e132b5b3780eULL,
            0x605644dde03b01b1ULL});

    // Two consecutive blocks of a wide counter.
    B ctr{0x46bec9b16e398115ULL, 0x27e41b32ULL, 0, 0};
    K key{0x0011223344556677ULL, 0x0123456789abcdefULL};
    CHECK(Philox4x64::block(ctr, key) ==
          B{0xb6b1764e1cd4f82eULL, 0x6093e2c4ed0e526cULL, 0x65043516b60416feULL,
            0x61f8ba00c10f1780ULL});
    ctr[0] += 1;
    CHECK(Philox4x64::block(ctr, key) ==
          B{0x6c22feb9326677cdULL, 0x195ec6ee434aefe0ULL, 0x34f9663105808763ULL,
            0xa062555b78fe0b1fULL});
}

TEST_CASE("streams are deterministic and distinct") {
    RngStream a(1234, 0), b(1234, 0), c(1234, 1), d(4321, 0);
    bool all_equal = true, stream_differs = false, seed_differs = false;
    for (int i = 0; i < 256; ++i) {
        uint64_t va = a.next_u64();
        if (va != b.next_u64()) all_equal = false;
        if (va != c.next_u64()) stream_differs = true;
        if (va != d.next_u64()) seed_differs = true;
    }
    CHECK(all_equal);
    CHECK(stream_differs);
    CHECK(seed_differs);
}

TEST_CASE("uniform ranges and moments") {
    RngStream rng(99, 7);
    const int n = 100000;
    double sum = 0.0, min_pos = 1.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        double p = rng.u01_pos();
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
        min_pos = std::min(min_pos, p);
    }
    // mean 1/2, sd of the mean = 1/sqrt(12 n)
    double se = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(sum / n - 0.5) < 5.0 * se);
}

TEST_CASE("bounded draws cover [0, n) without bias") {
    RngStream rng(5, 2);
    const uint64_t n = 13;
    std::array<int, 13> counts{};
    const int draws = 130000;
    for (int i = 0; i < draws; ++i) {
        uint64_t v = rng.below(n);
        REQUIRE(v < n);
        counts[v]++;
    }
    double expect = draws / double(n);
    double se = std::sqrt(expect * (1.0 - 1.0 / double(n)));
    for (int c : counts) CHECK(std::abs(c - expect) < 5.0 * se);
}

TEST_CASE("normal moments") {
    RngStream rng(2024, 3);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::abs(s1 / n) < 5.0 / std::sqrt(double(n)));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("unit vectors have unit norm and vanishing mean") {
    RngStream rng(7, 0);
    Vec3 mean{};
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        Vec3 u = rng.unit_vector();
        CHECK(std::abs(norm(u) - 1.0) < 1e-12);
        mean += u;
    }
    mean *= 1.0 / n;
    CHECK(norm(mean) < 5.0 / std::sqrt(double(n)));
}

TEST_SUITE_END();

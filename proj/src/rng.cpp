#include "nanboltz/rng.hpp"

#include <cmath>

namespace nanboltz {

namespace {

constexpr uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<uint64_t>(p >> 64);
    lo = static_cast<uint64_t>(p);
}

inline void philox_round(std::array<uint64_t, 4>& x, const std::array<uint64_t, 2>& k) {
    uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, x[0], hi0, lo0);
    mulhilo(kPhiloxM1, x[2], hi1, lo1);
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint64_t, 4> Philox4x64::block(const std::array<uint64_t, 4>& counter,
                                          const std::array<uint64_t, 2>& key) {
    std::array<uint64_t, 4> x = counter;
    std::array<uint64_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += kPhiloxW0;
            k[1] += kPhiloxW1;
        }
        philox_round(x, k);
    }
    return x;
}

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(uint64_t seed, uint64_t stream) {
    uint64_t s = seed;
    key_[0] = splitmix64(s);
    key_[1] = splitmix64(s);
    // Stream id lives in the upper counter words; blocks of distinct streams
    // never collide.
    counter_ = {0, 0, stream, 0};
    buf_pos_ = 4;
}

void RngStream::refill() {
    buf_ = Philox4x64::block(counter_, key_);
    if (++counter_[0] == 0) ++counter_[1];
    buf_pos_ = 0;
}

uint64_t RngStream::next_u64() {
    if (buf_pos_ >= 4) refill();
    return buf_[buf_pos_++];
}

double RngStream::u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::u01_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

uint64_t RngStream::below(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
        uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * n;
            lo = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

double RngStream::exponential(double rate) {
    return -std::log(u01_pos()) / rate;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return normal_spare_;
    }
    double r = std::sqrt(-2.0 * std::log(u01_pos()));
    double a = 2.0 * M_PI * u01();
    normal_spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Vec3 RngStream::isotropic_normal3(double sigma) {
    return {sigma * normal(), sigma * normal(), sigma * normal()};
}

Vec3 RngStream::unit_vector() {
    // z uniform on [-1,1], azimuth uniform.
    double z = 2.0 * u01() - 1.0;
    double a = 2.0 * M_PI * u01();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(a), r * std::sin(a), z};
}

}  // namespace nanboltz

#pragma once

#include <array>
#include <cstdint>

#include "nanboltz/vec3.hpp"

namespace nanboltz {

/// Philox 4x64 counter-based generator, 10 rounds. Matches the reference
/// implementation used by numpy (verified against frozen vectors in the
/// tests). Stateless core: output block is a pure function of (counter, key).
struct Philox4x64 {
    static std::array<uint64_t, 4> block(const std::array<uint64_t, 4>& counter,
                                         const std::array<uint64_t, 2>& key);
};

uint64_t splitmix64(uint64_t& state);

/// One independent random stream. Streams with the same seed but different
/// stream ids are distinct counter blocks of the same keyed Philox function,
/// so any set of (seed, stream) pairs may be consumed concurrently and
/// reproducibly regardless of scheduling.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream);

    uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double u01();
    /// Uniform on (0, 1]; safe as a log() argument.
    double u01_pos();
    /// Uniform on [0, n). Unbiased (Lemire rejection).
    uint64_t below(uint64_t n);
    double exponential(double rate);
    /// Standard normal, Box-Muller; consumes uniforms in pairs.
    double normal();
    Vec3 isotropic_normal3(double sigma);
    /// Uniform direction on the unit sphere.
    Vec3 unit_vector();

private:
    void refill();

    std::array<uint64_t, 2> key_;
    std::array<uint64_t, 4> counter_;
    std::array<uint64_t, 4> buf_;
    int buf_pos_;
    double normal_spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nanboltz

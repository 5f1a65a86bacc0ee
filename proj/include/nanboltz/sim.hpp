#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nanboltz/kernel.hpp"
#include "nanboltz/rng.hpp"
#include "nanboltz/vec3.hpp"

namespace nanboltz {

enum class LawKind { maxwellian, uniform_ball, two_point, file };

/// Initial velocity law. two_point puts mass 1/2 on +/- magnitude * e1.
struct InitialLaw {
    LawKind kind = LawKind::maxwellian;
    double sigma = 1.0;
    double radius = 1.0;
    double magnitude = 1.0;
    std::string path;

    std::string describe() const;
};

struct ParticleState {
    std::vector<Vec3> v;
    double time = 0.0;
    uint64_t events_applied = 0;
};

/// One atom of the driving Poisson randomness. i is the particle whose
/// velocity changes, j its collision partner (untouched).
struct CollisionEvent {
    double t = 0.0;
    uint32_t i = 0, j = 0;
    double z = 0.0;
    double phi = 0.0;
};

struct SimConfig {
    std::size_t n = 0;
    std::vector<double> k_levels;  // ascending, all >= 1; the top level drives the clock
    KernelSpec kernel;
    double horizon = 0.0;
    uint64_t seed = 0;
    uint64_t replica = 0;  // selects the random streams; distinct replicas are independent
    InitialLaw law;
    std::vector<double> snapshot_times;  // ascending, within [0, horizon]

    void validate() const;
};

struct Trajectory {
    std::vector<ParticleState> snapshots;  // one per requested time, in order
    ParticleState state;                   // at the horizon
    uint64_t events_generated = 0;         // events drawn on [0, horizon] at the top level
};

/// N i.i.d. draws from the law; deterministic given (seed, stream).
ParticleState sample_initial(std::size_t n, const InitialLaw& law, uint64_t seed,
                             uint64_t stream);

/// Next collision event after `now`. Inter-event gaps are exponential with the
/// configuration-independent total rate 2 pi K (N-1); marks are an ordered
/// pair (i, j) uniform over the N(N-1) choices, z uniform on [0, K], phi
/// uniform on [0, 2 pi).
CollisionEvent next_event(double now, std::size_t n, double k_max, RngStream& rng);

/// Deliver one event at cutoff level K: v_i += kick, everything else including
/// v_j untouched. Events with z > K are thinned (no-op).
void apply_event(ParticleState& state, const CollisionEvent& ev, double k,
                 const Kernel& kernel);

/// Exact event-driven run at the single cutoff K = k_levels.back().
Trajectory run(const SimConfig& cfg);

/// Synchronized runs at every cutoff level of cfg.k_levels, driven by one
/// event stream at the top level; level l delivers an event iff z <= K_l.
/// All levels share the initial state and the marks (t, i, j, z, phi).
std::vector<Trajectory> run_coupled(const SimConfig& cfg);

struct Diagnostics {
    double moment1 = 0.0;  // mean |v|
    double moment2 = 0.0;  // mean |v|^2 (kinetic energy per particle, mass 1)
    double moment4 = 0.0;
    double exp_moment = 0.0;  // mean exp(|v|^q); +inf with the flag set on overflow
    bool exp_overflow = false;
    double exp_q = 1.0;
    double max_speed = 0.0;
};

Diagnostics diagnostics(const ParticleState& state, double exp_q = 1.0);

/// Mean of |v_i|^2 over the cloud.
double mean_kinetic_energy(const ParticleState& state);

/// (1/N) sum |a_i - b_i|^2 between two same-size states (coupled-gap metric).
double mean_sq_displacement(const ParticleState& a, const ParticleState& b);

}  // namespace nanboltz

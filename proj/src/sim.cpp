#include "nanboltz/sim.hpp"

#include <algorithm>
#include <cmath>

#include "nanboltz/errors.hpp"
#include "nanboltz/geometry.hpp"
#include "nanboltz/io.hpp"
#include "nanboltz/simd/kernels.hpp"

namespace nanboltz {

std::string InitialLaw::describe() const {
    switch (kind) {
        case LawKind::maxwellian: return "maxwellian(sigma=" + io::format_double(sigma) + ")";
        case LawKind::uniform_ball: return "uniform_ball(R=" + io::format_double(radius) + ")";
        case LawKind::two_point: return "two_point(a=" + io::format_double(magnitude) + ")";
        case LawKind::file: return "file(" + path + ")";
    }
    return "?";
}

void SimConfig::validate() const {
    kernel.validate();
    if (n < 2) throw input_error("simulation needs at least 2 particles");
    if (k_levels.empty()) throw input_error("at least one cutoff level required");
    for (double k : k_levels)
        if (!(k >= 1.0)) throw input_error("all cutoff levels must be >= 1");
    if (!std::is_sorted(k_levels.begin(), k_levels.end()))
        throw input_error("cutoff levels must be ascending");
    if (!(horizon >= 0.0)) throw input_error("horizon must be >= 0");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
        throw input_error("snapshot times must be ascending");
    for (double t : snapshot_times)
        if (t < 0.0 || t > horizon) throw input_error("snapshot times must lie in [0, horizon]");
}

ParticleState sample_initial(std::size_t n, const InitialLaw& law, uint64_t seed,
                             uint64_t stream) {
    ParticleState st;
    st.v.reserve(n);
    RngStream rng(seed, stream);
    switch (law.kind) {
        case LawKind::maxwellian:
            for (std::size_t i = 0; i < n; ++i) st.v.push_back(rng.isotropic_normal3(law.sigma));
            break;
        case LawKind::uniform_ball:
            for (std::size_t i = 0; i < n; ++i) {
                double r = law.radius * std::cbrt(rng.u01());
                st.v.push_back(r * rng.unit_vector());
            }
            break;
        case LawKind::two_point:
            for (std::size_t i = 0; i < n; ++i) {
                double s = (rng.next_u64() & 1) ? law.magnitude : -law.magnitude;
                st.v.push_back({s, 0.0, 0.0});
            }
            break;
        case LawKind::file: {
            auto pts = io::read_cloud_csv(law.path);
            if (pts.size() != n)
                throw input_error("initial file has " + std::to_string(pts.size()) +
                                  " velocities, expected " + std::to_string(n));
            st.v = std::move(pts);
            break;
        }
    }
    return st;
}

CollisionEvent next_event(double now, std::size_t n, double k_max, RngStream& rng) {
    double rate = 2.0 * M_PI * k_max * static_cast<double>(n - 1);
    CollisionEvent ev;
    ev.t = now + rng.exponential(rate);
    ev.i = static_cast<uint32_t>(rng.below(n));
    ev.j = static_cast<uint32_t>(rng.below(n - 1));
    if (ev.j >= ev.i) ++ev.j;
    ev.z = k_max * rng.u01();
    ev.phi = 2.0 * M_PI * rng.u01();
    return ev;
}

void apply_event(ParticleState& state, const CollisionEvent& ev, double k,
                 const Kernel& kernel) {
    if (ev.z > k) return;  // thinned at this cutoff level
    Vec3 kick = collision_kick(state.v[ev.i], state.v[ev.j], ev.z, ev.phi, kernel);
    state.v[ev.i] += kick;
    state.time = ev.t;
    ++state.events_applied;
}

std::vector<Trajectory> run_coupled(const SimConfig& cfg) {
    cfg.validate();
    Kernel kernel(cfg.kernel);
    ParticleState init = sample_initial(cfg.n, cfg.law, cfg.seed, 2 * cfg.replica);

    const std::size_t levels = cfg.k_levels.size();
    std::vector<Trajectory> out(levels);
    std::vector<ParticleState> states(levels, init);

    RngStream ev_rng(cfg.seed, 2 * cfg.replica + 1);
    const double k_max = cfg.k_levels.back();

    std::size_t snap_idx = 0;
    auto record_before = [&](double t_next) {
        while (snap_idx < cfg.snapshot_times.size() && cfg.snapshot_times[snap_idx] < t_next) {
            for (std::size_t l = 0; l < levels; ++l) {
                ParticleState snap = states[l];
                snap.time = cfg.snapshot_times[snap_idx];
                out[l].snapshots.push_back(std::move(snap));
            }
            ++snap_idx;
        }
    };

    double now = 0.0;
    uint64_t generated = 0;
    while (true) {
        CollisionEvent ev = next_event(now, cfg.n, k_max, ev_rng);
        if (ev.t > cfg.horizon) break;
        record_before(ev.t);
        for (std::size_t l = 0; l < levels; ++l) apply_event(states[l], ev, cfg.k_levels[l], kernel);
        now = ev.t;
        ++generated;
    }
    record_before(std::numeric_limits<double>::infinity());

    for (std::size_t l = 0; l < levels; ++l) {
        states[l].time = cfg.horizon;
        out[l].state = std::move(states[l]);
        out[l].events_generated = generated;
    }
    return out;
}

Trajectory run(const SimConfig& cfg) {
    SimConfig top = cfg;
    top.k_levels = {cfg.k_levels.empty() ? 0.0 : cfg.k_levels.back()};
    return std::move(run_coupled(top).front());
}

Diagnostics diagnostics(const ParticleState& state, double exp_q) {
    Diagnostics d;
    d.exp_q = exp_q;
    const std::size_t n = state.v.size();
    if (n == 0) return d;

    std::vector<double> s2(n);
    simd::norms_sq3(&state.v[0].x, n, s2.data());
    d.moment2 = simd::reduce_sum(s2.data(), n) / static_cast<double>(n);
    d.max_speed = std::sqrt(simd::reduce_max(s2.data(), n));

    double m1 = 0.0, m4 = 0.0, me = 0.0;
    for (double s : s2) {
        double speed = std::sqrt(s);
        m1 += speed;
        m4 += s * s;
        if (!d.exp_overflow) {
            double arg = std::pow(speed, exp_q);
            if (arg > 700.0) {
                d.exp_overflow = true;
            } else {
                me += std::exp(arg);
            }
        }
    }
    d.moment1 = m1 / static_cast<double>(n);
    d.moment4 = m4 / static_cast<double>(n);
    d.exp_moment = d.exp_overflow ? std::numeric_limits<double>::infinity()
                                  : me / static_cast<double>(n);
    return d;
}

double mean_kinetic_energy(const ParticleState& state) {
    const std::size_t n = state.v.size();
    if (n == 0) return 0.0;
    std::vector<double> s2(n);
    simd::norms_sq3(&state.v[0].x, n, s2.data());
    return simd::reduce_sum(s2.data(), n) / static_cast<double>(n);
}

double mean_sq_displacement(const ParticleState& a, const ParticleState& b) {
    if (a.v.size() != b.v.size())
        throw input_error("mean_sq_displacement: state sizes differ");
    const std::size_t n = a.v.size();
    if (n == 0) return 0.0;
    return simd::sum_sq_diff(&a.v[0].x, &b.v[0].x, 3 * n) / static_cast<double>(n);
}

}  // namespace nanboltz

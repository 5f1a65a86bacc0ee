#include <algorithm>
#include <cmath>
#include <sstream>

#include "nanboltz/errors.hpp"
#include "nanboltz/geometry.hpp"
#include "nanboltz/harness.hpp"
#include "nanboltz/inequality.hpp"
#include "nanboltz/parallel.hpp"
#include "nanboltz/quadrature.hpp"

namespace nanboltz {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

std::vector<Kernel> all_kernels() {
    return {Kernel(KernelSpec::maxwell(0.5)), Kernel(KernelSpec::hard_potential(0.5, 0.5)),
            Kernel(KernelSpec::hard_sphere())};
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct Suite {
    const VerifyConfig& cfg;
    VerifyReport report;

    void add(const std::string& name, bool pass, double worst, const std::string& details) {
        report.checks.push_back({name, pass, worst, details});
        if (!pass) report.pass = false;
    }
};

void kernel_checks(Suite& s) {
    for (const Kernel& k : all_kernels()) {
        const std::string tag = k.spec().name();

        // Inverse round trip over log-spaced angles.
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            double theta = 1e-4 * std::pow(kHalfPi / 1e-4, i / 999.0);
            double back = k.angle_of_intensity(k.intensity_above(theta));
            worst = std::max(worst, std::abs(back - theta));
        }
        s.add("kernel/" + tag + "/round_trip", worst <= 1e-10, worst,
              "max |G(H(theta)) - theta|");

        // Strict monotonicity of the cumulative intensity and its inverse.
        bool monotone = true;
        double prev_h = k.intensity_above(1e-6);
        for (int i = 1; i <= 400; ++i) {
            double theta = 1e-6 + (kHalfPi - 1e-6) * i / 400.0;
            double h = k.intensity_above(theta);
            if (!(h < prev_h)) monotone = false;
            prev_h = h;
        }
        double prev_g = k.angle_of_intensity(0.0);
        double g_top = (k.family() == KernelFamily::hard_sphere) ? kHalfPi - 1e-9 : 1e6;
        for (int i = 1; i <= 400; ++i) {
            double z = g_top * i / 400.0;
            double g = k.angle_of_intensity(z);
            if (!(g < prev_g)) monotone = false;
            prev_g = g;
        }
        s.add("kernel/" + tag + "/monotone", monotone, 0.0, "H and G strictly decreasing");
    }

    // Two-sided power-law envelope of the deviation angle; the fitted
    // constants are reported, finiteness asserted.
    for (const Kernel& k : all_kernels()) {
        if (k.family() == KernelFamily::hard_sphere) continue;
        double c2 = std::numeric_limits<double>::infinity(), c3 = 0.0;
        double inv_nu = 1.0 / k.nu();
        for (int i = 0; i <= 600; ++i) {
            double z = (i == 0) ? 0.0 : 1e-4 * std::pow(1e10, (i - 1) / 599.0);
            double ratio = k.angle_of_intensity(z) * std::pow(1.0 + z, inv_nu);
            c2 = std::min(c2, ratio);
            c3 = std::max(c3, ratio);
        }
        bool ok = c2 > 0.0 && std::isfinite(c3) && c2 <= c3;
        s.add("kernel/" + k.spec().name() + "/angle_envelope", ok, c3,
              "c2=" + fmt(c2) + " c3=" + fmt(c3));
    }

    // Maxwell transfer weights do not depend on the relative speed.
    {
        Kernel k(KernelSpec::maxwell(0.5));
        double worst = 0.0;
        for (double kk : s.cfg.k_list) {
            double base = k.transfer_below(1.0, kk);
            for (double x : {1e-3, 0.3, 2.0, 7.0, 40.0})
                worst = std::max(worst, std::abs(k.transfer_below(x, kk) - base));
        }
        s.add("kernel/maxwell/speed_independent", worst <= 1e-10, worst,
              "max |phi_K(x) - phi_K(1)|");
    }

    // Tail-weight decay exponent, on a cutoff range deep enough into the
    // asymptotic regime for the power-law deviation angle.
    for (const Kernel& k : all_kernels()) {
        if (k.family() == KernelFamily::hard_sphere) continue;
        std::vector<double> ks, psis;
        for (double kk = 64.0; kk <= 4096.0; kk *= 2.0) {
            ks.push_back(kk);
            psis.push_back(k.transfer_above(1.0, kk));
        }
        SlopeFit fit = fit_loglog_slope(ks, psis);
        double target = 1.0 - 2.0 / k.nu();
        bool ok = std::abs(fit.slope - target) <= 0.1;
        s.add("kernel/" + k.spec().name() + "/tail_decay", ok, fit.slope,
              "slope " + fmt(fit.slope) + " target " + fmt(target));
    }
}

void geometry_checks(Suite& s) {
    RngStream rng(s.cfg.seed, 101);
    const std::size_t n = s.cfg.geometry_samples;

    double worst_frame = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 x = sample_stress_velocity(rng, i % 2 == 1);
        if (norm(x) == 0.0) continue;
        Frame f = frame_of(x);
        double nx = norm(x);
        double r = std::abs(dot(f.i, x)) / (nx * nx);
        r = std::max(r, std::abs(dot(f.j, x)) / (nx * nx));
        r = std::max(r, std::abs(dot(f.i, f.j)) / (nx * nx));
        r = std::max(r, std::abs(norm(f.i) - nx) / nx);
        r = std::max(r, std::abs(norm(f.j) - nx) / nx);
        double det = dot(x, cross(f.i, f.j)) / (nx * nx * nx);  // +1 for a direct basis
        r = std::max(r, std::abs(det - 1.0));
        worst_frame = std::max(worst_frame, r);
    }
    s.add("geometry/frame_invariants", worst_frame <= 1e-12, worst_frame,
          "orthogonality, norms, orientation");

    Kernel maxwell(KernelSpec::maxwell(0.5));
    double worst_kick = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 v = rng.isotropic_normal3(1.0), w = rng.isotropic_normal3(1.0);
        double theta = kHalfPi * rng.u01_pos();
        double phi = 2.0 * M_PI * rng.u01();
        Vec3 a = kick_from_angle(v, w, theta, phi);
        double x_sq = norm_sq(v - w);
        double expect = 0.5 * (1.0 - std::cos(theta)) * x_sq;
        worst_kick = std::max(worst_kick, std::abs(norm_sq(a) - expect) /
                                              std::max(expect, 1e-300));
    }
    s.add("geometry/kick_norm", worst_kick <= 1e-10, worst_kick,
          "|a|^2 = (1-cos theta)|v-v*|^2/2 relative error");

    double worst_mom = 0.0, worst_en = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 v = sample_stress_velocity(rng, i % 2 == 0);
        Vec3 w = sample_stress_velocity(rng, i % 3 == 0);
        double theta = kHalfPi * rng.u01();
        double phi = 2.0 * M_PI * rng.u01();
        auto [v1, w1] = collide(v, w, theta, phi);
        double scale = 1.0 + norm(v) + norm(w);
        worst_mom = std::max(worst_mom, norm((v1 + w1) - (v + w)) / scale);
        double e0 = norm_sq(v) + norm_sq(w);
        worst_en = std::max(worst_en, std::abs(norm_sq(v1) + norm_sq(w1) - e0) /
                                          std::max(e0, 1e-300));
    }
    s.add("geometry/momentum", worst_mom <= 1e-12, worst_mom, "pairwise momentum");
    s.add("geometry/energy", worst_en <= 1e-10, worst_en, "pairwise kinetic energy");

    double worst_dot = 0.0, worst_dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 x = sample_stress_velocity(rng, i % 2 == 1);
        Vec3 y = sample_stress_velocity(rng, i % 2 == 0);
        double nx = norm(x), ny = norm(y);
        if (nx == 0.0 || ny == 0.0) continue;
        FrameAlignment al = align_circles(x, y);
        double phi = 2.0 * M_PI * rng.u01();
        Vec3 gx = circle_vector(x, phi);
        Vec3 gy = circle_vector(y, phi + al.phi0);
        double c1 = std::cos(phi + al.phi1), s1 = std::sin(phi + al.phi1);
        double expect = dot(x, y) * c1 * c1 + nx * ny * s1 * s1;
        worst_dot = std::max(worst_dot, std::abs(dot(gx, gy) - expect) / (nx * ny));
        worst_dist = std::max(worst_dist, norm(gx - gy) - norm(x - y));
    }
    s.add("geometry/alignment_dot", worst_dot <= 1e-9, worst_dot,
          "circle alignment product identity (relative)");
    s.add("geometry/alignment_dist", worst_dist <= 1e-12, worst_dist,
          "|Gamma(X,phi) - Gamma(Y,phi+phi0)| <= |X-Y| slack");

    (void)maxwell;
}

void inequality_checks(Suite& s) {
    for (const Kernel& k : all_kernels()) {
        const std::string tag = k.spec().name();
        RngStream rng(s.cfg.seed, 202);

        double worst_sq = 0.0, worst_vec = 0.0;
        for (std::size_t i = 0; i < s.cfg.piece_samples; ++i) {
            Vec3 v = rng.isotropic_normal3(1.0), w = rng.isotropic_normal3(1.0);
            for (double kk : s.cfg.k_list) {
                PieceIdentity p = check_piece_identities(v, w, kk, k);
                worst_sq = std::max(worst_sq, p.rel_err_sq);
                worst_vec = std::max(worst_vec, p.rel_err_vec);
            }
        }
        s.add("identities/" + tag + "/deviation_sq", worst_sq <= 1e-8, worst_sq,
              "quadrature vs x^2 transfer_below");
        s.add("identities/" + tag + "/deviation_mean", worst_vec <= 1e-8, worst_vec,
              "quadrature vs -(v-v*) transfer_below");

        InequalityReport r = check_increment_inequality(s.cfg.inequality_samples, s.cfg.k_list,
                                                        k, 1e-6, s.cfg.seed, s.cfg.threads);
        s.add("inequality/" + tag + "/increment_bound", r.pass(), r.worst_margin,
              std::to_string(r.samples) + " quadruples, worst margin " + fmt(r.worst_margin) +
                  ", quad err " + fmt(r.max_quad_err));

        TailBoundReport t = check_tail_bound(s.cfg.tail_samples, s.cfg.k_list, k, s.cfg.seed);
        s.add("inequality/" + tag + "/tail_majorant", t.base.pass(), t.base.worst_margin,
              "frozen constant " + fmt(t.frozen_constant));

        GDiffBound g = check_g_difference_bound(k);
        s.add("inequality/" + tag + "/angle_diff_bound", g.finite, g.fitted_constant,
              "fitted c4 = " + fmt(g.fitted_constant) + " over " + std::to_string(g.pairs) +
                  " pairs");
    }

    // Hard-sphere closed form for the squared angle-difference integral.
    {
        Kernel hs(KernelSpec::hard_sphere());
        double x = 1.0, y = 2.0;
        double quad = g_difference_integral(hs, x, y).value;
        double closed = std::pow(kHalfPi, 3) * (x - y) * (x - y) / (3.0 * std::max(x, y));
        double err = std::abs(quad - closed);
        s.add("inequality/hard_sphere/angle_diff_closed_form", err <= 1e-10, err,
              "quadrature vs piecewise antiderivative at (1,2)");
    }

    for (const Kernel& k : all_kernels()) {
        if (!(k.gamma() > 0.0)) continue;
        PhiRegularity p = check_phi_regularity(k, s.cfg.k_list, s.cfg.seed);
        s.add("inequality/" + k.spec().name() + "/transfer_regularity", p.finite,
              p.sup_vector_lipschitz,
              "growth " + fmt(p.sup_growth) + ", lipschitz " + fmt(p.sup_lipschitz) +
                  ", vector " + fmt(p.sup_vector_lipschitz));
    }

    // Maxwell specialization: no angle-mismatch term; cross term collapses to
    // the speed-independent weight.
    {
        Kernel k(KernelSpec::maxwell(0.5));
        RngStream rng(s.cfg.seed, 203);
        double worst_a1 = 0.0, worst_a2 = 0.0, worst_anti = 0.0;
        for (int i = 0; i < 200; ++i) {
            Quadruple q = sample_stress_quadruple(rng, i % 2 == 1);
            for (double kk : s.cfg.k_list) {
                BoundTerms b = bound_terms(q, kk, k);
                double zeta = k.transfer_below(1.0, kk);
                double expect = zeta * (-norm_sq(q.v - q.w) + norm_sq(q.v_star - q.w_star));
                double scale = q.scale_sq();
                worst_a1 = std::max(worst_a1, std::abs(b.a1) / scale);
                worst_a2 = std::max(worst_a2, std::abs(b.a2 - expect) / scale);
                BoundTerms sw = bound_terms(q.swapped(), kk, k);
                worst_anti = std::max(worst_anti, std::abs(b.a2 + sw.a2) / scale);
            }
        }
        s.add("inequality/maxwell/a1_vanishes", worst_a1 <= 1e-12, worst_a1, "A1 == 0");
        s.add("inequality/maxwell/a2_zeta_form", worst_a2 <= 1e-9, worst_a2,
              "A2 = zeta_K (-|v-w|^2 + |v*-w*|^2)");
        s.add("inequality/maxwell/a2_antisymmetry", worst_anti <= 1e-10, worst_anti,
              "A2(q) + A2(swapped q) = 0");
    }
}

void sim_checks(Suite& s) {
    Kernel kernel(KernelSpec::maxwell(0.5));

    // One-sidedness and thinning, event by event.
    {
        RngStream rng(s.cfg.seed, 301);
        ParticleState st = sample_initial(16, {}, s.cfg.seed, 777);
        bool one_sided = true, thinning_ok = true;
        double t = 0.0;
        for (int e = 0; e < 400; ++e) {
            CollisionEvent ev = next_event(t, st.v.size(), 4.0, rng);
            t = ev.t;
            ParticleState before = st;
            apply_event(st, ev, 2.0, kernel);  // cutoff below the sampling level
            std::size_t changed = 0;
            for (std::size_t i = 0; i < st.v.size(); ++i)
                if (!(st.v[i] == before.v[i])) ++changed;
            if (changed > 1) one_sided = false;
            if (changed == 1 && !(st.v[ev.i] == before.v[ev.i])) {
                // fine: the changed one is particle i
            } else if (changed == 1) {
                one_sided = false;
            }
            if (ev.z > 2.0 && changed != 0) thinning_ok = false;
        }
        s.add("sim/one_sided", one_sided, 0.0, "at most v_i changes per event");
        s.add("sim/thinning", thinning_ok, 0.0, "events with z > K are no-ops");
    }

    // A generic event changes pathwise energy (the update is one-sided, not a
    // bilateral exchange).
    {
        ParticleState st = sample_initial(8, {}, s.cfg.seed, 778);
        double e0 = mean_kinetic_energy(st);
        CollisionEvent ev{0.1, 0, 1, 0.2, 1.0};
        apply_event(st, ev, 8.0, kernel);
        double e1 = mean_kinetic_energy(st);
        s.add("sim/pathwise_energy_changes", std::abs(e1 - e0) > 1e-12, std::abs(e1 - e0),
              "single-trajectory energy is not conserved");
    }

    // Energy conserved in expectation across replicas (paired differences).
    {
        const std::size_t reps = s.cfg.sim_replicas;
        std::vector<double> snaps{0.25, 0.5, 0.75, 1.0};
        std::vector<std::vector<double>> diffs(snaps.size(), std::vector<double>(reps, 0.0));
        parallel_for(reps, s.cfg.threads, [&](std::size_t r) {
            SimConfig sc;
            sc.n = 16;
            sc.k_levels = {4.0};
            sc.kernel = kernel.spec();
            sc.horizon = 1.0;
            sc.seed = s.cfg.seed;
            sc.replica = r;
            sc.snapshot_times = snaps;
            sc.snapshot_times.insert(sc.snapshot_times.begin(), 0.0);
            Trajectory traj = run(sc);
            double e0 = mean_kinetic_energy(traj.snapshots[0]);
            for (std::size_t si = 0; si < snaps.size(); ++si)
                diffs[si][r] = mean_kinetic_energy(traj.snapshots[si + 1]) - e0;
        });
        double worst_z = 0.0;
        for (auto& d : diffs) {
            double mean = 0.0;
            for (double v : d) mean += v;
            mean /= static_cast<double>(d.size());
            double ss = 0.0;
            for (double v : d) ss += (v - mean) * (v - mean);
            double se = std::sqrt(ss / (double(d.size() - 1) * double(d.size())));
            worst_z = std::max(worst_z, std::abs(mean) / std::max(se, 1e-300));
        }
        s.add("sim/energy_in_expectation", worst_z <= 4.0, worst_z,
              "|mean energy(t) - mean energy(0)| / SE over " + std::to_string(reps) +
                  " replicas");
    }

    // Total event rate: z-score of the mean count against 2 pi K (N-1) T.
    {
        const std::size_t reps = std::max<std::size_t>(s.cfg.sim_replicas, 100);
        const double T = 2.0, K = 4.0;
        const std::size_t N = 16;
        std::vector<double> counts(reps, 0.0);
        parallel_for(reps, s.cfg.threads, [&](std::size_t r) {
            SimConfig sc;
            sc.n = N;
            sc.k_levels = {K};
            sc.kernel = kernel.spec();
            sc.horizon = T;
            sc.seed = s.cfg.seed + 17;
            sc.replica = r;
            counts[r] = static_cast<double>(run(sc).events_generated);
        });
        double lambda = 2.0 * M_PI * K * double(N - 1) * T;
        double mean = 0.0;
        for (double c : counts) mean += c;
        mean /= double(reps);
        double z = (mean - lambda) / std::sqrt(lambda / double(reps));
        s.add("sim/event_rate", std::abs(z) <= 4.0, z,
              "mean count " + fmt(mean) + " vs " + fmt(lambda));
    }

    // Coupled trajectories agree exactly until the first event in (K_l, K_top].
    {
        RngStream rng(s.cfg.seed, 302);
        const double k_lo = 2.0, k_hi = 8.0;
        ParticleState lo = sample_initial(8, {}, s.cfg.seed, 779);
        ParticleState hi = lo;
        bool ok = true;
        double t = 0.0;
        bool diverged = false;
        for (int e = 0; e < 600 && !diverged; ++e) {
            CollisionEvent ev = next_event(t, lo.v.size(), k_hi, rng);
            t = ev.t;
            apply_event(lo, ev, k_lo, kernel);
            apply_event(hi, ev, k_hi, kernel);
            if (ev.z > k_lo && ev.z <= k_hi) {
                diverged = true;  // states may now differ
            } else if (mean_sq_displacement(lo, hi) != 0.0) {
                ok = false;
                break;
            }
        }
        s.add("sim/coupled_prefix", ok, 0.0,
              "levels coincide until the first cutoff-gated event");
    }
}

void transport_checks(Suite& s) {
    RngStream rng(s.cfg.seed, 401);

    // Exhaustive assignment oracle at small sizes.
    double worst = 0.0;
    bool ok = true;
    for (std::size_t inst = 0; inst < s.cfg.transport_instances; ++inst) {
        std::size_t n = 2 + inst % 5;
        PointCloud a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.pts.push_back(rng.isotropic_normal3(1.0));
            b.pts.push_back(rng.isotropic_normal3(1.0));
        }
        double solver = w2sq_exact(a, b).cost_sq;
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        double best = std::numeric_limits<double>::infinity();
        do {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i) c += norm_sq(a.pts[i] - b.pts[perm[i]]);
            best = std::min(best, c / double(n));
        } while (std::next_permutation(perm.begin(), perm.end()));
        worst = std::max(worst, std::abs(solver - best));
        if (std::abs(solver - best) > 1e-12) ok = false;
    }
    s.add("transport/assignment_bruteforce", ok, worst, "network simplex vs all permutations");

    // Translation identity.
    {
        PointCloud a;
        for (int i = 0; i < 64; ++i) a.pts.push_back(rng.isotropic_normal3(1.0));
        Vec3 h{0.3, -1.2, 0.7};
        PointCloud b = a;
        for (Vec3& p : b.pts) p += h;
        double err = std::abs(w2sq_exact(a, b).cost_sq - norm_sq(h));
        s.add("transport/translation", err <= 1e-12, err, "W2^2(a, a+h) = |h|^2");
    }

    // Homogeneity under scaling.
    {
        PointCloud a, b;
        for (int i = 0; i < 32; ++i) {
            a.pts.push_back(rng.isotropic_normal3(1.0));
            b.pts.push_back(rng.isotropic_normal3(1.0));
        }
        double base = w2sq_exact(a, b).cost();
        double lambda = 2.75;
        PointCloud as = a, bs = b;
        for (Vec3& p : as.pts) p *= lambda;
        for (Vec3& p : bs.pts) p *= lambda;
        double scaled = w2sq_exact(as, bs).cost();
        double err = std::abs(scaled - lambda * base) / (lambda * base);
        s.add("transport/scaling", err <= 1e-10, err, "W2(la, lb) = l W2(a, b)");
    }

    // Uneven solver agrees with the matched solver on equal sizes.
    {
        PointCloud a, b;
        for (int i = 0; i < 48; ++i) {
            a.pts.push_back(rng.isotropic_normal3(1.0));
            b.pts.push_back(rng.isotropic_normal3(1.0));
        }
        double err = std::abs(w2sq_uneven(a, b).cost_sq - w2sq_exact(a, b).cost_sq);
        s.add("transport/uneven_consistency", err <= 1e-10, err, "n = m reduction");
    }

    // Truncated-grid expectation identity for the spectral distance, against
    // the radial reduction of the same rule.
    {
        SobolevGrid grid;
        CharFn gauss = [](const Vec3& xi) {
            return std::complex<double>(std::exp(-0.5 * norm_sq(xi)), 0.0);
        };
        double lhs = neg_sobolev_expected(gauss, 2.0, grid, 256);
        QuadResult radial = integrate(
            [](double r) {
                return 4.0 * M_PI * r * r * std::pow(1.0 + r * r, -2.0) *
                       (1.0 - std::exp(-r * r));
            },
            0.0, grid.radius);
        double rhs = radial.value / 256.0;
        double err = std::abs(lhs - rhs) / rhs;
        s.add("transport/sobolev_radial", err <= 1e-6, err,
              "spherical rule vs radial quadrature");
    }
}

}  // namespace

VerifyReport run_invariant_suite(const VerifyConfig& cfg) {
    Suite suite{cfg, {}};
    kernel_checks(suite);
    geometry_checks(suite);
    inequality_checks(suite);
    sim_checks(suite);
    transport_checks(suite);
    return suite.report;
}

}  // namespace nanboltz

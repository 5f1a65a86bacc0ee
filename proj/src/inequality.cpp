#include "nanboltz/inequality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>

#include "nanboltz/errors.hpp"
#include "nanboltz/parallel.hpp"
#include "nanboltz/quadrature.hpp"
#include "nanboltz/simd/kernels.hpp"

namespace nanboltz {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

struct AzimuthTable {
    std::array<double, kAzimuthNodes> cos_tab{}, sin_tab{};
    AzimuthTable() {
        for (int k = 0; k < kAzimuthNodes; ++k) {
            double phi = 2.0 * M_PI * k / kAzimuthNodes;
            cos_tab[k] = std::cos(phi);
            sin_tab[k] = std::sin(phi);
        }
    }
};

const AzimuthTable& azimuth() {
    static const AzimuthTable t;
    return t;
}

// One collision side prepared for z sweeps: relative velocity, its frame, and
// the speed power entering the deviation angle.
struct Side {
    Vec3 rel;
    double x = 0.0, xg = 1.0;
    Frame fr{};
    bool zero = true;

    Side(const Vec3& a, const Vec3& b, const Kernel& kernel) {
        rel = a - b;
        x = norm(rel);
        if (x > 0.0) {
            xg = kernel.speed_pow_gamma(x);
            fr = frame_of(rel);
            zero = false;
        }
    }

    // Deviation coefficients at intensity z: kick(phi) = p + q cos(phi) + r sin(phi).
    void coeffs(double z, const Kernel& kernel, Vec3& p, Vec3& q, Vec3& r) const {
        if (zero) {
            p = q = r = Vec3{};
            return;
        }
        double theta = kernel.angle_of_intensity(z / xg);
        double s = std::sin(0.5 * theta);
        double one_minus_cos = 2.0 * s * s;
        double half_sin = 0.5 * std::sin(theta);
        p = -0.5 * one_minus_cos * rel;
        q = half_sin * fr.i;
        r = half_sin * fr.j;
    }

    // z beyond which the deviation vanishes identically (hard spheres only).
    double support_end(const Kernel& kernel) const {
        if (kernel.family() != KernelFamily::hard_sphere || zero)
            return std::numeric_limits<double>::infinity();
        return kHalfPi * xg;
    }
};

// Piecewise adaptive z integration on [0, k], split at the given breakpoints.
ValueErr integrate_with_breaks(const Integrand& f, double k, std::vector<double> breaks) {
    breaks.push_back(k);
    std::sort(breaks.begin(), breaks.end());
    ValueErr out;
    double lo = 0.0;
    for (double b : breaks) {
        double hi = std::clamp(b, 0.0, k);
        if (hi > lo) {
            QuadResult q = integrate(f, lo, hi);
            out.value += q.value;
            out.err += q.abserr;
            lo = hi;
        }
    }
    return out;
}

// Conservative error bound for a kernel transfer integral, from the
// quadrature tolerances it is computed with.
double transfer_err(double value, double x, const Kernel& kernel) {
    double scale = M_PI * kernel.speed_pow_gamma(x);
    return std::max(scale * kQuadAbsTol, std::abs(value) * kQuadRelTol);
}

}  // namespace

Vec3 sample_stress_velocity(RngStream& rng, bool heavy_tail) {
    if (!heavy_tail) return rng.isotropic_normal3(1.0);
    double radius = std::min(50.0, std::pow(rng.u01_pos(), -0.25));  // Pareto(4), capped
    return radius * rng.unit_vector();
}

Quadruple sample_stress_quadruple(RngStream& rng, bool heavy_tail) {
    return {sample_stress_velocity(rng, heavy_tail), sample_stress_velocity(rng, heavy_tail),
            sample_stress_velocity(rng, heavy_tail), sample_stress_velocity(rng, heavy_tail)};
}

ValueErr coupled_increment_lhs(const Quadruple& q, double k, const Kernel& kernel) {
    Side main(q.v, q.v_star, kernel);
    Side coupled(q.w, q.w_star, kernel);
    const Vec3 d = q.v - q.w;
    const double d_sq = norm_sq(d);

    FrameAlignment align = align_circles(main.rel, coupled.rel);
    const double c0 = std::cos(align.phi0), s0 = std::sin(align.phi0);

    const auto& tab = azimuth();
    auto integrand = [&](double z) {
        Vec3 p, qv, rv, pt, qt, rt;
        main.coeffs(z, kernel, p, qv, rv);
        coupled.coeffs(z, kernel, pt, qt, rt);
        // The phi0 offset of the coupled side folds into its coefficients.
        Vec3 qrot = c0 * qt + s0 * rt;
        Vec3 rrot = c0 * rt - s0 * qt;
        Vec3 w = d + p - pt;
        Vec3 dq = qv - qrot;
        Vec3 dr = rv - rrot;
        const double wv[3] = {w.x, w.y, w.z};
        const double qv3[3] = {dq.x, dq.y, dq.z};
        const double rv3[3] = {dr.x, dr.y, dr.z};
        double sum = simd::circle_quadratic_sum(wv, qv3, rv3, tab.cos_tab.data(),
                                                tab.sin_tab.data(), kAzimuthNodes);
        return (sum - kAzimuthNodes * d_sq) * (2.0 * M_PI / kAzimuthNodes);
    };

    std::vector<double> breaks{main.support_end(kernel), coupled.support_end(kernel)};
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [k](double b) { return !(b > 0.0) || b >= k; }),
                 breaks.end());
    ValueErr below = integrate_with_breaks(integrand, k, std::move(breaks));

    // Past the cutoff only the uncoupled side survives; its phi integral is
    // proportional to (1 - cos theta(z)), so the whole tail reduces to the
    // tail transfer weight.
    ValueErr out = below;
    if (!main.zero) {
        double tail_weight = kernel.transfer_above(main.x, k);
        out.value += (main.x * main.x - 2.0 * dot(d, main.rel)) * tail_weight;
        out.err += (main.x * main.x + 2.0 * std::abs(dot(d, main.rel))) *
                   transfer_err(tail_weight, main.x, kernel);
    }
    return out;
}

BoundTerms bound_terms(const Quadruple& q, double k, const Kernel& kernel) {
    Side main(q.v, q.v_star, kernel);
    Side coupled(q.w, q.w_star, kernel);
    BoundTerms out;

    // a1: cutoff integral of the squared deviation-angle mismatch.
    if (!main.zero && !coupled.zero) {
        auto mismatch = [&](double z) {
            double ga = kernel.angle_of_intensity(z / main.xg);
            double gb = kernel.angle_of_intensity(z / coupled.xg);
            double diff = ga - gb;
            return diff * diff;
        };
        std::vector<double> breaks{main.support_end(kernel), coupled.support_end(kernel)};
        breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                    [k](double b) { return !(b > 0.0) || b >= k; }),
                     breaks.end());
        ValueErr integral = integrate_with_breaks(mismatch, k, std::move(breaks));
        double factor = 2.0 * main.x * coupled.x;
        out.a1 = factor * integral.value;
        out.err += factor * integral.err;
    }

    // a2: signed cross term through the cutoff transfer weights.
    double phi_main = main.zero ? 0.0 : kernel.transfer_below(main.x, k);
    double phi_coupled = coupled.zero ? 0.0 : kernel.transfer_below(coupled.x, k);
    Vec3 shift = (q.v - q.w) + (q.v_star - q.w_star);
    Vec3 weighted = phi_main * main.rel - phi_coupled * coupled.rel;
    out.a2 = -dot(shift, weighted);
    out.err += norm(shift) * (main.x * transfer_err(phi_main, main.x, kernel) +
                              coupled.x * transfer_err(phi_coupled, coupled.x, kernel));

    // a3: tail term.
    if (!main.zero) {
        double psi = kernel.transfer_above(main.x, k);
        double factor = main.x * main.x + 2.0 * norm(q.v - q.w) * main.x;
        out.a3 = factor * psi;
        out.err += factor * transfer_err(psi, main.x, kernel);
    }
    return out;
}

InequalityReport check_increment_inequality(std::size_t samples,
                                            const std::vector<double>& k_list,
                                            const Kernel& kernel, double tol_scale,
                                            uint64_t seed, int threads) {
    InequalityReport report;
    report.name = "coupled_increment_lhs <= a1 + a2 + a3 (" + kernel.spec().name() + ")";
    report.worst_margin = std::numeric_limits<double>::infinity();

    std::mutex merge_mutex;
    parallel_for(samples, threads, [&](std::size_t idx) {
        RngStream rng(seed, idx);
        Quadruple q = sample_stress_quadruple(rng, idx % 2 == 1);
        double tol = tol_scale * q.scale_sq();

        double local_worst = std::numeric_limits<double>::infinity();
        double local_err = 0.0;
        std::size_t local_violations = 0;
        std::optional<Witness> local_witness;
        for (double k : k_list) {
            ValueErr lhs = coupled_increment_lhs(q, k, kernel);
            BoundTerms rhs = bound_terms(q, k, kernel);
            double margin = rhs.total() + tol - lhs.value;
            local_err = std::max(local_err, lhs.err + rhs.err);
            if (margin < local_worst) {
                local_worst = margin;
                local_witness = Witness{q, k, lhs.value, rhs.total()};
            }
            if (margin < 0.0) ++local_violations;
        }

        std::lock_guard<std::mutex> lock(merge_mutex);
        report.samples += 1;
        report.violations += local_violations;
        report.max_quad_err = std::max(report.max_quad_err, local_err);
        if (local_worst < report.worst_margin) {
            report.worst_margin = local_worst;
            report.worst = local_witness;
        }
    });
    return report;
}

ValueErr g_difference_integral(const Kernel& kernel, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0))
        throw input_error("g_difference_integral: speeds must be positive");
    auto f = [&](double z) {
        double diff = kernel.angle_of_intensity(z / x) - kernel.angle_of_intensity(z / y);
        return diff * diff;
    };
    ValueErr out;
    if (kernel.family() == KernelFamily::hard_sphere) {
        // Both angles vanish past (pi/2) max(x, y): exact support.
        double top = kHalfPi * std::max(x, y);
        std::vector<double> breaks{kHalfPi * std::min(x, y)};
        ValueErr v = integrate_with_breaks(f, top, std::move(breaks));
        return v;
    }
    double split = 16.0 * std::max(x, y);
    QuadResult head = integrate(f, 0.0, split);
    QuadResult tail = integrate_upper_inf(f, split);
    out.value = head.value + tail.value;
    out.err = head.abserr + tail.abserr;
    return out;
}

GDiffBound check_g_difference_bound(const Kernel& kernel, std::size_t grid_points, double lo,
                                    double hi) {
    GDiffBound out;
    std::vector<double> grid(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (grid_points - 1));

    out.finite = true;
    for (std::size_t a = 0; a < grid_points; ++a) {
        for (std::size_t b = a + 1; b < grid_points; ++b) {
            double x = grid[a], y = grid[b];
            double ratio = g_difference_integral(kernel, x, y).value * (x + y) /
                           ((x - y) * (x - y));
            if (!std::isfinite(ratio)) out.finite = false;
            out.fitted_constant = std::max(out.fitted_constant, ratio);
            ++out.pairs;
        }
    }
    return out;
}

PhiRegularity check_phi_regularity(const Kernel& kernel, const std::vector<double>& k_list,
                                   uint64_t seed) {
    if (!(kernel.gamma() > 0.0))
        throw input_error("check_phi_regularity: gamma > 0 branch only");
    PhiRegularity out;
    constexpr int kGrid = 33;
    std::vector<double> grid(kGrid);
    for (int i = 0; i < kGrid; ++i) grid[i] = 1e-2 * std::pow(1e4, i / double(kGrid - 1));

    RngStream rng(seed, 0);
    const double gamma = kernel.gamma();
    for (double k : k_list) {
        std::vector<double> phi(kGrid);
        for (int i = 0; i < kGrid; ++i) phi[i] = kernel.transfer_below(grid[i], k);
        for (int i = 0; i < kGrid; ++i)
            out.sup_growth = std::max(out.sup_growth, phi[i] / std::pow(grid[i], gamma));
        for (int i = 0; i < kGrid; ++i) {
            for (int j = i + 1; j < kGrid; ++j) {
                double denom = std::abs(std::pow(grid[i], gamma) - std::pow(grid[j], gamma));
                if (denom > 0.0)
                    out.sup_lipschitz =
                        std::max(out.sup_lipschitz, std::abs(phi[i] - phi[j]) / denom);
            }
        }
        for (int trial = 0; trial < 512; ++trial) {
            Vec3 xv = sample_stress_velocity(rng, trial % 2 == 1);
            Vec3 yv = sample_stress_velocity(rng, trial % 3 == 1);
            double nx = norm(xv), ny = norm(yv);
            if (nx == 0.0 || ny == 0.0) continue;
            Vec3 diff = kernel.transfer_below(nx, k) * xv - kernel.transfer_below(ny, k) * yv;
            double denom = norm(xv - yv) * (std::pow(nx, gamma) + std::pow(ny, gamma));
            if (denom > 0.0)
                out.sup_vector_lipschitz = std::max(out.sup_vector_lipschitz, norm(diff) / denom);
        }
    }
    out.finite = std::isfinite(out.sup_growth) && std::isfinite(out.sup_lipschitz) &&
                 std::isfinite(out.sup_vector_lipschitz);
    return out;
}

TailBoundReport check_tail_bound(std::size_t samples, const std::vector<double>& k_list,
                                 const Kernel& kernel, uint64_t seed) {
    TailBoundReport out;
    out.base.name = "a3 tail majorant (" + kernel.spec().name() + ")";
    out.base.worst_margin = std::numeric_limits<double>::infinity();

    const double nu = kernel.nu();
    const double gamma = kernel.gamma();
    const double q_exp = 1.5;
    const double c_inner = 6.0;
    if (kernel.family() == KernelFamily::hard_sphere) out.exp_q = q_exp;

    auto majorant = [&](const Quadruple& q, double k) {
        switch (kernel.family()) {
            case KernelFamily::maxwell:
                return (norm_sq(q.v) + norm_sq(q.v_star) + norm_sq(q.w)) *
                       std::pow(k, 1.0 - 2.0 / nu);
            case KernelFamily::hard_potential: {
                double p = 4.0 * gamma / nu + 2.0;
                return (1.0 + std::pow(norm(q.v), p) + std::pow(norm(q.v_star), p) +
                        norm_sq(q.w) + norm_sq(q.w_star)) *
                       std::pow(k, 1.0 - 2.0 / nu);
            }
            case KernelFamily::hard_sphere:
                return (1.0 + norm(q.w)) * std::exp(-std::pow(k, q_exp)) *
                       std::exp(c_inner * (std::pow(norm(q.v), q_exp) +
                                           std::pow(norm(q.v_star), q_exp)));
        }
        return 0.0;
    };

    auto a3_of = [&](const Quadruple& q, double k) {
        Side main(q.v, q.v_star, kernel);
        if (main.zero) return 0.0;
        return (main.x * main.x + 2.0 * norm(q.v - q.w) * main.x) *
               kernel.transfer_above(main.x, k);
    };

    // Calibration half: fit the constant; freeze it with a fixed safety factor.
    RngStream rng(seed, 0);
    std::vector<Quadruple> calib(samples), test(samples);
    for (std::size_t i = 0; i < samples; ++i) calib[i] = sample_stress_quadruple(rng, i % 2 == 1);
    for (std::size_t i = 0; i < samples; ++i) test[i] = sample_stress_quadruple(rng, i % 2 == 1);

    double fitted = 0.0;
    for (const Quadruple& q : calib)
        for (double k : k_list) {
            double mj = majorant(q, k);
            if (mj > 0.0) fitted = std::max(fitted, a3_of(q, k) / mj);
        }
    out.frozen_constant = 2.0 * fitted;

    for (const Quadruple& q : test) {
        for (double k : k_list) {
            double a3 = a3_of(q, k);
            double bound = out.frozen_constant * majorant(q, k);
            double margin = bound - a3;
            ++out.base.samples;
            if (margin < out.base.worst_margin) {
                out.base.worst_margin = margin;
                out.base.worst = Witness{q, k, a3, bound};
            }
            if (a3 > bound) ++out.base.violations;
        }
    }
    return out;
}

PieceIdentity check_piece_identities(const Vec3& v, const Vec3& v_star, double k,
                                     const Kernel& kernel) {
    Side side(v, v_star, kernel);
    PieceIdentity out;
    if (side.zero) return out;

    const auto& tab = azimuth();
    double cos_sum = 0.0, sin_sum = 0.0;
    for (int i = 0; i < kAzimuthNodes; ++i) {
        cos_sum += tab.cos_tab[i];
        sin_sum += tab.sin_tab[i];
    }

    auto sq_integrand = [&](double z) {
        Vec3 p, qv, rv;
        side.coeffs(z, kernel, p, qv, rv);
        const double pv[3] = {p.x, p.y, p.z};
        const double qv3[3] = {qv.x, qv.y, qv.z};
        const double rv3[3] = {rv.x, rv.y, rv.z};
        double sum = simd::circle_quadratic_sum(pv, qv3, rv3, tab.cos_tab.data(),
                                                tab.sin_tab.data(), kAzimuthNodes);
        return sum * (2.0 * M_PI / kAzimuthNodes);
    };
    auto vec_component = [&](double z, int axis) {
        Vec3 p, qv, rv;
        side.coeffs(z, kernel, p, qv, rv);
        double pc = axis == 0 ? p.x : axis == 1 ? p.y : p.z;
        double qc = axis == 0 ? qv.x : axis == 1 ? qv.y : qv.z;
        double rc = axis == 0 ? rv.x : axis == 1 ? rv.y : rv.z;
        double sum = pc * kAzimuthNodes + qc * cos_sum + rc * sin_sum;
        return sum * (2.0 * M_PI / kAzimuthNodes);
    };

    std::vector<double> breaks{side.support_end(kernel)};
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [k](double b) { return !(b > 0.0) || b >= k; }),
                 breaks.end());

    double phi_k = kernel.transfer_below(side.x, k);

    ValueErr sq = integrate_with_breaks(sq_integrand, k, breaks);
    double expect_sq = side.x * side.x * phi_k;
    out.rel_err_sq = std::abs(sq.value - expect_sq) / std::max(std::abs(expect_sq), 1e-12);

    Vec3 vec_quad;
    for (int axis = 0; axis < 3; ++axis) {
        ValueErr comp = integrate_with_breaks([&](double z) { return vec_component(z, axis); },
                                              k, breaks);
        if (axis == 0) vec_quad.x = comp.value;
        if (axis == 1) vec_quad.y = comp.value;
        if (axis == 2) vec_quad.z = comp.value;
    }
    Vec3 expect_vec = -phi_k * side.rel;
    out.rel_err_vec = norm(vec_quad - expect_vec) / std::max(norm(expect_vec), 1e-12);
    return out;
}

}  // namespace nanboltz

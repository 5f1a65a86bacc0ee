#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nanboltz/geometry.hpp"
#include "nanboltz/kernel.hpp"
#include "nanboltz/rng.hpp"
#include "nanboltz/vec3.hpp"

namespace nanboltz {

/// Two coupled pre-collision pairs: (v, v_star) against (w, w_star).
struct Quadruple {
    Vec3 v, v_star, w, w_star;

    Quadruple swapped() const { return {w, w_star, v, v_star}; }
    double scale_sq() const {
        return 1.0 + norm_sq(v) + norm_sq(v_star) + norm_sq(w) + norm_sq(w_star);
    }
};

struct ValueErr {
    double value = 0.0;
    double err = 0.0;
};

/// Azimuth grid used for every phi integral here. The integrands are
/// trigonometric polynomials of degree two, so the periodic trapezoid rule on
/// this many nodes integrates them to machine precision.
constexpr int kAzimuthNodes = 256;

/// Collision-averaged growth of the squared distance between the two coupled
/// pairs: the full (z, phi) integral of
///   |v + c(v,v*,z,phi) - w - c_K(w,w*,z,phi+phi0)|^2 - |v - w|^2,
/// with phi0 aligning the azimuth frames of v-v* and w-w*. The z-tail past K,
/// where only the uncoupled side survives, is closed through the tail
/// transfer weight.
ValueErr coupled_increment_lhs(const Quadruple& q, double k, const Kernel& kernel);

/// The three bound terms dominating coupled_increment_lhs:
///   a1: cutoff integral of the squared deviation-angle mismatch,
///   a2: the signed transfer-weight cross term,
///   a3: the tail term (|v-v*|^2 + 2|v-w||v-v*|) * transfer_above.
struct BoundTerms {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double err = 0.0;

    double total() const { return a1 + a2 + a3; }
};

BoundTerms bound_terms(const Quadruple& q, double k, const Kernel& kernel);

struct Witness {
    Quadruple q;
    double k = 0.0;
    double lhs = 0.0, rhs = 0.0;
};

struct InequalityReport {
    std::string name;
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;  // min over samples of rhs + tol - lhs
    double max_quad_err = 0.0;
    std::optional<Witness> worst;

    bool pass() const { return violations == 0; }
};

/// Stress sampling: Gaussian or Pareto(4)-radius (capped) isotropic draws.
Vec3 sample_stress_velocity(RngStream& rng, bool heavy_tail);
Quadruple sample_stress_quadruple(RngStream& rng, bool heavy_tail);

/// Certifies lhs <= a1 + a2 + a3 + tol_scale * (1 + sum of squared speeds)
/// over `samples` quadruples (alternating Gaussian / heavy-tailed) for every
/// cutoff in k_list.
InequalityReport check_increment_inequality(std::size_t samples,
                                            const std::vector<double>& k_list,
                                            const Kernel& kernel, double tol_scale,
                                            uint64_t seed, int threads = 1);

/// sup over a log grid of pairs (x, y) of
///   integral of (G(z/x) - G(z/y))^2 dz * (x + y) / (x - y)^2.
/// Reports the fitted constant; finite sup certifies the squared-difference
/// bound on the deviation-angle function.
struct GDiffBound {
    double fitted_constant = 0.0;
    bool finite = false;
    std::size_t pairs = 0;
};

GDiffBound check_g_difference_bound(const Kernel& kernel, std::size_t grid_points = 25,
                                    double lo = 1e-2, double hi = 1e2);

/// integral over z in [0, inf) of (G(z/x) - G(z/y))^2 (the quantity bounded
/// above); exposed for the closed-form cross checks.
ValueErr g_difference_integral(const Kernel& kernel, double x, double y);

/// Empirical sup of the transfer-weight regularity ratios, uniformly over the
/// cutoffs in k_list (gamma > 0 families):
///   transfer_below(x)/x^gamma,  |diff|/|x^gamma - y^gamma|,
///   |X phi(|X|) - Y phi(|Y|)| / (|X - Y| (|X|^gamma + |Y|^gamma)).
struct PhiRegularity {
    double sup_growth = 0.0;
    double sup_lipschitz = 0.0;
    double sup_vector_lipschitz = 0.0;
    bool finite = false;
};

PhiRegularity check_phi_regularity(const Kernel& kernel, const std::vector<double>& k_list,
                                   uint64_t seed);

/// Tail-term majorant check: fits the constant on a calibration half (times a
/// fixed safety factor), freezes it, then asserts the test half stays below.
struct TailBoundReport {
    InequalityReport base;
    double frozen_constant = 0.0;
    double exp_q = 0.0;  // hard-sphere branch only
};

TailBoundReport check_tail_bound(std::size_t samples, const std::vector<double>& k_list,
                                 const Kernel& kernel, uint64_t seed);

/// Dual-route identities for the deviation moments on [0, K]:
///   (z, phi) quadrature of |c|^2   vs   x^2 * transfer_below(x, K)
///   (z, phi) quadrature of c       vs   -(v - v*) * transfer_below(x, K).
struct PieceIdentity {
    double rel_err_sq = 0.0;
    double rel_err_vec = 0.0;
};

PieceIdentity check_piece_identities(const Vec3& v, const Vec3& v_star, double k,
                                     const Kernel& kernel);

}  // namespace nanboltz

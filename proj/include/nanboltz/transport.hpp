#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "nanboltz/sim.hpp"
#include "nanboltz/vec3.hpp"

namespace nanboltz {

/// Uniformly weighted empirical measure (weight 1/n per point).
struct PointCloud {
    std::vector<Vec3> pts;

    std::size_t size() const { return pts.size(); }
};

struct TransportPlan {
    struct Entry {
        uint32_t from = 0, to = 0;
        double mass = 0.0;
    };
    std::vector<Entry> entries;
};

/// Squared Wasserstein-2 value with its optimal plan. cost_sq stores W2^2;
/// the root is a view.
struct TransportResult {
    double cost_sq = 0.0;
    TransportPlan plan;
    bool exact = true;

    double cost() const { return std::sqrt(cost_sq); }
};

/// Globally optimal assignment between two same-size clouds.
/// cost_sq = min over permutations of (1/n) sum |a_i - b_perm(i)|^2.
TransportResult w2sq_exact(const PointCloud& a, const PointCloud& b,
                           std::size_t max_points = 4096);

/// Optimal transport between uniform clouds of any sizes (min-cost flow on the
/// dense bipartite graph); coincides with w2sq_exact when sizes match.
TransportResult w2sq_uneven(const PointCloud& a, const PointCloud& b,
                            std::size_t max_pairs = std::size_t{48} << 20);

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
    std::size_t replicas = 0;
};

/// Monte Carlo estimate of the expected squared W2 distance between the law
/// and the empirical measure of N i.i.d. samples, using a fresh M-sample of
/// the same law as the reference side (M >= 8N keeps the reference bias a
/// small fraction of the estimate; the M used is the caller's contract).
MeanSE empirical_w2sq_error(const InitialLaw& law, std::size_t n, std::size_t replicas,
                            std::size_t reference_size, uint64_t seed, int threads = 1);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double se_slope = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // 95% from t statistics
    std::size_t points = 0;
};

/// Ordinary least squares of log y on log x. Inputs must be positive.
SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y);

using CharFn = std::function<std::complex<double>(const Vec3&)>;

/// Spherical product quadrature over the ball |xi| <= radius:
/// Gauss-Legendre radially and in cos(theta), uniform in azimuth.
struct SobolevGrid {
    double radius = 10.0;
    int radial_nodes = 48;
    int theta_nodes = 12;
    int phi_nodes = 24;
};

/// Truncated negative-Sobolev squared distance between the empirical measure
/// of the cloud and the law with characteristic function f_hat:
/// integral over the grid ball of (1+|xi|^2)^(-s) |mu_hat - f_hat|^2.
/// Requires s > 3/2 (the defining integral diverges otherwise).
double neg_sobolev_dist_sq(std::span<const Vec3> cloud, const CharFn& f_hat, double s,
                           const SobolevGrid& grid);

/// Exact expectation of neg_sobolev_dist_sq over i.i.d. n-samples of the law,
/// evaluated with the same quadrature rule:
/// (1/n) * integral of (1+|xi|^2)^(-s) (1 - |f_hat|^2).
double neg_sobolev_expected(const CharFn& f_hat, double s, const SobolevGrid& grid,
                            std::size_t n);

}  // namespace nanboltz

#include "nanboltz/transport.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

#include "nanboltz/detail/transport_simplex.hpp"
#include "nanboltz/errors.hpp"
#include "nanboltz/parallel.hpp"
#include "nanboltz/quadrature.hpp"
#include "nanboltz/simd/kernels.hpp"

namespace nanboltz {

namespace {

struct Soa3 {
    std::vector<double> x, y, z;
    explicit Soa3(std::span<const Vec3> pts)
        : x(pts.size()), y(pts.size()), z(pts.size()) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            x[i] = pts[i].x;
            y[i] = pts[i].y;
            z[i] = pts[i].z;
        }
    }
};

std::vector<double> cost_matrix(const PointCloud& a, const PointCloud& b) {
    Soa3 soa(b.pts);
    std::vector<double> c(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec3& p = a.pts[i];
        simd::sq_dist_row(p.x, p.y, p.z, soa.x.data(), soa.y.data(), soa.z.data(), b.size(),
                          c.data() + i * b.size());
    }
    return c;
}

TransportResult solve_uniform(const PointCloud& a, const PointCloud& b) {
    const std::size_t n = a.size(), m = b.size();
    const int64_t scale = std::lcm(static_cast<int64_t>(n), static_cast<int64_t>(m));
    std::vector<int64_t> supply(n, scale / static_cast<int64_t>(n));
    std::vector<int64_t> demand(m, scale / static_cast<int64_t>(m));

    std::vector<double> c = cost_matrix(a, b);
    detail::TransportSolution sol = detail::solve_transport(c.data(), n, m, supply, demand);

    TransportResult r;
    r.cost_sq = sol.cost / static_cast<double>(scale);
    r.exact = true;
    r.plan.entries.reserve(sol.flows.size());
    for (const auto& f : sol.flows)
        r.plan.entries.push_back(
            {f.from, f.to, static_cast<double>(f.amount) / static_cast<double>(scale)});
    return r;
}

void check_cloud(const PointCloud& c, const char* which) {
    if (c.size() == 0) throw input_error(std::string(which) + " cloud is empty");
    for (const Vec3& p : c.pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw input_error(std::string(which) + " cloud has non-finite coordinates");
}

}  // namespace

TransportResult w2sq_exact(const PointCloud& a, const PointCloud& b, std::size_t max_points) {
    check_cloud(a, "first");
    check_cloud(b, "second");
    if (a.size() != b.size())
        throw input_error("w2sq_exact: cloud sizes differ (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + "); use w2sq_uneven");
    if (a.size() > max_points)
        throw capacity_error("w2sq_exact: " + std::to_string(a.size()) +
                             " points above the configured maximum " + std::to_string(max_points));
    return solve_uniform(a, b);
}

TransportResult w2sq_uneven(const PointCloud& a, const PointCloud& b, std::size_t max_pairs) {
    check_cloud(a, "first");
    check_cloud(b, "second");
    if (a.size() * b.size() > max_pairs)
        throw capacity_error("w2sq_uneven: " + std::to_string(a.size()) + "x" +
                             std::to_string(b.size()) +
                             " exceeds solver capacity; subsample the larger cloud");
    return solve_uniform(a, b);
}

MeanSE empirical_w2sq_error(const InitialLaw& law, std::size_t n, std::size_t replicas,
                            std::size_t reference_size, uint64_t seed, int threads) {
    if (n < 1 || reference_size < 8 * n)
        throw input_error("empirical_w2sq_error: need M >= 8N for reference-bias control");
    if (replicas < 30) throw input_error("empirical_w2sq_error: need at least 30 replicas");

    std::vector<double> vals(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        PointCloud sample{sample_initial(n, law, seed, 2 * r).v};
        PointCloud reference{sample_initial(reference_size, law, seed, 2 * r + 1).v};
        vals[r] = w2sq_uneven(sample, reference).cost_sq;
    });

    MeanSE out;
    out.replicas = replicas;
    out.mean = simd::reduce_sum(vals.data(), replicas) / static_cast<double>(replicas);
    double ss = 0.0;
    for (double v : vals) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(replicas - 1) * static_cast<double>(replicas)));
    return out;
}

SlopeFit fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw input_error("slope fit: size mismatch");
    const std::size_t k = x.size();
    if (k < 3) throw input_error("slope fit: need at least 3 points");

    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw input_error("slope fit: inputs must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw input_error("slope fit: x values must be distinct");

    SlopeFit fit;
    fit.points = k;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double resid = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += resid * resid;
    }
    double df = static_cast<double>(k - 2);
    double s2 = ssr / df;
    fit.se_slope = std::sqrt(std::max(0.0, s2 / sxx));
    boost::math::students_t dist(df);
    double tq = boost::math::quantile(dist, 0.975);
    fit.ci_lo = fit.slope - tq * fit.se_slope;
    fit.ci_hi = fit.slope + tq * fit.se_slope;
    return fit;
}

namespace {

struct SphericalRule {
    std::vector<Vec3> nodes;
    std::vector<double> weights;  // include the r^2 volume factor
};

SphericalRule spherical_rule(const SobolevGrid& g) {
    if (!(g.radius > 0.0) || g.radial_nodes < 2 || g.theta_nodes < 2 || g.phi_nodes < 4)
        throw input_error("sobolev grid: bad resolution or radius");
    GaussLegendre radial = gauss_legendre(g.radial_nodes);
    GaussLegendre polar = gauss_legendre(g.theta_nodes);

    SphericalRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(g.radial_nodes) * g.theta_nodes * g.phi_nodes);
    rule.weights.reserve(rule.nodes.capacity());
    double wphi = 2.0 * M_PI / g.phi_nodes;
    for (int ir = 0; ir < g.radial_nodes; ++ir) {
        double r = 0.5 * g.radius * (radial.nodes[ir] + 1.0);
        double wr = 0.5 * g.radius * radial.weights[ir] * r * r;
        for (int it = 0; it < g.theta_nodes; ++it) {
            double mu = polar.nodes[it];
            double sin_t = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            double w = wr * polar.weights[it] * wphi;
            for (int ip = 0; ip < g.phi_nodes; ++ip) {
                double phi = wphi * ip;
                rule.nodes.push_back({r * sin_t * std::cos(phi), r * sin_t * std::sin(phi),
                                      r * mu});
                rule.weights.push_back(w);
            }
        }
    }
    return rule;
}

}  // namespace

double neg_sobolev_dist_sq(std::span<const Vec3> cloud, const CharFn& f_hat, double s,
                           const SobolevGrid& grid) {
    if (!(s > 1.5)) throw input_error("neg_sobolev_dist_sq: need s > 3/2");
    if (cloud.empty()) throw input_error("neg_sobolev_dist_sq: empty cloud");
    SphericalRule rule = spherical_rule(grid);

    const double inv_n = 1.0 / static_cast<double>(cloud.size());
    double total = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const Vec3& xi = rule.nodes[k];
        double re = 0.0, im = 0.0;
        for (const Vec3& v : cloud) {
            double phase = dot(xi, v);
            re += std::cos(phase);
            im += std::sin(phase);
        }
        std::complex<double> mu_hat(re * inv_n, im * inv_n);
        std::complex<double> diff = mu_hat - f_hat(xi);
        total += rule.weights[k] * std::pow(1.0 + norm_sq(xi), -s) * std::norm(diff);
    }
    return total;
}

double neg_sobolev_expected(const CharFn& f_hat, double s, const SobolevGrid& grid,
                            std::size_t n) {
    if (!(s > 1.5)) throw input_error("neg_sobolev_expected: need s > 3/2");
    if (n == 0) throw input_error("neg_sobolev_expected: empty sample");
    SphericalRule rule = spherical_rule(grid);
    double total = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const Vec3& xi = rule.nodes[k];
        double f2 = std::norm(f_hat(xi));
        total += rule.weights[k] * std::pow(1.0 + norm_sq(xi), -s) * (1.0 - f2);
    }
    return total / static_cast<double>(n);
}

}  // namespace nanboltz

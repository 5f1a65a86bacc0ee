#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nanboltz/errors.hpp"
#include "nanboltz/quadrature.hpp"
#include "nanboltz/rng.hpp"
#include "nanboltz/transport.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("transport");

namespace {

PointCloud random_cloud(RngStream& rng, size_t n, double sigma = 1.0) {
    PointCloud c;
    for (size_t i = 0; i < n; ++i) c.pts.push_back(rng.isotropic_normal3(sigma));
    return c;
}

double brute_force_assignment(const PointCloud& a, const PointCloud& b) {
    const size_t n = a.size();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        for (size_t i = 0; i < n; ++i) c += norm_sq(a.pts[i] - b.pts[perm[i]]);
        best = std::min(best, c / double(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("identical clouds have zero cost and an identity-grade plan") {
    RngStream rng(1, 0);
    PointCloud a = random_cloud(rng, 17);
    TransportResult r = w2sq_exact(a, a);
    CHECK(r.cost_sq == 0.0);
    CHECK(r.exact);
    double mass = 0.0;
    for (const auto& e : r.plan.entries) mass += e.mass;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("translation identity is exact") {
    RngStream rng(2, 0);
    PointCloud a = random_cloud(rng, 64);
    Vec3 h{0.3, -1.2, 0.7};
    PointCloud b = a;
    for (Vec3& p : b.pts) p += h;
    CHECK(std::abs(w2sq_exact(a, b).cost_sq - norm_sq(h)) <= 1e-12);
}

TEST_CASE("matched solver equals exhaustive permutation search") {
    RngStream rng(3, 0);
    for (int inst = 0; inst < 40; ++inst) {
        size_t n = 2 + inst % 6;  // up to 7
        PointCloud a = random_cloud(rng, n);
        PointCloud b = random_cloud(rng, n);
        double solver = w2sq_exact(a, b).cost_sq;
        double brute = brute_force_assignment(a, b);
        CHECK(std::abs(solver - brute) <= 1e-12);
    }
}

TEST_CASE("metric properties on random clouds") {
    RngStream rng(4, 0);
    for (int inst = 0; inst < 25; ++inst) {
        PointCloud a = random_cloud(rng, 24);
        PointCloud b = random_cloud(rng, 24);
        double ab = w2sq_exact(a, b).cost_sq;
        double ba = w2sq_exact(b, a).cost_sq;
        CHECK(std::abs(ab - ba) <= 1e-12);
    }

    // Triangle inequality on the distances (unequal sizes included).
    for (int inst = 0; inst < 60; ++inst) {
        size_t na = 4 + (inst * 7) % 29, nb = 4 + (inst * 11) % 31, nc = 4 + (inst * 13) % 23;
        PointCloud a = random_cloud(rng, na), b = random_cloud(rng, nb),
                   c = random_cloud(rng, nc);
        double ab = w2sq_uneven(a, b).cost();
        double bc = w2sq_uneven(b, c).cost();
        double ac = w2sq_uneven(a, c).cost();
        CHECK(ac <= ab + bc + 1e-9);
    }

    // Positive homogeneity of degree one for the root.
    PointCloud a = random_cloud(rng, 32), b = random_cloud(rng, 32);
    double base = w2sq_exact(a, b).cost();
    PointCloud as = a, bs = b;
    for (Vec3& p : as.pts) p *= 3.25;
    for (Vec3& p : bs.pts) p *= 3.25;
    CHECK(w2sq_exact(as, bs).cost() == doctest::Approx(3.25 * base).epsilon(1e-10));
}

TEST_CASE("uneven marginals") {
    RngStream rng(5, 0);

    // n = m reduces to the matched problem.
    PointCloud a = random_cloud(rng, 21), b = random_cloud(rng, 21);
    CHECK(std::abs(w2sq_uneven(a, b).cost_sq - w2sq_exact(a, b).cost_sq) <= 1e-10);

    // Single atom against anything: the plan is forced.
    PointCloud atom;
    atom.pts.push_back({0.5, 0.5, -1.0});
    PointCloud m = random_cloud(rng, 9);
    double expect = 0.0;
    for (const Vec3& p : m.pts) expect += norm_sq(atom.pts[0] - p) / 9.0;
    CHECK(w2sq_uneven(atom, m).cost_sq == doctest::Approx(expect).epsilon(1e-12));

    // 2 x 4 against enumeration of the integral vertices: each pair of sinks
    // assigned to source 0, the rest to source 1.
    PointCloud two = random_cloud(rng, 2), four = random_cloud(rng, 4);
    double best = std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < 16; ++mask) {
        if (__builtin_popcount(mask) != 2) continue;
        double c = 0.0;
        for (int j = 0; j < 4; ++j) {
            const Vec3& src = (mask >> j) & 1 ? two.pts[0] : two.pts[1];
            c += 0.25 * norm_sq(src - four.pts[j]);
        }
        best = std::min(best, c);
    }
    CHECK(w2sq_uneven(two, four).cost_sq == doctest::Approx(best).epsilon(1e-12));

    // The optimal plan has the uniform marginals it was asked for.
    TransportResult r = w2sq_uneven(two, four);
    double from0 = 0.0, total = 0.0;
    for (const auto& e : r.plan.entries) {
        total += e.mass;
        if (e.from == 0) from0 += e.mass;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(from0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("input and capacity errors") {
    RngStream rng(6, 0);
    PointCloud a = random_cloud(rng, 4), b = random_cloud(rng, 5);
    CHECK_THROWS_AS(w2sq_exact(a, b), input_error);
    CHECK_THROWS_AS(w2sq_exact(a, a, 3), capacity_error);
    CHECK_THROWS_AS(w2sq_uneven(a, b, 10), capacity_error);
    PointCloud empty;
    CHECK_THROWS_AS(w2sq_exact(empty, empty), input_error);
    PointCloud bad = a;
    bad.pts[0].x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(w2sq_exact(bad, a), input_error);
}

TEST_CASE("log-log slope fitting") {
    std::vector<double> x{1, 2, 4, 8, 16, 32};
    std::vector<double> y;
    for (double v : x) y.push_back(v * v);
    SlopeFit f = fit_loglog_slope(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.ci_hi - f.ci_lo <= 1e-10);

    y.clear();
    for (double v : x) y.push_back(7.0 * std::pow(v, -1.0 / 3.0));
    f = fit_loglog_slope(x, y);
    CHECK(f.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));

    // Noisy synthetic decay lands in the expected window.
    RngStream rng(7, 0);
    y.clear();
    for (double v : x) y.push_back(std::pow(v, -0.5) * std::exp(0.1 * rng.normal()));
    f = fit_loglog_slope(x, y);
    CHECK(f.slope > -0.6);
    CHECK(f.slope < -0.4);

    std::vector<double> bad_y{1.0, -2.0, 3.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(fit_loglog_slope(x, bad_y), input_error);
    std::vector<double> two_x{1, 2}, two_y{1, 2};
    CHECK_THROWS_AS(fit_loglog_slope(two_x, two_y), input_error);
}

TEST_CASE("sampling-error estimator") {
    InitialLaw dirac{LawKind::two_point, 1.0, 1.0, 0.0, ""};  // point mass at 0
    MeanSE z = empirical_w2sq_error(dirac, 8, 30, 64, 5);
    CHECK(z.mean == 0.0);
    CHECK(z.se == 0.0);

    InitialLaw gauss;
    MeanSE a = empirical_w2sq_error(gauss, 16, 30, 128, 5, 2);
    MeanSE b = empirical_w2sq_error(gauss, 64, 30, 512, 5, 2);
    CHECK(a.mean > 0.0);
    CHECK(b.mean > 0.0);
    CHECK(b.mean < a.mean);  // decreasing in N

    CHECK_THROWS_AS(empirical_w2sq_error(gauss, 16, 10, 128, 5), input_error);
    CHECK_THROWS_AS(empirical_w2sq_error(gauss, 16, 30, 64, 5), input_error);
}

TEST_CASE("spectral distance: exact match, scaling, domain errors") {
    // A cloud compared against its own characteristic function vanishes.
    PointCloud atoms;
    atoms.pts = {{0.5, 0, 0}, {-0.5, 0.2, 0}, {0, -0.3, 0.8}};
    CharFn own = [&](const Vec3& xi) {
        std::complex<double> s{0.0, 0.0};
        for (const Vec3& v : atoms.pts)
            s += std::exp(std::complex<double>(0.0, dot(xi, v)));
        return s / 3.0;
    };
    SobolevGrid grid{6.0, 24, 8, 16};
    CHECK(neg_sobolev_dist_sq(atoms.pts, own, 2.0, grid) <= 1e-22);

    // Expectation identity scales as 1/N by construction.
    CharFn gauss = [](const Vec3& xi) {
        return std::complex<double>(std::exp(-0.5 * norm_sq(xi)), 0.0);
    };
    double e64 = neg_sobolev_expected(gauss, 2.0, grid, 64);
    double e256 = neg_sobolev_expected(gauss, 2.0, grid, 256);
    CHECK(e64 == doctest::Approx(4.0 * e256).epsilon(1e-12));
    CHECK(e64 > 0.0);

    // The spherical rule's expectation agrees with the radial reduction.
    double radial = integrate(
                        [](double r) {
                            return 4.0 * M_PI * r * r * std::pow(1.0 + r * r, -2.0) *
                                   (1.0 - std::exp(-r * r));
                        },
                        0.0, grid.radius)
                        .value;
    CHECK(e64 == doctest::Approx(radial / 64.0).epsilon(1e-8));

    CHECK_THROWS_AS(neg_sobolev_dist_sq(atoms.pts, gauss, 1.5, grid), input_error);
    CHECK_THROWS_AS(neg_sobolev_expected(gauss, 1.2, grid, 8), input_error);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <vector>

#include "nanboltz/rng.hpp"
#include "nanboltz/simd/kernels.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("simd");

namespace {

struct BackendGuard {
    simd::Backend saved;
    BackendGuard() : saved(simd::active_backend()) {}
    ~BackendGuard() { simd::set_backend(saved); }
};

std::vector<double> random_array(RngStream& rng, size_t len, double scale = 1.0) {
    std::vector<double> v(len);
    for (double& x : v) x = scale * (rng.u01() - 0.5);
    return v;
}

bool have_avx2() { return simd::set_backend(simd::Backend::avx2); }

}  // namespace

TEST_CASE("backend forcing") {
    BackendGuard guard;
    REQUIRE(simd::set_backend(simd::Backend::scalar));
    CHECK(simd::active_backend() == simd::Backend::scalar);
    if (have_avx2()) CHECK(simd::active_backend() == simd::Backend::avx2);
}

TEST_CASE("scalar and vector backends agree") {
    BackendGuard guard;
    if (!have_avx2()) return;  // nothing to compare on this host
    RngStream rng(77, 0);

    for (size_t n : {1, 2, 3, 4, 5, 7, 8, 31, 64, 129, 1000}) {
        auto xyz = random_array(rng, 3 * n, 4.0);
        auto flat_a = random_array(rng, n, 2.0);
        auto flat_b = random_array(rng, n, 2.0);
        auto bx = random_array(rng, n), by = random_array(rng, n), bz = random_array(rng, n);
        auto cos_tab = random_array(rng, n), sin_tab = random_array(rng, n);
        double w[3] = {0.3, -1.0, 2.0}, q[3] = {1.5, 0.2, -0.7}, r[3] = {-0.4, 0.9, 0.1};

        std::vector<double> norms_s(n), norms_v(n), row_s(n), row_v(n);

        REQUIRE(simd::set_backend(simd::Backend::scalar));
        simd::norms_sq3(xyz.data(), n, norms_s.data());
        double ssd_s = simd::sum_sq_diff(flat_a.data(), flat_b.data(), n);
        double sum_s = simd::reduce_sum(flat_a.data(), n);
        double max_s = simd::reduce_max(flat_a.data(), n);
        simd::sq_dist_row(0.1, -0.2, 0.3, bx.data(), by.data(), bz.data(), n, row_s.data());
        double circ_s =
            simd::circle_quadratic_sum(w, q, r, cos_tab.data(), sin_tab.data(), n);

        REQUIRE(simd::set_backend(simd::Backend::avx2));
        simd::norms_sq3(xyz.data(), n, norms_v.data());
        double ssd_v = simd::sum_sq_diff(flat_a.data(), flat_b.data(), n);
        double sum_v = simd::reduce_sum(flat_a.data(), n);
        double max_v = simd::reduce_max(flat_a.data(), n);
        simd::sq_dist_row(0.1, -0.2, 0.3, bx.data(), by.data(), bz.data(), n, row_v.data());
        double circ_v =
            simd::circle_quadratic_sum(w, q, r, cos_tab.data(), sin_tab.data(), n);

        for (size_t i = 0; i < n; ++i) {
            CHECK(norms_s[i] == doctest::Approx(norms_v[i]).epsilon(1e-13));
            CHECK(row_s[i] == doctest::Approx(row_v[i]).epsilon(1e-13));
        }
        CHECK(ssd_s == doctest::Approx(ssd_v).epsilon(1e-12));
        CHECK(sum_s == doctest::Approx(sum_v).epsilon(1e-12));
        CHECK(max_s == max_v);
        CHECK(circ_s == doctest::Approx(circ_v).epsilon(1e-12));
    }
}

TEST_CASE("kernels match straightforward references") {
    RngStream rng(78, 0);
    const size_t n = 257;
    auto xyz = random_array(rng, 3 * n, 3.0);

    std::vector<double> norms(n);
    simd::norms_sq3(xyz.data(), n, norms.data());
    for (size_t i = 0; i < n; ++i) {
        double e = xyz[3 * i] * xyz[3 * i] + xyz[3 * i + 1] * xyz[3 * i + 1] +
                   xyz[3 * i + 2] * xyz[3 * i + 2];
        CHECK(norms[i] == doctest::Approx(e).epsilon(1e-14));
    }

    auto bx = random_array(rng, n), by = random_array(rng, n), bz = random_array(rng, n);
    std::vector<double> row(n);
    simd::sq_dist_row(1.0, 2.0, -0.5, bx.data(), by.data(), bz.data(), n, row.data());
    for (size_t i = 0; i < n; ++i) {
        double dx = 1.0 - bx[i], dy = 2.0 - by[i], dz = -0.5 - bz[i];
        CHECK(row[i] == doctest::Approx(dx * dx + dy * dy + dz * dz).epsilon(1e-14));
    }
}

TEST_CASE("full-period azimuth sum collapses to its closed form") {
    // Over a full uniform grid the cross terms cancel and the sum equals
    // n |w|^2 + (n/2)(|q|^2 + |r|^2).
    const size_t n = 256;
    std::vector<double> cos_tab(n), sin_tab(n);
    for (size_t k = 0; k < n; ++k) {
        cos_tab[k] = std::cos(2.0 * M_PI * k / n);
        sin_tab[k] = std::sin(2.0 * M_PI * k / n);
    }
    double w[3] = {0.7, -0.3, 1.1}, q[3] = {0.2, 1.9, -1.2}, r[3] = {-0.8, 0.1, 0.4};
    double got = simd::circle_quadratic_sum(w, q, r, cos_tab.data(), sin_tab.data(), n);
    double w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    double r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    double expect = n * w2 + 0.5 * n * (q2 + r2);
    CHECK(got == doctest::Approx(expect).epsilon(1e-13));
}

TEST_SUITE_END();

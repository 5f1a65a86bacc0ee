#include <doctest.h>

#include <cmath>

#include "nanboltz/errors.hpp"
#include "nanboltz/quadrature.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("smooth integrals reach the default tolerance") {
    auto q1 = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(q1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(q1.abserr <= 1e-8);

    auto q2 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(q2.value == doctest::Approx(2.0).epsilon(1e-12));

    auto q3 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
    CHECK(q3.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("endpoint singularities via the extrapolating rule") {
    auto q = integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));

    auto q2 = integrate_singular([](double x) { return std::pow(x, -0.3); }, 0.0, 2.0);
    CHECK(q2.value == doctest::Approx(std::pow(2.0, 0.7) / 0.7).epsilon(1e-10));
}

TEST_CASE("semi-infinite tails") {
    auto q = integrate_upper_inf([](double x) { return std::exp(-x); }, 0.0);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-12));

    auto q2 = integrate_upper_inf([](double x) { return std::pow(x, -3.0); }, 2.0);
    CHECK(q2.value == doctest::Approx(1.0 / 8.0).epsilon(1e-10));
}

TEST_CASE("empty interval integrates to zero") {
    auto q = integrate([](double x) { return x; }, 3.0, 3.0);
    CHECK(q.value == 0.0);
}

TEST_CASE("non-integrable input raises a numerical error with an estimate") {
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0), numerical_error);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    for (int n : {2, 5, 16, 41}) {
        GaussLegendre rule = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

        // Exact through degree 2n-1.
        int deg = 2 * n - 1;
        double val = 0.0;
        for (int i = 0; i < n; ++i) val += rule.weights[i] * std::pow(rule.nodes[i], deg - 1);
        double exact = (deg - 1) % 2 == 0 ? 2.0 / double(deg) : 0.0;
        CHECK(val == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_SUITE_END();

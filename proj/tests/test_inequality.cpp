#include <doctest.h>

#include <cmath>

#include "nanboltz/inequality.hpp"
#include "nanboltz/quadrature.hpp"
#include "nanboltz/rng.hpp"
#include "nanboltz/transport.hpp"

using namespace nanboltz;

TEST_SUITE_BEGIN("inequality");

namespace {
const Kernel kMaxwell(KernelSpec::maxwell(0.5));
const Kernel kHardPot(KernelSpec::hard_potential(0.5, 0.5));
const Kernel kHardSphere(KernelSpec::hard_sphere());
const std::vector<const Kernel*> kAll{&kMaxwell, &kHardPot, &kHardSphere};
}  // namespace

TEST_CASE("deviation-moment identities hold per family") {
    RngStream rng(21, 0);
    for (const Kernel* k : kAll) {
        double worst_sq = 0.0, worst_vec = 0.0;
        for (int i = 0; i < 20; ++i) {
            Vec3 v = rng.isotropic_normal3(1.0), w = rng.isotropic_normal3(1.0);
            for (double cutoff : {1.0, 8.0}) {
                PieceIdentity p = check_piece_identities(v, w, cutoff, *k);
                worst_sq = std::max(worst_sq, p.rel_err_sq);
                worst_vec = std::max(worst_vec, p.rel_err_vec);
            }
        }
        INFO("family ", k->spec().name());
        CHECK(worst_sq <= 1e-8);
        CHECK(worst_vec <= 1e-8);
    }
}

TEST_CASE("coincident pre-collision velocities collapse the lhs") {
    // v = v*: the uncoupled deviation vanishes, so the cutoff part reduces to
    // moments of the coupled side only, all expressible through the transfer
    // weight.
    RngStream rng(22, 0);
    for (const Kernel* k : kAll) {
        for (int i = 0; i < 10; ++i) {
            Vec3 v = rng.isotropic_normal3(1.0);
            Vec3 w = rng.isotropic_normal3(1.0), ws = rng.isotropic_normal3(1.0);
            Quadruple q{v, v, w, ws};
            double cutoff = 4.0;
            double lhs = coupled_increment_lhs(q, cutoff, *k).value;
            double xt = norm(w - ws);
            double phi = xt > 0.0 ? k->transfer_below(xt, cutoff) : 0.0;
            double expect = xt * xt * phi + 2.0 * dot(v - w, w - ws) * phi;
            CHECK(lhs == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("identical coupled pairs: lhs equals the tail term exactly") {
    RngStream rng(23, 0);
    for (const Kernel* k : kAll) {
        for (int i = 0; i < 10; ++i) {
            Vec3 v = rng.isotropic_normal3(1.0), vs = rng.isotropic_normal3(1.0);
            Quadruple q{v, vs, v, vs};
            for (double cutoff : {1.0, 16.0}) {
                double lhs = coupled_increment_lhs(q, cutoff, *k).value;
                BoundTerms b = bound_terms(q, cutoff, *k);
                CHECK(std::abs(b.a1) <= 1e-12);
                CHECK(std::abs(b.a2) <= 1e-12);
                CHECK(lhs == doctest::Approx(b.a3).epsilon(1e-8));
                CHECK(lhs <= b.total() + 1e-6 * q.scale_sq());
            }
        }
    }
}

TEST_CASE("maxwell specialization of the bound terms") {
    RngStream rng(24, 0);
    double worst_a1 = 0.0, worst_a2 = 0.0, worst_anti = 0.0;
    for (int i = 0; i < 300; ++i) {
        Quadruple q = sample_stress_quadruple(rng, i % 2 == 1);
        for (double cutoff : {1.0, 8.0, 64.0}) {
            BoundTerms b = bound_terms(q, cutoff, kMaxwell);
            double zeta = kMaxwell.transfer_below(1.0, cutoff);
            double expect = zeta * (-norm_sq(q.v - q.w) + norm_sq(q.v_star - q.w_star));
            double scale = q.scale_sq();
            worst_a1 = std::max(worst_a1, std::abs(b.a1) / scale);
            worst_a2 = std::max(worst_a2, std::abs(b.a2 - expect) / scale);
            BoundTerms sw = bound_terms(q.swapped(), cutoff, kMaxwell);
            worst_anti = std::max(worst_anti, std::abs(b.a2 + sw.a2) / scale);
        }
    }
    CHECK(worst_a1 == 0.0);
    CHECK(worst_a2 <= 1e-9);
    CHECK(worst_anti <= 1e-10);
}

TEST_CASE("increment inequality on a stress sample") {
    for (const Kernel* k : kAll) {
        InequalityReport r =
            check_increment_inequality(500, {1.0, 8.0, 64.0}, *k, 1e-6, 90210, 2);
        INFO("family ", k->spec().name(), " worst margin ", r.worst_margin);
        CHECK(r.samples == 500);
        CHECK(r.violations == 0);
        CHECK(r.worst_margin >= 0.0);
    }
}

TEST_CASE("squared angle-difference integral") {
    // x = y: identically zero integrand.
    CHECK(g_difference_integral(kMaxwell, 2.0, 2.0).value == 0.0);

    // Hard spheres at (1, 2): piecewise antiderivative value (pi/2)^3 / 6.
    double quad = g_difference_integral(kHardSphere, 1.0, 2.0).value;
    CHECK(quad == doctest::Approx(std::pow(M_PI / 2.0, 3) / 6.0).epsilon(1e-10));

    for (const Kernel* k : kAll) {
        GDiffBound g = check_g_difference_bound(*k, 13);
        INFO("family ", k->spec().name(), " c4 = ", g.fitted_constant);
        CHECK(g.finite);
        CHECK(g.fitted_constant > 0.0);
    }
}

TEST_CASE("transfer-weight regularity (gamma > 0 families)") {
    for (const Kernel* k : {&kHardPot, &kHardSphere}) {
        PhiRegularity p = check_phi_regularity(*k, {1.0, 8.0, 64.0}, 31337);
        INFO("family ", k->spec().name(), " sups ", p.sup_growth, " ", p.sup_lipschitz, " ",
             p.sup_vector_lipschitz);
        CHECK(p.finite);
    }
    CHECK_THROWS_AS(check_phi_regularity(kMaxwell, {1.0}, 0), input_error);
}

TEST_CASE("tail majorants: no test-half violations, support vanishing") {
    for (const Kernel* k : kAll) {
        TailBoundReport t = check_tail_bound(150, {1.0, 8.0, 64.0}, *k, 777);
        INFO("family ", k->spec().name(), " frozen C = ", t.frozen_constant);
        CHECK(t.base.violations == 0);
    }

    // Hard spheres: cutoff above every deviation support kills the tail term.
    Quadruple q{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
    double x = norm(q.v - q.v_star);
    BoundTerms b = bound_terms(q, M_PI / 2.0 * x + 1.0, kHardSphere);
    CHECK(b.a3 == 0.0);
}

TEST_CASE("hard-potential tail term decays at the predicted rate") {
    Quadruple q{{1.2, 0, 0}, {-0.7, 0.4, 0}, {0.3, 0.9, -0.2}, {0, -1.1, 0.5}};
    std::vector<double> ks, a3s;
    for (double cutoff = 64.0; cutoff <= 4096.0; cutoff *= 2.0) {
        ks.push_back(cutoff);
        a3s.push_back(bound_terms(q, cutoff, kHardPot).a3);
    }
    SlopeFit fit = fit_loglog_slope(ks, a3s);
    double target = 1.0 - 2.0 / kHardPot.nu();  // -3
    INFO("slope ", fit.slope);
    CHECK(std::abs(fit.slope - target) <= 0.15);
}

TEST_SUITE_END();

#include "nanboltz/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <mutex>
#include <string>

#include "nanboltz/errors.hpp"

namespace nanboltz {

namespace {

constexpr size_t kWorkspaceLimit = 1024;

void disable_gsl_abort() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double trampoline(double x, void* params) {
    return (*static_cast<const Integrand*>(params))(x);
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

QuadResult run(int mode, const Integrand& f, double a, double b,
               double abs_tol, double rel_tol) {
    disable_gsl_abort();
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kWorkspaceLimit));
    if (!ws) throw std::bad_alloc();

    gsl_function gf;
    gf.function = &trampoline;
    gf.params = const_cast<Integrand*>(&f);

    QuadResult r;
    int status = 0;
    switch (mode) {
        case 0:
            status = gsl_integration_qag(&gf, a, b, abs_tol, rel_tol, kWorkspaceLimit,
                                         GSL_INTEG_GAUSS21, ws.get(), &r.value, &r.abserr);
            break;
        case 1:
            status = gsl_integration_qags(&gf, a, b, abs_tol, rel_tol, kWorkspaceLimit,
                                          ws.get(), &r.value, &r.abserr);
            break;
        default:
            status = gsl_integration_qagiu(&gf, a, abs_tol, rel_tol, kWorkspaceLimit,
                                           ws.get(), &r.value, &r.abserr);
            break;
    }

    if (status == GSL_SUCCESS) return r;
    // Roundoff-limited results are fine as long as the reported error is
    // within the requested tolerance; anything else is a hard failure.
    if ((status == GSL_EROUND || status == GSL_EMAXITER) &&
        (r.abserr <= abs_tol || r.abserr <= rel_tol * std::abs(r.value))) {
        return r;
    }
    r.converged = false;
    throw numerical_error("quadrature failed to reach tolerance (" +
                              std::string(gsl_strerror(status)) + ")",
                          r.value, r.abserr);
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double abs_tol, double rel_tol) {
    if (a == b) return {0.0, 0.0, true};
    return run(0, f, a, b, abs_tol, rel_tol);
}

QuadResult integrate_singular(const Integrand& f, double a, double b,
                              double abs_tol, double rel_tol) {
    if (a == b) return {0.0, 0.0, true};
    return run(1, f, a, b, abs_tol, rel_tol);
}

QuadResult integrate_upper_inf(const Integrand& f, double a, double abs_tol, double rel_tol) {
    return run(2, f, a, 0.0, abs_tol, rel_tol);
}

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw input_error("gauss_legendre: need at least one node");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess for the i-th root of P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace nanboltz

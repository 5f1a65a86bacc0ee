#pragma once

#include <functional>
#include <vector>

namespace nanboltz {

/// Default tolerances for every adaptive integral in the project. These sit
/// well below the tolerances of the inequality checks they feed.
constexpr double kQuadAbsTol = 1e-10;
constexpr double kQuadRelTol = 1e-8;

struct QuadResult {
    double value = 0.0;
    double abserr = 0.0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        abserr += o.abserr;
        converged = converged && o.converged;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (21 point) on [a, b]. Throws numerical_error with
/// the achieved estimate if the tolerance cannot be reached.
QuadResult integrate(const Integrand& f, double a, double b,
                     double abs_tol = kQuadAbsTol, double rel_tol = kQuadRelTol);

/// Adaptive integration on [a, b] with extrapolation; tolerates integrable
/// endpoint singularities.
QuadResult integrate_singular(const Integrand& f, double a, double b,
                              double abs_tol = kQuadAbsTol, double rel_tol = kQuadRelTol);

/// Adaptive integration on [a, inf) for decaying integrands.
QuadResult integrate_upper_inf(const Integrand& f, double a,
                               double abs_tol = kQuadAbsTol, double rel_tol = kQuadRelTol);

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule (Newton iteration on the Legendre recurrence).
GaussLegendre gauss_legendre(int n);

}  // namespace nanboltz

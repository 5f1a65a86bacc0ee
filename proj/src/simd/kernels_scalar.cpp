// Reference kernels. The vector backends must agree with these up to
// summation-order roundoff; the equivalence tests pin that down.

#include "vtable.hpp"

namespace nanboltz::simd::detail {

namespace {

void norms_sq3_impl(const double* xyz, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = xyz + 3 * i;
        out[i] = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    }
}

double sum_sq_diff_impl(const double* a, const double* b, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double reduce_sum_impl(const double* a, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += a[i];
    return acc;
}

double reduce_max_impl(const double* a, std::size_t len) {
    double m = len ? a[0] : 0.0;
    for (std::size_t i = 1; i < len; ++i)
        if (a[i] > m) m = a[i];
    return m;
}

void sq_dist_row_impl(double ax, double ay, double az, const double* bx, const double* by,
                      const double* bz, std::size_t m, double* out) {
    for (std::size_t j = 0; j < m; ++j) {
        double dx = ax - bx[j];
        double dy = ay - by[j];
        double dz = az - bz[j];
        out[j] = dx * dx + dy * dy + dz * dz;
    }
}

double circle_quadratic_sum_impl(const double* w, const double* q, const double* r,
                                 const double* cos_tab, const double* sin_tab, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double c = cos_tab[k], s = sin_tab[k];
        double ex = w[0] + q[0] * c + r[0] * s;
        double ey = w[1] + q[1] * c + r[1] * s;
        double ez = w[2] + q[2] * c + r[2] * s;
        acc += ex * ex + ey * ey + ez * ez;
    }
    return acc;
}

}  // namespace

const Vtable scalar_vtable = {
    norms_sq3_impl, sum_sq_diff_impl, reduce_sum_impl,
    reduce_max_impl, sq_dist_row_impl, circle_quadratic_sum_impl,
};

}  // namespace nanboltz::simd::detail

// AVX2+FMA variants. Compiled with -mavx2 -mfma; only ever called after the
// dispatcher has confirmed host support.

#include "vtable.hpp"

#ifdef NANBOLTZ_HAVE_AVX2

#include <immintrin.h>

namespace nanboltz::simd::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void norms_sq3_impl(const double* xyz, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* p = xyz + 3 * i;
        __m256d x = _mm256_set_pd(p[9], p[6], p[3], p[0]);
        __m256d y = _mm256_set_pd(p[10], p[7], p[4], p[1]);
        __m256d z = _mm256_set_pd(p[11], p[8], p[5], p[2]);
        __m256d s = _mm256_fmadd_pd(z, z, _mm256_fmadd_pd(y, y, _mm256_mul_pd(x, x)));
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i) {
        const double* p = xyz + 3 * i;
        out[i] = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    }
}

double sum_sq_diff_impl(const double* a, const double* b, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double reduce_sum_impl(const double* a, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double s = hsum(acc);
    for (; i < len; ++i) s += a[i];
    return s;
}

double reduce_max_impl(const double* a, std::size_t len) {
    if (len == 0) return 0.0;
    if (len < 4) {
        double m = a[0];
        for (std::size_t i = 1; i < len; ++i)
            if (a[i] > m) m = a[i];
        return m;
    }
    __m256d acc = _mm256_loadu_pd(a);
    std::size_t i = 4;
    for (; i + 4 <= len; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(a + i));
    double m = hmax(acc);
    for (; i < len; ++i)
        if (a[i] > m) m = a[i];
    return m;
}

void sq_dist_row_impl(double ax, double ay, double az, const double* bx, const double* by,
                      const double* bz, std::size_t m, double* out) {
    __m256d vax = _mm256_set1_pd(ax);
    __m256d vay = _mm256_set1_pd(ay);
    __m256d vaz = _mm256_set1_pd(az);
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
        __m256d dx = _mm256_sub_pd(vax, _mm256_loadu_pd(bx + j));
        __m256d dy = _mm256_sub_pd(vay, _mm256_loadu_pd(by + j));
        __m256d dz = _mm256_sub_pd(vaz, _mm256_loadu_pd(bz + j));
        __m256d s = _mm256_fmadd_pd(dz, dz, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx)));
        _mm256_storeu_pd(out + j, s);
    }
    for (; j < m; ++j) {
        double dx = ax - bx[j], dy = ay - by[j], dz = az - bz[j];
        out[j] = dx * dx + dy * dy + dz * dz;
    }
}

double circle_quadratic_sum_impl(const double* w, const double* q, const double* r,
                                 const double* cos_tab, const double* sin_tab, std::size_t n) {
    __m256d w0 = _mm256_set1_pd(w[0]), w1 = _mm256_set1_pd(w[1]), w2 = _mm256_set1_pd(w[2]);
    __m256d q0 = _mm256_set1_pd(q[0]), q1 = _mm256_set1_pd(q[1]), q2 = _mm256_set1_pd(q[2]);
    __m256d r0 = _mm256_set1_pd(r[0]), r1 = _mm256_set1_pd(r[1]), r2 = _mm256_set1_pd(r[2]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d c = _mm256_loadu_pd(cos_tab + k);
        __m256d s = _mm256_loadu_pd(sin_tab + k);
        __m256d ex = _mm256_fmadd_pd(q0, c, _mm256_fmadd_pd(r0, s, w0));
        __m256d ey = _mm256_fmadd_pd(q1, c, _mm256_fmadd_pd(r1, s, w1));
        __m256d ez = _mm256_fmadd_pd(q2, c, _mm256_fmadd_pd(r2, s, w2));
        acc = _mm256_fmadd_pd(ex, ex, acc);
        acc = _mm256_fmadd_pd(ey, ey, acc);
        acc = _mm256_fmadd_pd(ez, ez, acc);
    }
    double total = hsum(acc);
    for (; k < n; ++k) {
        double c = cos_tab[k], s = sin_tab[k];
        double ex = w[0] + q[0] * c + r[0] * s;
        double ey = w[1] + q[1] * c + r[1] * s;
        double ez = w[2] + q[2] * c + r[2] * s;
        total += ex * ex + ey * ey + ez * ez;
    }
    return total;
}

}  // namespace

const Vtable avx2_vtable = {
    norms_sq3_impl, sum_sq_diff_impl, reduce_sum_impl,
    reduce_max_impl, sq_dist_row_impl, circle_quadratic_sum_impl,
};

}  // namespace nanboltz::simd::detail

#endif  // NANBOLTZ_HAVE_AVX2

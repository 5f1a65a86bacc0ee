#pragma once

#include <cstddef>

namespace nanboltz::simd::detail {

struct Vtable {
    void (*norms_sq3)(const double*, std::size_t, double*);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*reduce_sum)(const double*, std::size_t);
    double (*reduce_max)(const double*, std::size_t);
    void (*sq_dist_row)(double, double, double, const double*, const double*, const double*,
                        std::size_t, double*);
    double (*circle_quadratic_sum)(const double*, const double*, const double*, const double*,
                                   const double*, std::size_t);
};

extern const Vtable scalar_vtable;
#ifdef NANBOLTZ_HAVE_AVX2
extern const Vtable avx2_vtable;
#endif

}  // namespace nanboltz::simd::detail

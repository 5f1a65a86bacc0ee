#pragma once

#include <cstddef>

namespace nanboltz::simd {

enum class Backend { scalar, avx2 };

/// Backend currently dispatched to. Picked once at startup: AVX2+FMA when the
/// host supports it, unless overridden by set_backend() or the environment
/// variable NANBOLTZ_SIMD (values: auto, scalar, avx2).
Backend active_backend();

/// Force a backend. Returns false (and leaves the dispatch unchanged) if the
/// host cannot run it.
bool set_backend(Backend b);

const char* backend_name(Backend b);

/// Squared norm of each 3-vector of an interleaved array x0,y0,z0,x1,y1,...
void norms_sq3(const double* xyz, std::size_t n, double* out);

/// Sum of squared element differences of two flat arrays of equal length.
double sum_sq_diff(const double* a, const double* b, std::size_t len);

double reduce_sum(const double* a, std::size_t len);

double reduce_max(const double* a, std::size_t len);

/// out[j] = (ax-bx[j])^2 + (ay-by[j])^2 + (az-bz[j])^2 for j < m.
void sq_dist_row(double ax, double ay, double az, const double* bx, const double* by,
                 const double* bz, std::size_t m, double* out);

/// Sum over k < n of |w + q*cos_tab[k] + r*sin_tab[k]|^2 for 3-vectors w, q, r
/// (the azimuth reduction of the collision integrals).
double circle_quadratic_sum(const double w[3], const double q[3], const double r[3],
                            const double* cos_tab, const double* sin_tab, std::size_t n);

}  // namespace nanboltz::simd

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "nanboltz/simd/kernels.hpp"
#include "vtable.hpp"

namespace nanboltz::simd {

namespace {

using detail::Vtable;

bool host_has_avx2() {
#if defined(NANBOLTZ_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Vtable* table_for(Backend b) {
#ifdef NANBOLTZ_HAVE_AVX2
    if (b == Backend::avx2) return &detail::avx2_vtable;
#endif
    return &detail::scalar_vtable;
}

Backend detect() {
    if (const char* env = std::getenv("NANBOLTZ_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && host_has_avx2()) return Backend::avx2;
        // "auto" or unusable request: fall through to detection
    }
    return host_has_avx2() ? Backend::avx2 : Backend::scalar;
}

struct Dispatch {
    std::atomic<Backend> backend;
    std::atomic<const Vtable*> table;
    Dispatch() {
        Backend b = detect();
        backend.store(b);
        table.store(table_for(b));
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

const Vtable& vt() { return *dispatch().table.load(std::memory_order_relaxed); }

}  // namespace

Backend active_backend() { return dispatch().backend.load(); }

bool set_backend(Backend b) {
    if (b == Backend::avx2 && !host_has_avx2()) return false;
    dispatch().table.store(table_for(b));
    dispatch().backend.store(b);
    return true;
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void norms_sq3(const double* xyz, std::size_t n, double* out) { vt().norms_sq3(xyz, n, out); }

double sum_sq_diff(const double* a, const double* b, std::size_t len) {
    return vt().sum_sq_diff(a, b, len);
}

double reduce_sum(const double* a, std::size_t len) { return vt().reduce_sum(a, len); }

double reduce_max(const double* a, std::size_t len) { return vt().reduce_max(a, len); }

void sq_dist_row(double ax, double ay, double az, const double* bx, const double* by,
                 const double* bz, std::size_t m, double* out) {
    vt().sq_dist_row(ax, ay, az, bx, by, bz, m, out);
}

double circle_quadratic_sum(const double w[3], const double q[3], const double r[3],
                            const double* cos_tab, const double* sin_tab, std::size_t n) {
    return vt().circle_quadratic_sum(w, q, r, cos_tab, sin_tab, n);
}

}  // namespace nanboltz::simd

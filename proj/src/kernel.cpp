#include "nanboltz/kernel.hpp"

#include <cmath>

#include "nanboltz/errors.hpp"

namespace nanboltz {

namespace {
constexpr double kHalfPi = M_PI / 2.0;

// 1 - cos(t) without cancellation at small t.
inline double one_minus_cos(double t) {
    double s = std::sin(0.5 * t);
    return 2.0 * s * s;
}
}  // namespace

KernelSpec KernelSpec::maxwell(double nu) {
    KernelSpec s{KernelFamily::maxwell, 0.0, nu};
    s.validate();
    return s;
}

KernelSpec KernelSpec::hard_potential(double gamma, double nu) {
    KernelSpec s{KernelFamily::hard_potential, gamma, nu};
    s.validate();
    return s;
}

KernelSpec KernelSpec::hard_sphere() { return {KernelFamily::hard_sphere, 1.0, 0.0}; }

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::maxwell:
            if (gamma != 0.0) throw input_error("maxwell kernel requires gamma = 0");
            break;
        case KernelFamily::hard_potential:
            if (!(gamma > 0.0 && gamma < 1.0))
                throw input_error("hard potential requires gamma in (0,1)");
            break;
        case KernelFamily::hard_sphere:
            if (gamma != 1.0) throw input_error("hard sphere requires gamma = 1");
            return;  // nu unused
    }
    if (!(nu > 0.0 && nu < 1.0)) throw input_error("angular exponent nu must be in (0,1)");
}

std::string KernelSpec::name() const {
    switch (family) {
        case KernelFamily::maxwell: return "maxwell";
        case KernelFamily::hard_potential: return "hard_potential";
        case KernelFamily::hard_sphere: return "hard_sphere";
    }
    return "?";
}

CutoffParam::CutoffParam(double k_) : k(k_) {
    if (!(k >= 1.0)) throw input_error("cutoff parameter K must be >= 1");
}

Kernel::Kernel(KernelSpec spec) : spec_(spec) {
    spec_.validate();
    if (spec_.family != KernelFamily::hard_sphere) {
        edge_intensity_ = std::pow(kHalfPi, -spec_.nu);
        inv_nu_ = 1.0 / spec_.nu;
    }
}

double Kernel::angular_intensity(double theta) const {
    if (!(theta > 0.0 && theta < kHalfPi))
        throw input_error("angular_intensity: theta outside (0, pi/2)");
    if (spec_.family == KernelFamily::hard_sphere) return 1.0;
    return std::pow(theta, -1.0 - spec_.nu);
}

double Kernel::intensity_above(double theta) const {
    if (!(theta > 0.0 && theta <= kHalfPi))
        throw input_error("intensity_above: theta outside (0, pi/2]");
    if (spec_.family == KernelFamily::hard_sphere) return kHalfPi - theta;
    return (std::pow(theta, -spec_.nu) - edge_intensity_) / spec_.nu;
}

double Kernel::angle_of_intensity(double z) const {
    if (!(z >= 0.0)) throw input_error("angle_of_intensity: z must be >= 0");
    if (spec_.family == KernelFamily::hard_sphere) return std::max(kHalfPi - z, 0.0);
    double u = spec_.nu * z + edge_intensity_;
    if (inv_nu_ == 2.0) return 1.0 / (u * u);
    return std::pow(u, -inv_nu_);
}

double Kernel::speed_pow_gamma(double x) const {
    if (spec_.gamma == 0.0) return 1.0;
    if (spec_.gamma == 1.0) return x;
    return std::pow(x, spec_.gamma);
}

double Kernel::deflection_integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    if (spec_.family == KernelFamily::hard_sphere)
        return (hi - std::sin(hi)) - (lo - std::sin(lo));
    double nu = spec_.nu;
    auto f = [nu](double t) { return one_minus_cos(t) * std::pow(t, -1.0 - nu); };
    // Integrand ~ t^(1-nu)/2 near 0: finite value, singular derivative.
    QuadResult q = (lo == 0.0) ? integrate_singular(f, lo, hi) : integrate(f, lo, hi);
    return q.value;
}

double Kernel::transfer_below(double x, double k) const {
    if (!(x >= 0.0)) throw input_error("transfer_below: x must be >= 0");
    if (!(k >= 1.0)) throw input_error("transfer_below: K must be >= 1");
    double xg = speed_pow_gamma(x);
    if (xg == 0.0) return 0.0;
    double theta_cut = angle_of_intensity(k / xg);
    return M_PI * xg * deflection_integral(theta_cut, kHalfPi);
}

double Kernel::transfer_above(double x, double k) const {
    if (!(x >= 0.0)) throw input_error("transfer_above: x must be >= 0");
    if (!(k >= 1.0)) throw input_error("transfer_above: K must be >= 1");
    double xg = speed_pow_gamma(x);
    if (xg == 0.0) return 0.0;
    double theta_cut = angle_of_intensity(k / xg);
    return M_PI * xg * deflection_integral(0.0, theta_cut);
}

double Kernel::transfer_total(double x) const {
    double xg = speed_pow_gamma(x);
    if (xg == 0.0) return 0.0;
    return M_PI * xg * deflection_integral(0.0, kHalfPi);
}

}  // namespace nanboltz

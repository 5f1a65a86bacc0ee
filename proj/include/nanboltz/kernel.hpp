#pragma once

#include <string>

#include "nanboltz/quadrature.hpp"

namespace nanboltz {

enum class KernelFamily { maxwell, hard_potential, hard_sphere };

/// Which collision kernel to use. gamma is the relative-speed exponent, nu the
/// angular singularity exponent of the power-law angular part. Hard spheres
/// use a flat angular part on (0, pi/2) instead and ignore nu.
struct KernelSpec {
    KernelFamily family = KernelFamily::maxwell;
    double gamma = 0.0;
    double nu = 0.5;

    static KernelSpec maxwell(double nu = 0.5);
    static KernelSpec hard_potential(double gamma, double nu);
    static KernelSpec hard_sphere();

    /// Throws input_error unless (family, gamma, nu) is a supported combination:
    /// maxwell => gamma == 0, hard_sphere => gamma == 1, hard_potential =>
    /// gamma in (0,1); nu in (0,1) for the power-law families.
    void validate() const;

    std::string name() const;
};

/// Cutoff level of the intensity coordinate; the model requires K >= 1.
struct CutoffParam {
    explicit CutoffParam(double k);
    double k;
};

/// Collision kernel with its derived angular integrals. All methods are pure;
/// a const Kernel may be shared across threads freely.
class Kernel {
public:
    explicit Kernel(KernelSpec spec);

    const KernelSpec& spec() const { return spec_; }
    KernelFamily family() const { return spec_.family; }
    double gamma() const { return spec_.gamma; }
    double nu() const { return spec_.nu; }

    /// Angular part beta(theta) on (0, pi/2).
    double angular_intensity(double theta) const;

    /// Cumulative intensity of deviation angles >= theta:
    /// integral of beta over [theta, pi/2]. Domain (0, pi/2].
    double intensity_above(double theta) const;

    /// Inverse of intensity_above, extended by 0 past the endpoint for hard
    /// spheres; maps [0, inf) onto (0, pi/2] (or [0, pi/2] for hard spheres).
    double angle_of_intensity(double z) const;

    /// |v - v*|^gamma with exact fast paths for gamma in {0, 1}.
    double speed_pow_gamma(double x) const;

    /// pi * integral over z in [0, K] of (1 - cos angle_of_intensity(z / x^gamma)).
    /// Weights the mean squared deviation of the cutoff collision at relative
    /// speed x. Zero at x = 0 when gamma > 0.
    double transfer_below(double x, double k) const;

    /// Same integrand over z in (K, inf); the part removed by the cutoff.
    double transfer_above(double x, double k) const;

    /// transfer_below + transfer_above (finite for all supported kernels).
    double transfer_total(double x) const;

private:
    /// integral over [lo, hi] of (1 - cos t) * beta(t) dt, 0 <= lo <= hi <= pi/2.
    double deflection_integral(double lo, double hi) const;

    KernelSpec spec_;
    double edge_intensity_ = 0.0;  // (pi/2)^(-nu), power-law families
    double inv_nu_ = 0.0;
};

}  // namespace nanboltz

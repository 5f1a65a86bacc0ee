#pragma once

#include <utility>

#include "nanboltz/kernel.hpp"
#include "nanboltz/vec3.hpp"

namespace nanboltz {

/// Orthogonal pair completing X to a (right-handed) basis, both scaled to |X|:
/// i . X = j . X = i . j = 0, |i| = |j| = |X|, and (X, i, j)/|X| is direct.
struct Frame {
    Vec3 i, j;
};

/// Deterministic frame construction; stable away from X = 0.
/// Throws input_error for X = 0 (callers guarantee the kick vanishes there).
Frame frame_of(const Vec3& x);

/// Point of the circle of radius |X| orthogonal to X at azimuth phi:
/// cos(phi) i + sin(phi) j.
Vec3 circle_vector(const Vec3& x, double phi);
Vec3 circle_vector(const Frame& f, double phi);

/// Velocity change of v when colliding with v_star at deviation angle theta
/// and azimuth phi: -(1-cos theta)/2 (v - v_star) + (sin theta)/2 * circle.
/// Zero when v == v_star or theta == 0.
Vec3 kick_from_angle(const Vec3& v, const Vec3& v_star, double theta, double phi);

/// Same kick with the deviation angle drawn from the intensity coordinate:
/// theta = angle_of_intensity(z / |v - v_star|^gamma).
Vec3 collision_kick(const Vec3& v, const Vec3& v_star, double z, double phi,
                    const Kernel& kernel);

/// collision_kick gated by z <= K (boundary included).
Vec3 collision_kick_cutoff(const Vec3& v, const Vec3& v_star, double z, double phi,
                           double k, const Kernel& kernel);

/// Post-collision pair. Conserves momentum exactly as computed and kinetic
/// energy up to roundoff.
std::pair<Vec3, Vec3> collide(const Vec3& v, const Vec3& v_star, double theta, double phi);

/// Azimuthal offsets aligning the circles of X and Y so that for every phi
///   circle(X, phi) . circle(Y, phi + phi0)
///     = X.Y cos^2(phi + phi1) + |X||Y| sin^2(phi + phi1)
/// and |circle(X, phi) - circle(Y, phi + phi0)| <= |X - Y|.
struct FrameAlignment {
    double phi0 = 0.0, phi1 = 0.0;
};

/// Total: collinear or zero inputs take the degenerate branch phi0 = phi1 = 0,
/// where both identities hold by construction of frame_of.
FrameAlignment align_circles(const Vec3& x, const Vec3& y);

}  // namespace nanboltz

#include "nanboltz/geometry.hpp"

#include <cmath>

#include "nanboltz/errors.hpp"

namespace nanboltz {

Frame frame_of(const Vec3& x) {
    double n = norm(x);
    if (n == 0.0) throw input_error("frame_of: zero vector has no frame");
    // Cross with the canonical axis least aligned with x.
    double ax = std::fabs(x.x), ay = std::fabs(x.y), az = std::fabs(x.z);
    Vec3 e = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    Vec3 c = cross(x, e);
    Vec3 i = (n / norm(c)) * c;
    Vec3 j = (1.0 / n) * cross(x, i);
    return {i, j};
}

Vec3 circle_vector(const Vec3& x, double phi) { return circle_vector(frame_of(x), phi); }

Vec3 circle_vector(const Frame& f, double phi) {
    return std::cos(phi) * f.i + std::sin(phi) * f.j;
}

Vec3 kick_from_angle(const Vec3& v, const Vec3& v_star, double theta, double phi) {
    Vec3 rel = v - v_star;
    if (theta == 0.0 || norm_sq(rel) == 0.0) return {};
    double s = std::sin(0.5 * theta);
    double one_minus_cos = 2.0 * s * s;
    return -0.5 * one_minus_cos * rel + 0.5 * std::sin(theta) * circle_vector(rel, phi);
}

Vec3 collision_kick(const Vec3& v, const Vec3& v_star, double z, double phi,
                    const Kernel& kernel) {
    Vec3 rel = v - v_star;
    double x = norm(rel);
    if (x == 0.0) return {};
    double theta = kernel.angle_of_intensity(z / kernel.speed_pow_gamma(x));
    return kick_from_angle(v, v_star, theta, phi);
}

Vec3 collision_kick_cutoff(const Vec3& v, const Vec3& v_star, double z, double phi,
                           double k, const Kernel& kernel) {
    if (z > k) return {};
    return collision_kick(v, v_star, z, phi, kernel);
}

std::pair<Vec3, Vec3> collide(const Vec3& v, const Vec3& v_star, double theta, double phi) {
    Vec3 a = kick_from_angle(v, v_star, theta, phi);
    return {v + a, v_star - a};
}

FrameAlignment align_circles(const Vec3& x, const Vec3& y) {
    double nx = norm(x), ny = norm(y);
    if (nx == 0.0 || ny == 0.0) return {};
    Vec3 c = cross(x, y);
    double nc = norm(c);
    if (nc <= 1e-12 * nx * ny) return {};  // collinear: frames already aligned

    // Common circle point shared by both planes: j_X = |X| n, j_Y = |Y| n with
    // n normal to span(X, Y); then i = j x unit vector rotates a quarter turn
    // back along each circle, which pins the azimuths of both frames.
    Vec3 n = (1.0 / nc) * c;
    Vec3 i_x = cross(nx * n, (1.0 / nx) * x);
    Vec3 i_y = cross(ny * n, (1.0 / ny) * y);

    Frame fx = frame_of(x);
    Frame fy = frame_of(y);
    double phi_x = std::atan2(dot(i_x, fx.j), dot(i_x, fx.i));
    double phi_y = std::atan2(dot(i_y, fy.j), dot(i_y, fy.i));

    double two_pi = 2.0 * M_PI;
    double phi0 = std::fmod(phi_y - phi_x + two_pi, two_pi);
    double phi1 = std::fmod(-phi_x + two_pi, two_pi);
    return {phi0, phi1};
}

}  // namespace nanboltz

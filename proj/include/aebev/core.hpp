#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

// Shared primitives: planar vectors, angle wrapping, error types.
//
// Coordinate convention used throughout: axis 0 ("x") points ego-forward,
// axis 1 ("y") points ego-left. Angles are measured from the forward axis,
// increasing toward the left (counter-clockwise), range (-pi, pi].

namespace aebev {

inline constexpr double kPi = 3.14159265358979323846;

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid shapes, constants, keys, or incompatible arguments.
struct config_error : error {
    explicit config_error(const std::string& msg) : error(msg) {}
};

// Malformed files (binary tensors, rig files, CSV).
struct format_error : error {
    explicit format_error(const std::string& msg) : error(msg) {}
};

// Depth mapping that would read outside the virtual score range.
struct coverage_error : config_error {
    explicit coverage_error(const std::string& msg) : config_error(msg) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }

    // 90-degree counter-clockwise turn.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

// Counter-clockwise rotation by `angle` radians.
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double theta) {
    double r = std::fmod(theta + kPi, 2.0 * kPi);
    if (r <= 0.0) r += 2.0 * kPi;
    return r - kPi;
}

// Absolute angular distance after wrapping; the right metric near the seam.
inline double angle_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

namespace detail {

// splitmix64 step; derives well-separated sub-seeds from one base seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t tag) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

}  // namespace aebev

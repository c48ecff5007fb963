#pragma once

#include "aebev/core.hpp"
#include "aebev/geometry.hpp"

// Anchor target codec. Ground-truth box kinematics are encoded as residuals
// against an anchor whose orientation equals the local azimuth; center offset
// and velocity are projected onto the anchor's radial/tangential basis, so a
// box seen at a different azimuth (rotated about the rig center) produces the
// same residuals. decode is the exact inverse.

namespace aebev {

struct BoxState {
    Vec2 center;           // meters, ego frame
    double z = 0.0;        // meters
    double length = 0.0;   // along orientation
    double width = 0.0;
    double height = 0.0;
    double theta = 0.0;    // orientation, radians in (-pi, pi]
    Vec2 velocity;         // meters/second, ego frame
};

struct AzimuthAnchor {
    Vec2 location;         // meters, ego frame
    double z = 0.0;
    double length = 0.0;   // implicit-anchor mode: all sizes zero
    double width = 0.0;
    double height = 0.0;
    double azimuth = 0.0;  // anchor orientation
    Vec2 e_r{1.0, 0.0};
    Vec2 e_o{0.0, 1.0};
};

struct ResidualState {
    double d_r = 0.0;      // center offset along e_r, meters
    double d_o = 0.0;      // center offset along e_o
    double d_z = 0.0;
    double d_l = 0.0;      // plain size differences
    double d_w = 0.0;
    double d_h = 0.0;
    double d_theta = 0.0;  // orientation relative to the azimuth, (-pi, pi]
    double v_r = 0.0;      // velocity along e_r
    double v_o = 0.0;      // velocity along e_o
};

// Implicit (zero-size) anchor at `location`, oriented along the azimuth
// relative to `center`.
inline AzimuthAnchor anchor_at(Vec2 location, Vec2 center) {
    const RadialBasis b = radial_basis_at(location, center);
    AzimuthAnchor a;
    a.location = location;
    a.azimuth = b.azimuth;
    a.e_r = b.e_r;
    a.e_o = b.e_o;
    return a;
}

// Anchor at a grid cell, basis taken from the field so the codec and the
// convolution agree on directions cell-for-cell.
inline AzimuthAnchor anchor_from_field(const RadialBasisField& field, const GridSpec& grid, int i, int j) {
    const RadialBasis b = field.at(i, j);
    AzimuthAnchor a;
    a.location = grid.cell_center(i, j);
    a.azimuth = b.azimuth;
    a.e_r = b.e_r;
    a.e_o = b.e_o;
    return a;
}

inline ResidualState encode(const BoxState& box, const AzimuthAnchor& anchor) {
    const Vec2 d = box.center - anchor.location;
    ResidualState r;
    r.d_r = anchor.e_r.dot(d);
    r.d_o = anchor.e_o.dot(d);
    r.d_z = box.z - anchor.z;
    r.d_l = box.length - anchor.length;
    r.d_w = box.width - anchor.width;
    r.d_h = box.height - anchor.height;
    r.d_theta = wrap_angle(box.theta - anchor.azimuth);
    r.v_r = anchor.e_r.dot(box.velocity);
    r.v_o = anchor.e_o.dot(box.velocity);
    return r;
}

inline BoxState decode(const ResidualState& r, const AzimuthAnchor& anchor) {
    BoxState b;
    b.center = anchor.location + r.d_r * anchor.e_r + r.d_o * anchor.e_o;
    b.z = anchor.z + r.d_z;
    b.length = anchor.length + r.d_l;
    b.width = anchor.width + r.d_w;
    b.height = anchor.height + r.d_h;
    b.theta = wrap_angle(anchor.azimuth + r.d_theta);
    b.velocity = r.v_r * anchor.e_r + r.v_o * anchor.e_o;
    return b;
}

// Analytic rotation of a box about `center`: position orbits, orientation and
// velocity turn with it, size and z are unchanged. No resampling involved.
inline BoxState rotate_box(const BoxState& box, double angle, Vec2 center) {
    BoxState b = box;
    b.center = center + rotate(box.center - center, angle);
    b.theta = wrap_angle(box.theta + angle);
    b.velocity = rotate(box.velocity, angle);
    return b;
}

}  // namespace aebev

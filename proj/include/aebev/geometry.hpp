#pragma once

#include <string>
#include <vector>

#include "aebev/core.hpp"

// Camera rig model, the azimuth system, and the per-cell radial/tangential
// basis field. Every angular convention in the project is localized here:
// azimuth is measured from ego-forward, increasing toward ego-left, and the
// basis at a point is e_r = unit(point - center), e_o = e_r turned 90 degrees
// counter-clockwise. All rotated-grid and residual math elsewhere is written
// as projections onto / out of this basis.

namespace aebev {

struct Camera {
    std::string name;
    double x = 0.0;   // meters, ego-forward
    double y = 0.0;   // meters, ego-left
    double yaw = 0.0; // radians
    double fx = 0.0;  // pixels
    double fy = 0.0;  // pixels
};

struct CameraRig {
    std::vector<Camera> cameras;
};

inline void validate(const CameraRig& rig) {
    if (rig.cameras.empty()) throw config_error("camera rig is empty");
    for (const Camera& c : rig.cameras) {
        if (!(c.fx > 0.0) || !(c.fy > 0.0))
            throw config_error("camera '" + c.name + "': focal lengths must be positive");
    }
}

// Shared azimuth origin for all views: the mean of the camera positions.
inline Vec2 rig_center(const CameraRig& rig) {
    validate(rig);
    Vec2 sum{0.0, 0.0};
    for (const Camera& c : rig.cameras) sum = sum + Vec2{c.x, c.y};
    return sum * (1.0 / static_cast<double>(rig.cameras.size()));
}

struct GridSpec {
    int height = 0;        // cells along ego-forward
    int width = 0;         // cells along ego-left
    double resolution = 0; // meters per cell
    Vec2 origin;           // ego coordinate of cell (0,0) center

    GridSpec() = default;
    GridSpec(int h, int w, double res, Vec2 org) : height(h), width(w), resolution(res), origin(org) {
        if (h <= 0 || w <= 0) throw config_error("GridSpec: non-positive size");
        if (!(res > 0.0)) throw config_error("GridSpec: resolution must be positive");
    }

    Vec2 cell_center(int i, int j) const {
        return {origin.x + i * resolution, origin.y + j * resolution};
    }

    // Continuous cell coordinates of an ego-frame point.
    Vec2 to_cell(Vec2 p) const {
        return {(p.x - origin.x) / resolution, (p.y - origin.y) / resolution};
    }

    // Grid centered on the ego origin; odd sizes put a cell exactly at (0,0).
    static GridSpec centered(int h, int w, double res) {
        return GridSpec(h, w, res, Vec2{-0.5 * (h - 1) * res, -0.5 * (w - 1) * res});
    }
};

// Angle of (point - center) from the ego-forward axis, in (-pi, pi].
// The degenerate point == center maps to 0 (atan2 convention), matching the
// fixed basis assigned to the center cell below.
inline double azimuth_of(Vec2 point, Vec2 center) {
    const Vec2 d = point - center;
    return std::atan2(d.y, d.x);
}

struct RadialBasis {
    double azimuth = 0.0;
    Vec2 e_r{1.0, 0.0};
    Vec2 e_o{0.0, 1.0};
};

// Basis at an arbitrary point. Points closer to the center than 1e-9 m are
// treated as degenerate and get the ego axes.
inline RadialBasis radial_basis_at(Vec2 point, Vec2 center) {
    const Vec2 d = point - center;
    const double r = d.norm();
    if (r < 1e-9) return RadialBasis{};
    RadialBasis b;
    b.azimuth = std::atan2(d.y, d.x);
    b.e_r = d * (1.0 / r);
    b.e_o = b.e_r.perp();
    return b;
}

struct RadialBasisField {
    int height = 0;
    int width = 0;
    Vec2 center_cell;            // azimuth center in continuous cell coordinates
    int degenerate_cell = -1;    // flattened index of the cell at the center, if any
    std::vector<double> azimuth; // per cell
    std::vector<Vec2> e_r;
    std::vector<Vec2> e_o;

    size_t index(int i, int j) const { return static_cast<size_t>(i) * width + j; }
    RadialBasis at(int i, int j) const {
        const size_t n = index(i, j);
        return RadialBasis{azimuth[n], e_r[n], e_o[n]};
    }
};

inline RadialBasisField radial_basis_field(const GridSpec& grid, Vec2 center) {
    RadialBasisField f;
    f.height = grid.height;
    f.width = grid.width;
    f.center_cell = grid.to_cell(center);
    const size_t n = static_cast<size_t>(grid.height) * grid.width;
    f.azimuth.resize(n);
    f.e_r.resize(n);
    f.e_o.resize(n);
    for (int i = 0; i < grid.height; ++i) {
        for (int j = 0; j < grid.width; ++j) {
            const Vec2 p = grid.cell_center(i, j);
            const RadialBasis b = radial_basis_at(p, center);
            const size_t idx = f.index(i, j);
            if ((p - center).norm() < 1e-9) f.degenerate_cell = static_cast<int>(idx);
            f.azimuth[idx] = b.azimuth;
            f.e_r[idx] = b.e_r;
            f.e_o[idx] = b.e_o;
        }
    }
    return f;
}

// Field with azimuth 0 and ego axes everywhere; under it the rotated sampling
// grid is the regular one, so AeConv must reproduce the standard convolution.
inline RadialBasisField uniform_field(int height, int width) {
    RadialBasisField f;
    f.height = height;
    f.width = width;
    f.center_cell = Vec2{0.0, 0.0};
    const size_t n = static_cast<size_t>(height) * width;
    f.azimuth.assign(n, 0.0);
    f.e_r.assign(n, Vec2{1.0, 0.0});
    f.e_o.assign(n, Vec2{0.0, 1.0});
    return f;
}

}  // namespace aebev

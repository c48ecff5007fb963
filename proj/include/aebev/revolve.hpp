#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aebev/aeconv.hpp"
#include "aebev/geometry.hpp"
#include "aebev/tensor.hpp"

// Revolving harness: render a synthetic scene of Gaussian blobs placed in
// polar coordinates about the azimuth center, rotate the scene analytically
// (re-render at shifted azimuths, no resampling), and measure how well each
// operator commutes with the rotation. Analytic re-rendering keeps operator
// equivariance separate from interpolation error; the rotate_resample step on
// the operator output is the only resampling in the loop, and its residual on
// the raw scenes serves as the error baseline.

namespace aebev {

struct Blob {
    double range_m = 0.0;     // distance from the azimuth center
    double azimuth = 0.0;     // radians
    double amplitude = 1.0;
    double width_m = 1.0;     // Gaussian sigma
};

struct SyntheticScene {
    std::vector<Blob> blobs;
    GridSpec grid;
    Vec2 center;              // azimuth center, ego meters
    uint64_t seed = 0;

    // Blobs drawn inside the grid with moderate widths; deterministic per seed.
    static SyntheticScene random(const GridSpec& grid, Vec2 center, int blob_count, uint64_t seed) {
        SyntheticScene s;
        s.grid = grid;
        s.center = center;
        s.seed = seed;
        std::mt19937_64 rng(seed);
        const double extent = 0.5 * std::min(grid.height, grid.width) * grid.resolution;
        std::uniform_real_distribution<double> range(0.15 * extent, 0.6 * extent);
        std::uniform_real_distribution<double> az(-kPi, kPi);
        std::uniform_real_distribution<double> amp(0.5, 2.0);
        std::uniform_real_distribution<double> width(1.5 * grid.resolution, 2.5 * grid.resolution);
        for (int b = 0; b < blob_count; ++b) {
            s.blobs.push_back({range(rng), az(rng), amp(rng), width(rng)});
        }
        return s;
    }
};

inline FeatureMap synth_scene(const SyntheticScene& scene) {
    for (const Blob& b : scene.blobs) {
        if (!(b.width_m > 0.0)) throw config_error("synth_scene: blob width must be positive");
    }
    FeatureMap map(1, scene.grid.height, scene.grid.width);
    for (int i = 0; i < scene.grid.height; ++i) {
        for (int j = 0; j < scene.grid.width; ++j) {
            const Vec2 p = scene.grid.cell_center(i, j);
            double v = 0.0;
            for (const Blob& b : scene.blobs) {
                const Vec2 pos{scene.center.x + b.range_m * std::cos(b.azimuth),
                               scene.center.y + b.range_m * std::sin(b.azimuth)};
                const Vec2 d = p - pos;
                v += b.amplitude * std::exp(-(d.x * d.x + d.y * d.y) / (2.0 * b.width_m * b.width_m));
            }
            map.at(0, i, j) = v;
        }
    }
    return map;
}

// The analytically rotated scene: every blob orbits the center by `angle`.
inline SyntheticScene rotate_scene(const SyntheticScene& scene, double angle) {
    SyntheticScene s = scene;
    for (Blob& b : s.blobs) b.azimuth = wrap_angle(b.azimuth + angle);
    return s;
}

struct RevolveReport {
    double angle = 0.0;           // radians
    double aeconv_rel_l2 = 0.0;
    double standard_rel_l2 = 0.0;
    double max_abs_aeconv = 0.0;
    double max_abs_standard = 0.0;
    int interior_margin = 0;      // cells excluded per edge
};

// Interpolation-error floor: how far rotate_resample alone is from the
// analytic rotation on this scene.
inline double resample_baseline(const SyntheticScene& scene, double angle, int margin) {
    const FeatureMap original = synth_scene(scene);
    const FeatureMap revolved = synth_scene(rotate_scene(scene, angle));
    const RadialBasisField field = radial_basis_field(scene.grid, scene.center);
    const FeatureMap resampled = rotate_resample(original, angle, field.center_cell);
    return interior_rel_l2(revolved, resampled, margin, field.degenerate_cell);
}

// Random non-isotropic 3x3-style kernel with unit DC gain: zero-mean noise
// taps plus a unit center tap. Keeping the DC gain pinned keeps the output
// norm comparable to the input norm, so the relative commutation residual
// measures interpolation error rather than how close the tap sum is to zero.
inline Kernel random_revolve_kernel(int k, double noise, uint64_t seed) {
    Kernel ker = Kernel::random(1, 1, k, seed);
    const int taps = ker.taps();
    double mean = 0.0;
    for (int t = 0; t < taps; ++t) mean += ker.w(0, 0, t);
    mean /= taps;
    for (int t = 0; t < taps; ++t) ker.w(0, 0, t) = noise * (ker.w(0, 0, t) - mean);
    ker.w(0, 0, taps / 2) += 1.0;
    return ker;
}

// Applies the operator to the original and the revolved scene and compares
// the revolved output against the rotated original output, interior only.
// The degenerate center cell, if the grid has one, is excluded: its basis is
// pinned to the ego axes and cannot follow the rotation.
inline RevolveReport run_revolve(const SyntheticScene& scene, const Kernel& kernel, double angle) {
    if (!std::isfinite(angle)) throw config_error("run_revolve: non-finite angle");
    if (kernel.in_channels != 1) throw config_error("run_revolve: scenes are single-channel");

    RevolveReport rep;
    rep.angle = angle;
    rep.interior_margin = (kernel.k - 1) / 2 + 1;

    const FeatureMap original = synth_scene(scene);
    const FeatureMap revolved = synth_scene(rotate_scene(scene, angle));
    const RadialBasisField field = radial_basis_field(scene.grid, scene.center);
    const GatherPlan plan = build_gather_plan(field, kernel.k, scene.grid);
    const int skip = field.degenerate_cell;

    const FeatureMap ae_orig = aeconv_forward_planned(original, kernel, plan);
    const FeatureMap ae_rev = aeconv_forward_planned(revolved, kernel, plan);
    const FeatureMap ae_ref = rotate_resample(ae_orig, angle, field.center_cell);
    rep.aeconv_rel_l2 = interior_rel_l2(ae_rev, ae_ref, rep.interior_margin, skip);
    rep.max_abs_aeconv = interior_max_abs(ae_rev, ae_ref, rep.interior_margin, skip);

    const FeatureMap st_orig = standard_conv(original, kernel);
    const FeatureMap st_rev = standard_conv(revolved, kernel);
    const FeatureMap st_ref = rotate_resample(st_orig, angle, field.center_cell);
    rep.standard_rel_l2 = interior_rel_l2(st_rev, st_ref, rep.interior_margin, skip);
    rep.max_abs_standard = interior_max_abs(st_rev, st_ref, rep.interior_margin, skip);

    return rep;
}

}  // namespace aebev

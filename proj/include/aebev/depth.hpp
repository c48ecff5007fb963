#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "aebev/core.hpp"

// Camera-decoupled virtual depth. Depth scores are predicted over M virtual
// bins spanning [0, d_v] under a shared virtual focal length f_v; per camera,
// the virtual bin size rescales by f_r / f_v and the scores are re-read onto
// a fixed bin layout by linear interpolation. Virtual score j is located at
// real depth j * real_bin_size (bin-grid coordinates).

namespace aebev {

struct VirtualDepthSpec {
    int bins = 180;              // M
    double range_m = 54.0;       // d_v
    double focal_px = 800.0;     // f_v

    void validate() const {
        if (bins < 1) throw config_error("VirtualDepthSpec: bin count must be >= 1");
        if (!(range_m > 0.0)) throw config_error("VirtualDepthSpec: range must be positive");
        if (!(focal_px > 0.0)) throw config_error("VirtualDepthSpec: focal length must be positive");
    }

    double bin_size() const { return range_m / bins; }
};

struct FixedDepthSpec {
    double min_m = 2.0;          // d_f1
    double max_m = 54.0;         // d_f2
    double bin_size_m = 0.5;     // (max_m - min_m) / bins
    int bins = 0;                // N, derived

    FixedDepthSpec() { derive(); }
    FixedDepthSpec(double lo, double hi, double step) : min_m(lo), max_m(hi), bin_size_m(step) { derive(); }

    void derive() {
        if (!(min_m < max_m)) throw config_error("FixedDepthSpec: range ends must satisfy min < max");
        if (!(bin_size_m > 0.0)) throw config_error("FixedDepthSpec: bin size must be positive");
        const double q = (max_m - min_m) / bin_size_m;
        const double rq = std::round(q);
        if (std::abs(q - rq) > 1e-9 || rq < 1.0)
            throw config_error("FixedDepthSpec: bin size must divide the range exactly");
        bins = static_cast<int>(rq);
    }
};

// RMS of the two focal lengths; the single per-camera scale for depth mapping.
inline double real_focal(double fx, double fy) {
    if (!(fx > 0.0) || !(fy > 0.0)) throw config_error("real_focal: focal lengths must be positive");
    return std::sqrt((fx * fx + fy * fy) / 2.0);
}

// Real-world size of one virtual bin for a camera with RMS focal f_r.
// f_r below f_v would shrink the mapped range below the virtual one and the
// fixed range could no longer be covered, so it is rejected outright.
inline double real_bin_size(const VirtualDepthSpec& vspec, double f_r) {
    vspec.validate();
    if (!(f_r > 0.0)) throw config_error("real_bin_size: focal length must be positive");
    if (f_r < vspec.focal_px)
        throw coverage_error("real_bin_size: camera focal " + std::to_string(f_r) +
                             " px is below the virtual focal " + std::to_string(vspec.focal_px) +
                             " px; mapped depth range would not cover the fixed range");
    return (f_r / vspec.focal_px) * vspec.bin_size();
}

// Re-reads virtual scores onto the fixed bin layout:
//   s_f[i] = s_v[(d_f1 + i * bin_size_f) / bin_size_r]
// with the fractional index interpolated linearly between neighboring bins.
// Queries that would read outside [0, M-1] are coverage errors, never clamped.
inline std::vector<double> map_scores(const std::vector<double>& s_v, const VirtualDepthSpec& vspec,
                                      const FixedDepthSpec& fspec, double real_bin_size_m) {
    vspec.validate();
    if (static_cast<int>(s_v.size()) != vspec.bins)
        throw config_error("map_scores: got " + std::to_string(s_v.size()) + " scores for " +
                           std::to_string(vspec.bins) + " virtual bins");
    if (!(real_bin_size_m > 0.0)) throw config_error("map_scores: real bin size must be positive");
    if (vspec.bins * real_bin_size_m < fspec.max_m * (1.0 - 1e-9))
        throw coverage_error("map_scores: mapped depth range " +
                             std::to_string(vspec.bins * real_bin_size_m) +
                             " m does not cover the fixed range top " + std::to_string(fspec.max_m) + " m");

    std::vector<double> s_f(fspec.bins);
    const double top = static_cast<double>(vspec.bins - 1);
    for (int i = 0; i < fspec.bins; ++i) {
        double u = (fspec.min_m + i * fspec.bin_size_m) / real_bin_size_m;
        if (u < 0.0 || u > top + 1e-9)
            throw coverage_error("map_scores: fixed bin " + std::to_string(i) +
                                 " reads virtual index " + std::to_string(u) + " outside [0, " +
                                 std::to_string(vspec.bins - 1) + "]");
        if (u > top) u = top;
        const double uf = std::floor(u);
        const int j = static_cast<int>(uf);
        const double frac = u - uf;
        s_f[i] = frac == 0.0 ? s_v[j] : (1.0 - frac) * s_v[j] + frac * s_v[j + 1];
    }
    return s_f;
}

inline std::vector<double> bin_centers(const VirtualDepthSpec& spec) {
    spec.validate();
    std::vector<double> c(spec.bins);
    for (int j = 0; j < spec.bins; ++j) c[j] = (j + 0.5) * spec.bin_size();
    return c;
}

inline std::vector<double> bin_centers(const FixedDepthSpec& spec) {
    std::vector<double> c(spec.bins);
    for (int i = 0; i < spec.bins; ++i) c[i] = spec.min_m + (i + 0.5) * spec.bin_size_m;
    return c;
}

}  // namespace aebev

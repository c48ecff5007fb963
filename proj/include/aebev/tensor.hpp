#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "aebev/core.hpp"

// Dense feature-map storage, bilinear sampling and rotation resampling.
// All computation is in 64-bit floats; layout is row-major per channel,
// channel outermost. Spatial positions are continuous (row, col) cell
// coordinates; anything outside [0,H-1]x[0,W-1] reads as zero.

namespace aebev {

struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // size channels*height*width

    FeatureMap() = default;
    FeatureMap(int c, int h, int w) : channels(c), height(h), width(w) {
        if (c <= 0 || h <= 0 || w <= 0) throw config_error("FeatureMap: non-positive shape");
        data.assign(static_cast<size_t>(c) * h * w, 0.0);
    }

    double& at(int c, int i, int j) { return data[(static_cast<size_t>(c) * height + i) * width + j]; }
    double at(int c, int i, int j) const { return data[(static_cast<size_t>(c) * height + i) * width + j]; }

    const double* channel(int c) const { return data.data() + static_cast<size_t>(c) * height * width; }
    double* channel(int c) { return data.data() + static_cast<size_t>(c) * height * width; }

    size_t cells() const { return static_cast<size_t>(height) * width; }

    bool same_shape(const FeatureMap& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }

    static FeatureMap random(int c, int h, int w, uint64_t seed) {
        FeatureMap m(c, h, w);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& v : m.data) v = dist(rng);
        return m;
    }
};

// k x k convolution kernel over the centered integer offset grid
// {-(k-1)/2 .. (k-1)/2}^2, taps ordered row-major: (-1,-1), (-1,0), ...,
// (0,1), (1,1) for k=3. Weight w(oc,ic,tap) stays attached to its canonical
// offset; only the sampling position moves when the grid is rotated.
struct Kernel {
    int out_channels = 0;
    int in_channels = 0;
    int k = 0;
    std::vector<double> weights;  // size out*in*k*k, tap fastest

    Kernel() = default;
    Kernel(int oc, int ic, int kk) : out_channels(oc), in_channels(ic), k(kk) {
        if (oc <= 0 || ic <= 0) throw config_error("Kernel: non-positive channel count");
        if (kk <= 0 || kk % 2 == 0) throw config_error("Kernel: extent must be odd and positive");
        weights.assign(static_cast<size_t>(oc) * ic * kk * kk, 0.0);
    }

    int taps() const { return k * k; }

    // Canonical planar offset of a tap, in cell units. x = row axis (forward).
    Vec2 offset(int tap) const {
        const int h = (k - 1) / 2;
        return {static_cast<double>(tap / k - h), static_cast<double>(tap % k - h)};
    }

    double& w(int oc, int ic, int tap) {
        return weights[(static_cast<size_t>(oc) * in_channels + ic) * taps() + tap];
    }
    double w(int oc, int ic, int tap) const {
        return weights[(static_cast<size_t>(oc) * in_channels + ic) * taps() + tap];
    }

    static Kernel random(int oc, int ic, int kk, uint64_t seed) {
        Kernel ker(oc, ic, kk);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& v : ker.weights) v = dist(rng);
        return ker;
    }

    // 1x1 kernel passing each channel through unchanged.
    static Kernel identity(int c) {
        Kernel ker(c, c, 1);
        for (int i = 0; i < c; ++i) ker.w(i, i, 0) = 1.0;
        return ker;
    }
};

// Four (flattened cell index, weight) pairs describing one bilinear read.
// Out-of-map corners carry weight zero so applying the stencil implements
// zero padding. The gather plan stores these verbatim, which keeps the
// planned convolution path numerically identical to direct sampling.
struct BilinearStencil {
    int32_t idx[4] = {0, 0, 0, 0};
    double w[4] = {0.0, 0.0, 0.0, 0.0};
};

inline BilinearStencil make_stencil(int height, int width, double r, double c) {
    BilinearStencil st;
    if (!(r > -1.0) || !(c > -1.0) || !(r < height) || !(c < width)) return st;
    const double rf = std::floor(r);
    const double cf = std::floor(c);
    const int r0 = static_cast<int>(rf);
    const int c0 = static_cast<int>(cf);
    const double fr = r - rf;
    const double fc = c - cf;
    const double wr[2] = {1.0 - fr, fr};
    const double wc[2] = {1.0 - fc, fc};
    int n = 0;
    for (int dr = 0; dr < 2; ++dr) {
        for (int dc = 0; dc < 2; ++dc, ++n) {
            const int rr = r0 + dr;
            const int cc = c0 + dc;
            if (rr >= 0 && rr < height && cc >= 0 && cc < width) {
                st.idx[n] = rr * width + cc;
                st.w[n] = wr[dr] * wc[dc];
            }
        }
    }
    return st;
}

inline double apply_stencil(const BilinearStencil& st, const double* plane) {
    return ((st.w[0] * plane[st.idx[0]] + st.w[1] * plane[st.idx[1]]) + st.w[2] * plane[st.idx[2]]) +
           st.w[3] * plane[st.idx[3]];
}

// Bilinear read of one channel at continuous position (pos.x = row, pos.y = col).
inline double bilinear_sample(const FeatureMap& map, int channel, Vec2 pos) {
    if (channel < 0 || channel >= map.channels) throw config_error("bilinear_sample: channel out of range");
    const BilinearStencil st = make_stencil(map.height, map.width, pos.x, pos.y);
    return apply_stencil(st, map.channel(channel));
}

// Rotates the map counter-clockwise by `angle` about `center` (cell
// coordinates): output(p) = input(rotate(p - center, -angle) + center).
// Cosine/sine values within an ulp of {0, +-1} are snapped so that multiples
// of 90 degrees resolve to exact cell permutations.
inline FeatureMap rotate_resample(const FeatureMap& map, double angle, Vec2 center) {
    if (!std::isfinite(angle)) throw config_error("rotate_resample: non-finite angle");
    double c = std::cos(angle);
    double s = std::sin(angle);
    auto snap = [](double v) {
        if (std::abs(v) < 1e-12) return 0.0;
        if (std::abs(v - 1.0) < 1e-12) return 1.0;
        if (std::abs(v + 1.0) < 1e-12) return -1.0;
        return v;
    };
    c = snap(c);
    s = snap(s);
    FeatureMap out(map.channels, map.height, map.width);
    for (int i = 0; i < map.height; ++i) {
        for (int j = 0; j < map.width; ++j) {
            const Vec2 d{static_cast<double>(i) - center.x, static_cast<double>(j) - center.y};
            // rotate(d, -angle) with the snapped entries
            const Vec2 src{c * d.x + s * d.y + center.x, -s * d.x + c * d.y + center.y};
            const BilinearStencil st = make_stencil(map.height, map.width, src.x, src.y);
            for (int ch = 0; ch < map.channels; ++ch) {
                out.at(ch, i, j) = apply_stencil(st, map.channel(ch));
            }
        }
    }
    return out;
}

// Plain convolution: same spatial size, stride 1, dilation 1, zero padding.
// Direct summation; the fixed sampling grid every optimized path is compared
// against.
inline FeatureMap standard_conv(const FeatureMap& map, const Kernel& kernel) {
    if (kernel.in_channels != map.channels)
        throw config_error("standard_conv: kernel expects " + std::to_string(kernel.in_channels) +
                           " channels, map has " + std::to_string(map.channels));
    const int h = map.height, w = map.width, k = kernel.k, half = (k - 1) / 2;
    FeatureMap out(kernel.out_channels, h, w);
    for (int oc = 0; oc < kernel.out_channels; ++oc) {
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
            const double* plane = map.channel(ic);
            for (int i = 0; i < h; ++i) {
                for (int j = 0; j < w; ++j) {
                    double acc = 0.0;
                    for (int t = 0; t < k * k; ++t) {
                        const int si = i + t / k - half;
                        const int sj = j + t % k - half;
                        if (si >= 0 && si < h && sj >= 0 && sj < w) {
                            acc += kernel.w(oc, ic, t) * plane[si * w + sj];
                        }
                    }
                    out.at(oc, i, j) += acc;
                }
            }
        }
    }
    return out;
}

inline double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
    if (!a.same_shape(b)) throw config_error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

// Relative L2 distance over an interior window, `margin` cells in from every
// edge. Used by the equivariance checks, where zero padding corrupts a ring
// of boundary cells. `skip_cell` (flattened spatial index, all channels)
// drops the degenerate azimuth-center cell, whose fixed basis cannot follow a
// rotation.
inline double interior_rel_l2(const FeatureMap& a, const FeatureMap& b, int margin, int skip_cell = -1) {
    if (!a.same_shape(b)) throw config_error("interior_rel_l2: shape mismatch");
    double num = 0.0, den = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        for (int i = margin; i < a.height - margin; ++i) {
            for (int j = margin; j < a.width - margin; ++j) {
                if (i * a.width + j == skip_cell) continue;
                const double d = a.at(c, i, j) - b.at(c, i, j);
                num += d * d;
                den += b.at(c, i, j) * b.at(c, i, j);
            }
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double interior_max_abs(const FeatureMap& a, const FeatureMap& b, int margin, int skip_cell = -1) {
    if (!a.same_shape(b)) throw config_error("interior_max_abs: shape mismatch");
    double m = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        for (int i = margin; i < a.height - margin; ++i) {
            for (int j = margin; j < a.width - margin; ++j) {
                if (i * a.width + j == skip_cell) continue;
                m = std::max(m, std::abs(a.at(c, i, j) - b.at(c, i, j)));
            }
        }
    }
    return m;
}

}  // namespace aebev

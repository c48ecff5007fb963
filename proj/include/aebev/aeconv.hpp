#pragma once

#include <vector>

#include "aebev/geometry.hpp"
#include "aebev/tensor.hpp"

// Azimuth-equivariant convolution. At each cell the regular sampling grid is
// rotated into the cell's radial frame: a canonical tap offset p = (px, py)
// samples at q + px*e_r + py*e_o, where (e_r, e_o) come from the radial basis
// field. Kernel weights stay attached to their canonical taps. Three paths:
//
//   aeconv_forward_naive    direct transcription, bilinear sample per tap per
//                           channel pair; the sequential oracle.
//   aeconv_forward_planned  executes a precomputed gather plan; the fast path.
//   aeconv_backward         exact adjoints of the planned linear operator.
//
// The plan depends only on (grid, field, kernel extent) -- never on feature
// values or weights -- so it is built once per grid and reused across calls.

namespace aebev {

struct GatherPlan {
    int height = 0;
    int width = 0;
    int kernel_extent = 0;
    // One stencil per (cell, tap), tap fastest: 4 source indices + 4 weights.
    std::vector<BilinearStencil> taps;

    size_t tap_count() const { return taps.size(); }
    int taps_per_cell() const { return kernel_extent * kernel_extent; }

    const BilinearStencil& at(int cell, int tap) const {
        return taps[static_cast<size_t>(cell) * taps_per_cell() + tap];
    }
};

namespace detail {

inline void require_field_shape(const RadialBasisField& field, const FeatureMap& map) {
    if (field.height != map.height || field.width != map.width)
        throw config_error("aeconv: field dims do not match map dims");
}

inline void require_plan_shape(const GatherPlan& plan, const FeatureMap& map, const Kernel& kernel) {
    if (plan.height != map.height || plan.width != map.width)
        throw config_error("aeconv: plan dims do not match map dims");
    if (plan.kernel_extent != kernel.k)
        throw config_error("aeconv: plan built for extent " + std::to_string(plan.kernel_extent) +
                           ", kernel has " + std::to_string(kernel.k));
    if (kernel.in_channels != map.channels)
        throw config_error("aeconv: kernel expects " + std::to_string(kernel.in_channels) +
                           " channels, map has " + std::to_string(map.channels));
}

}  // namespace detail

inline GatherPlan build_gather_plan(const RadialBasisField& field, int kernel_extent, const GridSpec& grid) {
    if (kernel_extent <= 0 || kernel_extent % 2 == 0)
        throw config_error("build_gather_plan: kernel extent must be odd and positive");
    if (grid.height != field.height || grid.width != field.width)
        throw config_error("build_gather_plan: grid dims do not match field dims");
    const int h = field.height, w = field.width, k = kernel_extent, half = (k - 1) / 2;
    GatherPlan plan;
    plan.height = h;
    plan.width = w;
    plan.kernel_extent = k;
    plan.taps.resize(static_cast<size_t>(h) * w * k * k);
    size_t n = 0;
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            const RadialBasis b = field.at(i, j);
            for (int t = 0; t < k * k; ++t, ++n) {
                const double px = t / k - half;
                const double py = t % k - half;
                const double r = i + px * b.e_r.x + py * b.e_o.x;
                const double c = j + px * b.e_r.y + py * b.e_o.y;
                plan.taps[n] = make_stencil(h, w, r, c);
            }
        }
    }
    return plan;
}

inline FeatureMap aeconv_forward_naive(const FeatureMap& map, const Kernel& kernel,
                                       const RadialBasisField& field) {
    detail::require_field_shape(field, map);
    if (kernel.in_channels != map.channels)
        throw config_error("aeconv: kernel expects " + std::to_string(kernel.in_channels) +
                           " channels, map has " + std::to_string(map.channels));
    const int h = map.height, w = map.width, k = kernel.k;
    FeatureMap out(kernel.out_channels, h, w);
    for (int oc = 0; oc < kernel.out_channels; ++oc) {
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
            for (int i = 0; i < h; ++i) {
                for (int j = 0; j < w; ++j) {
                    const RadialBasis b = field.at(i, j);
                    double acc = 0.0;
                    for (int t = 0; t < k * k; ++t) {
                        const Vec2 p = kernel.offset(t);
                        const Vec2 pos{i + p.x * b.e_r.x + p.y * b.e_o.x,
                                       j + p.x * b.e_r.y + p.y * b.e_o.y};
                        acc += kernel.w(oc, ic, t) * bilinear_sample(map, ic, pos);
                    }
                    out.at(oc, i, j) += acc;
                }
            }
        }
    }
    return out;
}

inline FeatureMap aeconv_forward_planned(const FeatureMap& map, const Kernel& kernel,
                                         const GatherPlan& plan) {
    detail::require_plan_shape(plan, map, kernel);
    const int h = map.height, w = map.width, k2 = plan.taps_per_cell();
    const int cells = h * w;
    FeatureMap out(kernel.out_channels, h, w);
    std::vector<double> sampled(k2);
    for (int ic = 0; ic < kernel.in_channels; ++ic) {
        const double* plane = map.channel(ic);
        const double* wbase = kernel.weights.data() + static_cast<size_t>(ic) * k2;
        const size_t ocstride = static_cast<size_t>(kernel.in_channels) * k2;
        for (int cell = 0; cell < cells; ++cell) {
            const BilinearStencil* st = &plan.taps[static_cast<size_t>(cell) * k2];
            for (int t = 0; t < k2; ++t) sampled[t] = apply_stencil(st[t], plane);
            for (int oc = 0; oc < kernel.out_channels; ++oc) {
                const double* wk = wbase + static_cast<size_t>(oc) * ocstride;
                double acc = 0.0;
                for (int t = 0; t < k2; ++t) acc += wk[t] * sampled[t];
                out.channel(oc)[cell] += acc;
            }
        }
    }
    return out;
}

struct AeConvGradients {
    FeatureMap input_grad;  // shaped like the forward input
    Kernel weight_grad;     // shaped like the kernel
};

// Exact adjoints of the forward linear map. For the scalar loss l with
// upstream u(oc,q) = dl/dy(oc,q):
//   dW(oc,ic,t) = sum_q u(oc,q) * s(ic,q,t)
//   dX(ic, src) = sum_{q,t,b} stencil_w(q,t,b) * sum_oc u(oc,q) * W(oc,ic,t)
// where s(ic,q,t) is the bilinearly sampled input at tap t of cell q.
inline AeConvGradients aeconv_backward(const FeatureMap& map, const Kernel& kernel,
                                       const GatherPlan& plan, const FeatureMap& upstream) {
    detail::require_plan_shape(plan, map, kernel);
    if (upstream.channels != kernel.out_channels || upstream.height != map.height ||
        upstream.width != map.width)
        throw config_error("aeconv_backward: upstream gradient shape mismatch");

    const int h = map.height, w = map.width, k2 = plan.taps_per_cell();
    const int cells = h * w;
    AeConvGradients g{FeatureMap(map.channels, h, w), Kernel(kernel.out_channels, kernel.in_channels, kernel.k)};

    std::vector<double> sampled(static_cast<size_t>(kernel.in_channels) * k2);
    for (int cell = 0; cell < cells; ++cell) {
        const BilinearStencil* st = &plan.taps[static_cast<size_t>(cell) * k2];
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
            const double* plane = map.channel(ic);
            for (int t = 0; t < k2; ++t) sampled[static_cast<size_t>(ic) * k2 + t] = apply_stencil(st[t], plane);
        }
        for (int oc = 0; oc < kernel.out_channels; ++oc) {
            const double u = upstream.channel(oc)[cell];
            if (u == 0.0) continue;
            for (int ic = 0; ic < kernel.in_channels; ++ic) {
                for (int t = 0; t < k2; ++t) {
                    g.weight_grad.w(oc, ic, t) += u * sampled[static_cast<size_t>(ic) * k2 + t];
                }
            }
        }
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
            double* gplane = g.input_grad.channel(ic);
            for (int t = 0; t < k2; ++t) {
                double gbar = 0.0;
                for (int oc = 0; oc < kernel.out_channels; ++oc) {
                    gbar += upstream.channel(oc)[cell] * kernel.w(oc, ic, t);
                }
                if (gbar == 0.0) continue;
                const BilinearStencil& s = st[t];
                for (int b = 0; b < 4; ++b) gplane[s.idx[b]] += s.w[b] * gbar;
            }
        }
    }
    return g;
}

}  // namespace aebev

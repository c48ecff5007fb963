#pragma once

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "aebev/aeconv.hpp"
#include "aebev/anchor.hpp"
#include "aebev/config.hpp"
#include "aebev/depth.hpp"
#include "aebev/revolve.hpp"

// The property suite behind `check` and the acceptance gate. Each criterion
// bundles named sub-checks with a measured value and its bound; failures are
// reported by name. Everything is deterministic given the config seed.

namespace aebev {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double bound = 0.0;
};

struct CriterionResult {
    int id = 0;
    std::string label;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

inline double rel_l2_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// Criterion 1: with a zero-azimuth field the rotated sampling grid is the
// regular one, so AeConv must reproduce the standard convolution exactly.
inline CriterionResult check_reduction(const RunConfig& cfg) {
    CriterionResult cr{1, "reduction: aeconv with zero azimuth equals standard conv", {}};
    const auto t0 = std::chrono::steady_clock::now();
    const RadialBasisField field = uniform_field(32, 32);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const FeatureMap map = FeatureMap::random(8, 32, 32, detail::mix_seed(cfg.seed, 100 + i));
        const Kernel ker = Kernel::random(8, 8, 3, detail::mix_seed(cfg.seed, 200 + i));
        worst = std::max(worst, max_abs_diff(aeconv_forward_naive(map, ker, field), standard_conv(map, ker)));
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cr.checks.push_back({"reduction_max_abs", worst <= cfg.tol_exact, worst, cfg.tol_exact});
    cr.checks.push_back({"reduction_runtime_s", elapsed < 5.0, elapsed, 5.0});
    return cr;
}

// Criterion 2: the gather plan reproduces the naive path on a radial field.
inline CriterionResult check_plan_equivalence(const RunConfig& cfg) {
    CriterionResult cr{2, "gather plan equals naive aeconv", {}};
    const GridSpec grid = GridSpec::centered(32, 32, 1.0);
    const RadialBasisField field = radial_basis_field(grid, Vec2{0.0, 0.0});
    const GatherPlan plan = build_gather_plan(field, 3, grid);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const FeatureMap map = FeatureMap::random(8, 32, 32, detail::mix_seed(cfg.seed, 100 + i));
        const Kernel ker = Kernel::random(8, 8, 3, detail::mix_seed(cfg.seed, 200 + i));
        worst = std::max(worst, max_abs_diff(aeconv_forward_planned(map, ker, plan),
                                             aeconv_forward_naive(map, ker, field)));
    }
    cr.checks.push_back({"plan_vs_naive_max_abs", worst <= cfg.tol_exact, worst, cfg.tol_exact});
    return cr;
}

// Criterion 3: exact 90-degree commutation on an odd grid with the azimuth
// center on the middle cell. The degenerate center cell is excluded; its
// basis is pinned and cannot follow the rotation.
inline CriterionResult check_rot90(const RunConfig& cfg) {
    CriterionResult cr{3, "exact 90-degree equivariance on a center-aligned odd grid", {}};
    const GridSpec grid = GridSpec::centered(33, 33, 1.0);
    const RadialBasisField field = radial_basis_field(grid, Vec2{0.0, 0.0});
    const GatherPlan plan = build_gather_plan(field, 3, grid);
    const int margin = 1;  // padding ring for k=3
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const FeatureMap map = FeatureMap::random(2, 33, 33, detail::mix_seed(cfg.seed, 300 + i));
        const Kernel ker = Kernel::random(2, 2, 3, detail::mix_seed(cfg.seed, 400 + i));
        const FeatureMap lhs = aeconv_forward_planned(rotate_resample(map, kPi / 2, field.center_cell), ker, plan);
        const FeatureMap rhs = rotate_resample(aeconv_forward_planned(map, ker, plan), kPi / 2, field.center_cell);
        worst = std::max(worst, interior_max_abs(lhs, rhs, margin, field.degenerate_cell));
    }
    cr.checks.push_back({"rot90_commutation_max_abs", worst <= cfg.tol_rot90, worst, cfg.tol_rot90});
    return cr;
}

// Criterion 4: revolving test. At 30/60/120 degrees the aeconv commutation
// residual must stay within revolve_factor of the rotate_resample baseline
// measured on the same scenes (90 degrees is anchored by the exactness bound
// instead, where the baseline itself is fp noise), and aeconv must beat the
// standard convolution strictly at every angle.
inline CriterionResult check_revolve(const RunConfig& cfg) {
    CriterionResult cr{4, "revolving test: aeconv tracks the resample baseline and beats standard conv", {}};
    const GridSpec grid = GridSpec::centered(65, 65, 0.5);
    const Vec2 center{0.0, 0.0};
    const double angles_deg[4] = {30.0, 60.0, 90.0, 120.0};
    for (double deg : angles_deg) {
        const double angle = deg * kPi / 180.0;
        double worst_allowance = 0.0;  // aeconv residual / allowed residual
        double worst_vs_standard = 0.0; // aeconv residual / standard residual
        for (int s = 0; s < 3; ++s) {
            const SyntheticScene scene =
                SyntheticScene::random(grid, center, 5, detail::mix_seed(cfg.seed, 500 + s));
            const double base = resample_baseline(scene, angle, 2);
            const double allowance = std::max(cfg.revolve_factor * base, cfg.tol_rot90);
            for (int t = 0; t < 10; ++t) {
                const Kernel ker = random_revolve_kernel(3, 0.3, detail::mix_seed(cfg.seed, 600 + t));
                const RevolveReport rep = run_revolve(scene, ker, angle);
                worst_allowance = std::max(worst_allowance, rep.aeconv_rel_l2 / allowance);
                worst_vs_standard = std::max(worst_vs_standard, rep.aeconv_rel_l2 / rep.standard_rel_l2);
            }
        }
        const std::string tag = std::to_string(static_cast<int>(deg));
        cr.checks.push_back({"revolve_" + tag + "deg_vs_baseline", worst_allowance <= 1.0, worst_allowance, 1.0});
        cr.checks.push_back({"revolve_" + tag + "deg_vs_standard", worst_vs_standard < 1.0, worst_vs_standard, 1.0});
    }
    return cr;
}

// Criterion 5: analytic gradients against central finite differences of
// l = sum(y^2), plus the adjoint dot-product identity.
inline CriterionResult check_gradients(const RunConfig& cfg) {
    CriterionResult cr{5, "analytic gradients match finite differences and the adjoint identity", {}};
    const GridSpec grid = GridSpec::centered(8, 8, 1.0);
    const RadialBasisField field = radial_basis_field(grid, Vec2{0.0, 0.0});
    const GatherPlan plan = build_gather_plan(field, 3, grid);
    const double h = 1e-5;

    const auto loss = [&](const FeatureMap& m, const Kernel& k) {
        const FeatureMap y = aeconv_forward_planned(m, k, plan);
        double l = 0.0;
        for (double v : y.data) l += v * v;
        return l;
    };

    double worst_input = 0.0, worst_weight = 0.0, worst_adjoint = 0.0;
    for (int i = 0; i < 10; ++i) {
        FeatureMap map = FeatureMap::random(2, 8, 8, detail::mix_seed(cfg.seed, 700 + i));
        Kernel ker = Kernel::random(2, 2, 3, detail::mix_seed(cfg.seed, 800 + i));

        const FeatureMap y = aeconv_forward_planned(map, ker, plan);
        FeatureMap upstream(y.channels, y.height, y.width);
        for (size_t n = 0; n < y.data.size(); ++n) upstream.data[n] = 2.0 * y.data[n];
        const AeConvGradients g = aeconv_backward(map, ker, plan, upstream);

        std::vector<double> fd_input(map.data.size());
        for (size_t n = 0; n < map.data.size(); ++n) {
            const double keep = map.data[n];
            map.data[n] = keep + h;
            const double lp = loss(map, ker);
            map.data[n] = keep - h;
            const double lm = loss(map, ker);
            map.data[n] = keep;
            fd_input[n] = (lp - lm) / (2.0 * h);
        }
        worst_input = std::max(worst_input, detail::rel_l2_vec(g.input_grad.data, fd_input));

        std::vector<double> fd_weight(ker.weights.size());
        for (size_t n = 0; n < ker.weights.size(); ++n) {
            const double keep = ker.weights[n];
            ker.weights[n] = keep + h;
            const double lp = loss(map, ker);
            ker.weights[n] = keep - h;
            const double lm = loss(map, ker);
            ker.weights[n] = keep;
            fd_weight[n] = (lp - lm) / (2.0 * h);
        }
        worst_weight = std::max(worst_weight, detail::rel_l2_vec(g.weight_grad.weights, fd_weight));

        const FeatureMap u = FeatureMap::random(2, 8, 8, detail::mix_seed(cfg.seed, 900 + i));
        const AeConvGradients gu = aeconv_backward(map, ker, plan, u);
        const double d1 = detail::dot(aeconv_forward_planned(map, ker, plan).data, u.data);
        const double d2 = detail::dot(map.data, gu.input_grad.data);
        worst_adjoint = std::max(worst_adjoint, std::abs(d1 - d2) / std::max({std::abs(d1), std::abs(d2), 1e-300}));
    }
    cr.checks.push_back({"input_grad_vs_fd_rel", worst_input <= cfg.tol_grad, worst_input, cfg.tol_grad});
    cr.checks.push_back({"weight_grad_vs_fd_rel", worst_weight <= cfg.tol_grad, worst_weight, cfg.tol_grad});
    cr.checks.push_back({"adjoint_dot_rel", worst_adjoint <= cfg.tol_adjoint, worst_adjoint, cfg.tol_adjoint});
    return cr;
}

// Criterion 6: decode inverts encode, and residuals are invariant when box
// and anchor revolve together about the azimuth center.
inline CriterionResult check_codec(const RunConfig& cfg) {
    CriterionResult cr{6, "anchor codec: roundtrip identity and rotation equivariance", {}};
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, 1000));
    std::uniform_real_distribution<double> pos(-20.0, 20.0);
    std::uniform_real_distribution<double> zdist(-3.0, 3.0);
    std::uniform_real_distribution<double> size(0.0, 5.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    std::uniform_real_distribution<double> vel(-10.0, 10.0);
    const Vec2 center{0.0, 0.0};

    const auto random_box = [&]() {
        BoxState b;
        b.center = {pos(rng), pos(rng)};
        b.z = zdist(rng);
        b.length = size(rng);
        b.width = size(rng);
        b.height = size(rng);
        b.theta = ang(rng);
        b.velocity = {vel(rng), vel(rng)};
        return b;
    };
    const auto far_point = [&]() {
        Vec2 p{pos(rng), pos(rng)};
        while (p.norm() < 0.1) p = {pos(rng), pos(rng)};
        return p;
    };

    double worst_rt = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BoxState b = random_box();
        AzimuthAnchor a = anchor_at(far_point(), center);
        a.z = zdist(rng);
        a.length = size(rng);
        a.width = size(rng);
        a.height = size(rng);
        const BoxState back = decode(encode(b, a), a);
        double d = std::max({std::abs(back.center.x - b.center.x), std::abs(back.center.y - b.center.y),
                             std::abs(back.z - b.z), std::abs(back.length - b.length),
                             std::abs(back.width - b.width), std::abs(back.height - b.height),
                             std::abs(back.velocity.x - b.velocity.x), std::abs(back.velocity.y - b.velocity.y),
                             angle_dist(back.theta, b.theta)});
        worst_rt = std::max(worst_rt, d);
    }
    cr.checks.push_back({"codec_roundtrip_max_abs", worst_rt <= cfg.tol_exact, worst_rt, cfg.tol_exact});

    double worst_eq = 0.0;
    std::uniform_real_distribution<double> delta(-2.0 * kPi, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
        const BoxState b = random_box();
        const Vec2 p = far_point();
        const double dl = delta(rng);
        const ResidualState r0 = encode(b, anchor_at(p, center));
        const ResidualState r1 =
            encode(rotate_box(b, dl, center), anchor_at(center + rotate(p - center, dl), center));
        double d = std::max({std::abs(r1.d_r - r0.d_r), std::abs(r1.d_o - r0.d_o),
                             std::abs(r1.d_z - r0.d_z), std::abs(r1.d_l - r0.d_l),
                             std::abs(r1.d_w - r0.d_w), std::abs(r1.d_h - r0.d_h),
                             std::abs(r1.v_r - r0.v_r), std::abs(r1.v_o - r0.v_o),
                             angle_dist(r1.d_theta, r0.d_theta)});
        worst_eq = std::max(worst_eq, d);
    }
    cr.checks.push_back({"codec_equivariance_max_abs", worst_eq <= cfg.tol_exact, worst_eq, cfg.tol_exact});
    return cr;
}

// Criterion 7: depth-bin layout and score mapping with the default constants.
inline CriterionResult check_depth(const RunConfig& cfg) {
    CriterionResult cr{7, "virtual depth: layout, interpolation, focal decoupling, coverage", {}};
    std::mt19937_64 rng(detail::mix_seed(cfg.seed, 2000));
    std::normal_distribution<double> dist(0.0, 1.0);

    const FixedDepthSpec fixed = cfg.fixed_depth();
    const double expect_bins = (cfg.fixed_max_m - cfg.fixed_min_m) / cfg.fixed_bin_m;
    cr.checks.push_back({"fixed_bin_count", std::abs(fixed.bins - expect_bins) < 1e-9,
                         static_cast<double>(fixed.bins), expect_bins});

    const FixedDepthSpec default_fixed(2.0, 54.0, 0.5);
    cr.checks.push_back({"fixed_bin_count_default_layout", default_fixed.bins == 104,
                         static_cast<double>(default_fixed.bins), 104.0});

    // First fixed bin with the default constants reads virtual index 20/3.
    const VirtualDepthSpec vdef;
    {
        std::vector<double> s_v(vdef.bins);
        for (double& v : s_v) v = dist(rng);
        const double dr = real_bin_size(vdef, 800.0);
        const std::vector<double> s_f = map_scores(s_v, vdef, default_fixed, dr);
        const double expect = (1.0 / 3.0) * s_v[6] + (2.0 / 3.0) * s_v[7];
        const double d = std::abs(s_f[0] - expect);
        cr.checks.push_back({"first_bin_interpolation", d <= cfg.tol_exact, d, cfg.tol_exact});
    }

    // Cameras with different (fx, fy) but the same RMS focal map identically.
    {
        std::vector<double> s_v(vdef.bins);
        for (double& v : s_v) v = dist(rng);
        const std::vector<double> a = map_scores(s_v, vdef, default_fixed, real_bin_size(vdef, real_focal(1200.0, 1600.0)));
        const std::vector<double> b = map_scores(s_v, vdef, default_fixed, real_bin_size(vdef, real_focal(560.0, 1920.0)));
        double worst = 0.0;
        for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        cr.checks.push_back({"rms_focal_decoupling", worst <= cfg.tol_exact, worst, cfg.tol_exact});
    }

    // Constant scores map to the same constant; outputs stay inside the
    // bracketing score window.
    {
        double worst_const = 0.0, worst_convex = 0.0;
        std::uniform_real_distribution<double> focal(800.0, 2000.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double dr = real_bin_size(vdef, focal(rng));
            std::vector<double> s_v(vdef.bins);
            const double c = dist(rng);
            for (double& v : s_v) v = c;
            for (double v : map_scores(s_v, vdef, default_fixed, dr)) {
                worst_const = std::max(worst_const, std::abs(v - c));
            }
            for (double& v : s_v) v = dist(rng);
            const std::vector<double> s_f = map_scores(s_v, vdef, default_fixed, dr);
            for (int i = 0; i < default_fixed.bins; ++i) {
                const double u = std::min((default_fixed.min_m + i * default_fixed.bin_size_m) / dr,
                                          static_cast<double>(vdef.bins - 1));
                const int j = static_cast<int>(std::floor(u));
                const int j1 = std::min(j + 1, vdef.bins - 1);
                const double lo = std::min(s_v[j], s_v[j1]);
                const double hi = std::max(s_v[j], s_v[j1]);
                worst_convex = std::max({worst_convex, lo - s_f[i], s_f[i] - hi});
            }
        }
        cr.checks.push_back({"constant_scores_max_abs", worst_const <= cfg.tol_exact, worst_const, cfg.tol_exact});
        cr.checks.push_back({"convex_combination_excess", worst_convex <= cfg.tol_exact, worst_convex, cfg.tol_exact});
    }

    // A camera focal below the virtual focal cannot cover the fixed range.
    {
        bool rejected = false;
        try {
            (void)real_bin_size(vdef, 799.0);
        } catch (const coverage_error&) {
            rejected = true;
        }
        cr.checks.push_back({"short_focal_rejected", rejected, rejected ? 1.0 : 0.0, 1.0});
    }
    return cr;
}

inline std::vector<CriterionResult> run_all_checks(const RunConfig& cfg) {
    return {check_reduction(cfg), check_plan_equivalence(cfg), check_rot90(cfg), check_revolve(cfg),
            check_gradients(cfg),  check_codec(cfg),           check_depth(cfg)};
}

}  // namespace aebev

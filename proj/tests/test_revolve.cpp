#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "aebev/revolve.hpp"

using namespace aebev;

namespace {

SyntheticScene single_blob(const GridSpec& grid, double range, double azimuth, double width) {
    SyntheticScene s;
    s.grid = grid;
    s.center = {0.0, 0.0};
    s.blobs.push_back({range, azimuth, 1.0, width});
    return s;
}

}  // namespace

TEST_CASE("an empty blob list renders a zero map") {
    SyntheticScene s;
    s.grid = GridSpec::centered(9, 9, 1.0);
    s.center = {0.0, 0.0};
    for (double v : synth_scene(s).data) CHECK(v == 0.0);
}

TEST_CASE("a centered blob is symmetric under 90-degree index rotation") {
    const GridSpec grid = GridSpec::centered(11, 11, 1.0);
    const FeatureMap m = synth_scene(single_blob(grid, 0.0, 0.0, 2.0));
    double worst = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j)
            worst = std::max(worst, std::abs(m.at(0, i, j) - m.at(0, j, 10 - i)));
    CHECK(worst <= 1e-12);
}

TEST_CASE("rotating the scene equals re-rendering at the shifted azimuth") {
    const GridSpec grid = GridSpec::centered(21, 21, 1.0);
    const double delta = 0.7;
    const FeatureMap a = synth_scene(rotate_scene(single_blob(grid, 5.0, 0.0, 1.5), delta));
    const FeatureMap b = synth_scene(single_blob(grid, 5.0, wrap_angle(0.0 + delta), 1.5));
    CHECK(max_abs_diff(a, b) <= 1e-12);
}

TEST_CASE("blob width must be positive") {
    SyntheticScene s = single_blob(GridSpec::centered(9, 9, 1.0), 2.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)synth_scene(s), config_error);
}

TEST_CASE("zero rotation reports zero discrepancies") {
    const GridSpec grid = GridSpec::centered(33, 33, 1.0);
    const SyntheticScene scene = SyntheticScene::random(grid, {0.0, 0.0}, 4, 77);
    const Kernel ker = random_revolve_kernel(3, 0.3, 78);
    const RevolveReport rep = run_revolve(scene, ker, 0.0);
    CHECK(rep.aeconv_rel_l2 == 0.0);
    CHECK(rep.standard_rel_l2 == 0.0);
    CHECK(rep.max_abs_aeconv == 0.0);
    CHECK(rep.max_abs_standard == 0.0);
    CHECK(rep.interior_margin == 2);
}

TEST_CASE("90 degrees on a center-aligned odd grid: aeconv exact, standard not") {
    const GridSpec grid = GridSpec::centered(33, 33, 1.0);
    const SyntheticScene scene = SyntheticScene::random(grid, {0.0, 0.0}, 4, 79);
    const Kernel ker = random_revolve_kernel(3, 0.3, 80);
    const RevolveReport rep = run_revolve(scene, ker, kPi / 2);
    CHECK(rep.aeconv_rel_l2 <= 1e-9);
    CHECK(rep.standard_rel_l2 > 0.0);
    CHECK(rep.aeconv_rel_l2 < rep.standard_rel_l2);
}

TEST_CASE("60 degrees: aeconv stays near the resample baseline and beats standard conv") {
    const GridSpec grid = GridSpec::centered(65, 65, 0.5);
    const double angle = kPi / 3.0;
    const SyntheticScene scene = SyntheticScene::random(grid, {0.0, 0.0}, 5, 81);
    const double base = resample_baseline(scene, angle, 2);
    CHECK(base > 0.0);
    for (uint64_t seed : {82ull, 83ull, 84ull}) {
        const RevolveReport rep = run_revolve(scene, random_revolve_kernel(3, 0.3, seed), angle);
        CHECK(rep.aeconv_rel_l2 <= 2.0 * base);
        CHECK(rep.aeconv_rel_l2 < rep.standard_rel_l2);
    }
}

TEST_CASE("reports are deterministic given scene seed, kernel, and angle") {
    const GridSpec grid = GridSpec::centered(33, 33, 1.0);
    const SyntheticScene s1 = SyntheticScene::random(grid, {0.0, 0.0}, 5, 85);
    const SyntheticScene s2 = SyntheticScene::random(grid, {0.0, 0.0}, 5, 85);
    const Kernel ker = random_revolve_kernel(3, 0.3, 86);
    const RevolveReport r1 = run_revolve(s1, ker, 1.1);
    const RevolveReport r2 = run_revolve(s2, ker, 1.1);
    CHECK(r1.aeconv_rel_l2 == r2.aeconv_rel_l2);
    CHECK(r1.standard_rel_l2 == r2.standard_rel_l2);
    CHECK(r1.max_abs_aeconv == r2.max_abs_aeconv);
}

TEST_CASE("revolve kernels have unit DC gain and are non-isotropic") {
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        const Kernel k = random_revolve_kernel(3, 0.3, seed);
        double sum = 0.0;
        for (int t = 0; t < 9; ++t) sum += k.w(0, 0, t);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        // at least two off-center taps differ, so the kernel has a direction
        CHECK(std::abs(k.w(0, 0, 0) - k.w(0, 0, 8)) > 1e-6);
    }
}

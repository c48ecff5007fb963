#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "aebev/geometry.hpp"

using namespace aebev;

TEST_CASE("rig center of a single camera is the camera position") {
    CameraRig rig;
    rig.cameras.push_back({"only", 0.0, 0.0, 0.0, 800.0, 800.0});
    const Vec2 c = rig_center(rig);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
}

TEST_CASE("rig center of two opposed cameras is the midpoint") {
    CameraRig rig;
    rig.cameras.push_back({"a", 1.0, 0.0, 0.0, 800.0, 800.0});
    rig.cameras.push_back({"b", -1.0, 0.0, kPi, 800.0, 800.0});
    const Vec2 c = rig_center(rig);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
}

TEST_CASE("rig center of a hexagon ring vanishes") {
    CameraRig rig;
    for (int k = 0; k < 6; ++k) {
        const double a = k * kPi / 3.0;
        rig.cameras.push_back({"cam" + std::to_string(k), std::cos(a), std::sin(a), a, 900.0, 900.0});
    }
    const Vec2 c = rig_center(rig);
    CHECK(std::abs(c.x) <= 1e-12);
    CHECK(std::abs(c.y) <= 1e-12);
}

TEST_CASE("rig validation rejects empty rigs and bad focals") {
    CameraRig empty;
    CHECK_THROWS_AS((void)rig_center(empty), config_error);
    CameraRig bad;
    bad.cameras.push_back({"a", 0.0, 0.0, 0.0, -1.0, 800.0});
    CHECK_THROWS_AS((void)rig_center(bad), config_error);
}

TEST_CASE("azimuth of the cardinal directions") {
    const Vec2 c{0.0, 0.0};
    CHECK(azimuth_of({1.0, 0.0}, c) == 0.0);                              // forward
    CHECK(azimuth_of({0.0, 1.0}, c) == doctest::Approx(kPi / 2));         // left
    CHECK(azimuth_of({-1.0, 0.0}, c) == doctest::Approx(kPi));            // behind
    CHECK(azimuth_of({0.0, -1.0}, c) == doctest::Approx(-kPi / 2));       // right
}

TEST_CASE("azimuth rotates with the point") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> ang(-2.0 * kPi, 2.0 * kPi);
    const Vec2 c{1.5, -2.0};
    for (int t = 0; t < 200; ++t) {
        Vec2 p{coord(rng), coord(rng)};
        if ((p - c).norm() < 1e-3) continue;
        const double delta = ang(rng);
        const double a0 = azimuth_of(p, c);
        const double a1 = azimuth_of(c + rotate(p - c, delta), c);
        CHECK(angle_dist(a1, a0 + delta) <= 1e-12);
    }
}

TEST_CASE("radial basis at cardinal cells") {
    const GridSpec grid = GridSpec::centered(9, 9, 0.5);
    const RadialBasisField f = radial_basis_field(grid, Vec2{0.0, 0.0});

    const RadialBasis fwd = f.at(6, 4);  // forward of center
    CHECK(fwd.e_r.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fwd.e_r.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fwd.e_o.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fwd.e_o.y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fwd.azimuth == doctest::Approx(0.0).epsilon(1e-15));

    const RadialBasis left = f.at(4, 6);  // left of center
    CHECK(left.e_r.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(left.e_r.y == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(left.e_o.x == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(left.e_o.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(left.azimuth == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("the degenerate center cell gets the ego axes") {
    const GridSpec grid = GridSpec::centered(9, 9, 0.5);
    const RadialBasisField f = radial_basis_field(grid, Vec2{0.0, 0.0});
    CHECK(f.degenerate_cell == 4 * 9 + 4);
    const RadialBasis b = f.at(4, 4);
    CHECK(b.azimuth == 0.0);
    CHECK(b.e_r.x == 1.0);
    CHECK(b.e_r.y == 0.0);
    CHECK(b.e_o.x == 0.0);
    CHECK(b.e_o.y == 1.0);

    // even grid: no cell sits on the center
    const GridSpec even = GridSpec::centered(8, 8, 0.5);
    CHECK(radial_basis_field(even, Vec2{0.0, 0.0}).degenerate_cell == -1);
}

TEST_CASE("the basis field is orthonormal, right-handed, and radially aligned") {
    const GridSpec grid(11, 13, 0.8, Vec2{-3.0, -5.0});
    const Vec2 center{0.4, -0.8};
    const RadialBasisField f = radial_basis_field(grid, center);
    for (int i = 0; i < grid.height; ++i) {
        for (int j = 0; j < grid.width; ++j) {
            const RadialBasis b = f.at(i, j);
            CHECK(std::abs(b.e_r.norm() - 1.0) <= 1e-12);
            CHECK(std::abs(b.e_o.norm() - 1.0) <= 1e-12);
            CHECK(std::abs(b.e_r.dot(b.e_o)) <= 1e-12);
            CHECK(b.e_r.cross(b.e_o) == doctest::Approx(1.0).epsilon(1e-12));
            if (static_cast<int>(f.index(i, j)) == f.degenerate_cell) continue;
            const Vec2 d = grid.cell_center(i, j) - center;
            CHECK(std::abs(b.e_r.cross(d * (1.0 / d.norm()))) <= 1e-12);
        }
    }
}

TEST_CASE("rotating a point rotates its basis") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-12.0, 12.0);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const Vec2 c{0.0, 0.0};
    for (int t = 0; t < 200; ++t) {
        Vec2 p{coord(rng), coord(rng)};
        if (p.norm() < 1e-3) continue;
        const double delta = ang(rng);
        const RadialBasis b0 = radial_basis_at(p, c);
        const RadialBasis b1 = radial_basis_at(c + rotate(p - c, delta), c);
        const Vec2 er = rotate(b0.e_r, delta);
        const Vec2 eo = rotate(b0.e_o, delta);
        CHECK(std::abs(b1.e_r.x - er.x) <= 1e-12);
        CHECK(std::abs(b1.e_r.y - er.y) <= 1e-12);
        CHECK(std::abs(b1.e_o.x - eo.x) <= 1e-12);
        CHECK(std::abs(b1.e_o.y - eo.y) <= 1e-12);
    }
}

TEST_CASE("grid cell coordinates roundtrip") {
    const GridSpec grid(16, 24, 0.4, Vec2{-2.0, -4.0});
    const Vec2 p = grid.cell_center(5, 17);
    const Vec2 cc = grid.to_cell(p);
    CHECK(cc.x == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(cc.y == doctest::Approx(17.0).epsilon(1e-14));
    CHECK_THROWS_AS(GridSpec(0, 4, 1.0, Vec2{}), config_error);
    CHECK_THROWS_AS(GridSpec(4, 4, -1.0, Vec2{}), config_error);
}

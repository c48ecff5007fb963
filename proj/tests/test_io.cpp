#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aebev/config.hpp"
#include "aebev/csv.hpp"
#include "aebev/io.hpp"

using namespace aebev;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "aebev_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("tensor files round-trip at 32-bit precision") {
    const FeatureMap m = FeatureMap::random(4, 8, 8, 91);
    const auto path = temp_file("roundtrip.aebf");
    write_tensor(to_tensor(m), path.string());
    const FeatureMap back = to_feature_map(read_tensor(path.string()));
    REQUIRE(back.channels == 4);
    REQUIRE(back.height == 8);
    REQUIRE(back.width == 8);
    for (size_t n = 0; n < m.data.size(); ++n) {
        CHECK(back.data[n] == static_cast<double>(static_cast<float>(m.data[n])));
    }
}

TEST_CASE("bad magic is rejected with its byte offset") {
    std::string bytes = encode_tensor(to_tensor(FeatureMap::random(1, 2, 2, 92)));
    bytes[0] = 'X';
    try {
        (void)decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
        FAIL("expected format_error");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
    }
}

TEST_CASE("rank 0 is rejected") {
    std::string bytes;
    bytes.append("AEBF", 4);
    bytes.push_back(1);
    bytes.push_back(0);  // version 1 little-endian
    bytes.push_back(0);  // rank 0
    CHECK_THROWS_AS((void)decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()),
                    format_error);
}

TEST_CASE("truncated payloads are rejected with a byte offset") {
    std::string bytes = encode_tensor(to_tensor(FeatureMap::random(1, 3, 3, 93)));
    bytes.resize(bytes.size() - 5);
    try {
        (void)decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
        FAIL("expected format_error");
    } catch (const format_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("truncated") != std::string::npos);
        CHECK(msg.find("offset") != std::string::npos);
    }
}

TEST_CASE("trailing bytes are rejected") {
    std::string bytes = encode_tensor(to_tensor(FeatureMap::random(1, 2, 2, 94)));
    bytes.push_back('\0');
    CHECK_THROWS_AS((void)decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()),
                    format_error);
}

TEST_CASE("oversized dims are rejected") {
    std::string bytes;
    bytes.append("AEBF", 4);
    bytes.push_back(1);
    bytes.push_back(0);
    bytes.push_back(2);  // rank 2
    for (int d = 0; d < 2; ++d) {
        for (uint32_t v = 0xffffffffu, i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    CHECK_THROWS_AS((void)decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()),
                    format_error);
}

TEST_CASE("encode validates shape metadata") {
    TensorData t;
    t.dims = {2, 3};
    t.values.assign(5, 0.0);  // should be 6
    CHECK_THROWS_AS((void)encode_tensor(t), config_error);
    t.dims.clear();
    t.values.clear();
    CHECK_THROWS_AS((void)encode_tensor(t), config_error);
}

TEST_CASE("kernel tensors must be rank 4 and square") {
    TensorData t;
    t.dims = {2, 2, 3, 2};
    t.values.assign(24, 0.0);
    CHECK_THROWS_AS((void)to_kernel(t), format_error);
    t.dims = {2, 2, 3};
    t.values.assign(18, 0.0);
    CHECK_THROWS_AS((void)to_kernel(t), format_error);
}

TEST_CASE("rig files parse names, keys, and comments") {
    std::istringstream in(
        "# six-camera ring\n"
        "\n"
        "camera front x=0.5 y=0.0 yaw=0.0 fx=1266 fy=1266\n"
        "camera back x=-0.5 y=0.0 yaw=3.14159 fx=1200 fy=1300  # rear view\n");
    const CameraRig rig = parse_rig(in);
    REQUIRE(rig.cameras.size() == 2);
    CHECK(rig.cameras[0].name == "front");
    CHECK(rig.cameras[1].fx == 1200.0);
    CHECK(rig.cameras[1].yaw == doctest::Approx(3.14159));
}

TEST_CASE("rig parse errors carry line numbers") {
    std::istringstream in(
        "camera a x=0 y=0 yaw=0 fx=100 fy=100\n"
        "\n"
        "camera b x=0 y=0 yaw=0 fx=100 zz=100\n");
    try {
        (void)parse_rig(in);
        FAIL("expected format_error");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::istringstream missing("camera c x=0 y=0 yaw=0 fx=100\n");
    CHECK_THROWS_AS((void)parse_rig(missing), format_error);
    std::istringstream badnum("camera d x=abc y=0 yaw=0 fx=100 fy=100\n");
    CHECK_THROWS_AS((void)parse_rig(badnum), format_error);
    std::istringstream notcam("vehicle d x=0 y=0 yaw=0 fx=100 fy=100\n");
    CHECK_THROWS_AS((void)parse_rig(notcam), format_error);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS((void)parse_rig(empty), config_error);
}

TEST_CASE("config defaults match the documented constants") {
    const RunConfig cfg;
    CHECK(cfg.virtual_bins == 180);
    CHECK(cfg.virtual_range_m == 54.0);
    CHECK(cfg.virtual_focal_px == 800.0);
    CHECK(cfg.fixed_min_m == 2.0);
    CHECK(cfg.fixed_max_m == 54.0);
    CHECK(cfg.fixed_bin_m == 0.5);
    CHECK(cfg.fixed_depth().bins == 104);
    const Vec2 center = rig_center(RunConfig::default_rig());
    CHECK(center.x == 0.0);
    CHECK(center.y == 0.0);
}

TEST_CASE("config files override defaults and reject unknown keys") {
    std::istringstream in(
        "# comment\n"
        "grid_height = 65\n"
        "grid_width = 65\n"
        "grid_resolution = 0.5\n"
        "tol_rot90 = 1e-8\n"
        "seed = 42\n");
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.grid_height == 65);
    CHECK(cfg.grid_resolution == 0.5);
    CHECK(cfg.tol_rot90 == 1e-8);
    CHECK(cfg.seed == 42);
    CHECK(cfg.virtual_bins == 180);  // untouched default

    std::istringstream bad("tol_rot90_typo = 1e-8\n");
    CHECK_THROWS_AS((void)parse_config(bad), config_error);
    std::istringstream dup("seed = 1\nseed = 2\n");
    CHECK_THROWS_AS((void)parse_config(dup), format_error);
    std::istringstream notnum("grid_height = many\n");
    CHECK_THROWS_AS((void)parse_config(notnum), config_error);
    std::istringstream badgrid("grid_resolution = -1\n");
    CHECK_THROWS_AS((void)parse_config(badgrid), config_error);
    std::istringstream badkernel("kernel_extent = 4\n");
    CHECK_THROWS_AS((void)parse_config(badkernel), config_error);
}

TEST_CASE("boxes CSV round-trips exactly") {
    std::vector<BoxState> boxes;
    std::mt19937_64 rng(95);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 20; ++i) {
        BoxState b;
        b.center = {d(rng), d(rng)};
        b.z = d(rng);
        b.length = std::abs(d(rng));
        b.width = std::abs(d(rng));
        b.height = std::abs(d(rng));
        b.theta = wrap_angle(d(rng));
        b.velocity = {d(rng), d(rng)};
        boxes.push_back(b);
    }
    const auto path = temp_file("boxes.csv");
    write_boxes(boxes, path.string());
    const std::vector<BoxState> back = read_boxes(path.string());
    REQUIRE(back.size() == boxes.size());
    for (size_t i = 0; i < boxes.size(); ++i) {
        CHECK(back[i].center.x == boxes[i].center.x);
        CHECK(back[i].theta == boxes[i].theta);
        CHECK(back[i].velocity.y == boxes[i].velocity.y);
    }
}

TEST_CASE("residuals CSV round-trips exactly") {
    std::vector<ResidualState> res;
    std::mt19937_64 rng(96);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 10; ++i) {
        ResidualState r;
        r.d_r = d(rng);
        r.d_o = d(rng);
        r.d_z = d(rng);
        r.d_l = d(rng);
        r.d_w = d(rng);
        r.d_h = d(rng);
        r.d_theta = wrap_angle(d(rng));
        r.v_r = d(rng);
        r.v_o = d(rng);
        res.push_back(r);
    }
    const auto path = temp_file("residuals.csv");
    write_residuals(res, path.string());
    const std::vector<ResidualState> back = read_residuals(path.string());
    REQUIRE(back.size() == res.size());
    for (size_t i = 0; i < res.size(); ++i) {
        CHECK(back[i].d_r == res[i].d_r);
        CHECK(back[i].d_theta == res[i].d_theta);
        CHECK(back[i].v_o == res[i].v_o);
    }
}

TEST_CASE("CSV headers and column counts are enforced") {
    const auto path = temp_file("badheader.csv");
    {
        std::ofstream out(path);
        out << "x,y,z\n1,2,3\n";
    }
    CHECK_THROWS_AS((void)read_boxes(path.string()), format_error);
    {
        std::ofstream out(path);
        out << kBoxesHeader << "\n1,2,3\n";
    }
    try {
        (void)read_boxes(path.string());
        FAIL("expected format_error");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    {
        std::ofstream out(path);
        out << "score\n1.5\nabc\n";
    }
    CHECK_THROWS_AS((void)read_scores(path.string()), format_error);
}

TEST_CASE("score CSVs round-trip") {
    std::vector<double> s = {1.5, -2.25, 0.0, 3.125};
    const auto path = temp_file("scores.csv");
    write_scores(s, path.string());
    CHECK(read_scores(path.string()) == s);
}

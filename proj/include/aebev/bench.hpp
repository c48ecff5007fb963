#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "aebev/aeconv.hpp"
#include "aebev/config.hpp"

// Throughput comparison of the three convolution paths. The gather plan is
// built once per grid and excluded from the per-call cost, which is the point
// being measured: interpolation setup hoisted out of the hot loop.

namespace aebev {

struct BenchSize {
    int height = 0;
    int width = 0;
    int channels = 0;
};

// Parses "HxWxC" size tokens, e.g. "64x64x8".
inline BenchSize parse_bench_size(const std::string& token) {
    BenchSize s;
    int fields[3] = {0, 0, 0};
    size_t pos = 0;
    for (int f = 0; f < 3; ++f) {
        size_t used = 0;
        try {
            fields[f] = std::stoi(token.substr(pos), &used);
        } catch (const std::exception&) {
            throw config_error("bad bench size '" + token + "', expected HxWxC");
        }
        pos += used;
        if (f < 2) {
            if (pos >= token.size() || token[pos] != 'x')
                throw config_error("bad bench size '" + token + "', expected HxWxC");
            ++pos;
        }
    }
    if (pos != token.size() || fields[0] <= 0 || fields[1] <= 0 || fields[2] <= 0)
        throw config_error("bad bench size '" + token + "', expected HxWxC");
    s.height = fields[0];
    s.width = fields[1];
    s.channels = fields[2];
    return s;
}

struct BenchRow {
    std::string op;
    int height = 0;
    int width = 0;
    int channels = 0;
    int kernel_extent = 0;
    double ns_per_cell = 0.0;
};

namespace detail {

template <typename F>
double median_ns_per_cell(F&& fn, int cells, int reps) {
    volatile double sink = 0.0;
    sink = fn();  // warmup
    std::vector<double> ns(reps);
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        sink = fn();
        const auto t1 = std::chrono::steady_clock::now();
        ns[r] = std::chrono::duration<double, std::nano>(t1 - t0).count() / cells;
    }
    (void)sink;
    std::sort(ns.begin(), ns.end());
    return ns[ns.size() / 2];
}

}  // namespace detail

inline std::vector<BenchRow> run_bench(const RunConfig& cfg, const std::vector<BenchSize>& sizes, int reps = 5) {
    if (reps < 5) throw config_error("run_bench: at least 5 repetitions required");
    std::vector<BenchRow> rows;
    for (const BenchSize& s : sizes) {
        const GridSpec grid = GridSpec::centered(s.height, s.width, 1.0);
        const RadialBasisField field = radial_basis_field(grid, Vec2{0.0, 0.0});
        const GatherPlan plan = build_gather_plan(field, cfg.kernel_extent, grid);
        const FeatureMap map = FeatureMap::random(s.channels, s.height, s.width, detail::mix_seed(cfg.seed, 3000));
        const Kernel ker =
            Kernel::random(s.channels, s.channels, cfg.kernel_extent, detail::mix_seed(cfg.seed, 3001));
        const int cells = s.height * s.width;

        const auto time_op = [&](const char* name, auto&& fn) {
            rows.push_back({name, s.height, s.width, s.channels, cfg.kernel_extent,
                            detail::median_ns_per_cell(fn, cells, reps)});
        };
        time_op("standard", [&] { return standard_conv(map, ker).data[0]; });
        time_op("aeconv_naive", [&] { return aeconv_forward_naive(map, ker, field).data[0]; });
        time_op("aeconv_planned", [&] { return aeconv_forward_planned(map, ker, plan).data[0]; });
    }
    return rows;
}

}  // namespace aebev

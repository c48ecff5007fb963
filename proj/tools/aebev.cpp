// aebev: azimuth-equivariant BEV kernels, driven from the command line.
//
// Subcommands: field, conv, encode, decode, mapdepth, check, revolve, bench.
// Exit codes: 0 success, 1 check-suite failure, 2 bad input or configuration.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aebev/aeconv.hpp"
#include "aebev/bench.hpp"
#include "aebev/checks.hpp"
#include "aebev/config.hpp"
#include "aebev/csv.hpp"
#include "aebev/io.hpp"
#include "aebev/revolve.hpp"

namespace {

using namespace aebev;

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return read_config(path);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

Kernel kernel_for(const RunConfig& cfg, int channels) {
    if (!cfg.kernel_file.empty()) {
        Kernel k = to_kernel(read_tensor(cfg.kernel_file));
        if (k.in_channels != channels)
            throw config_error("kernel file expects " + std::to_string(k.in_channels) +
                               " input channels, input has " + std::to_string(channels));
        return k;
    }
    return Kernel::random(channels, channels, cfg.kernel_extent, cfg.kernel_seed);
}

int cmd_field(const RunConfig& cfg, const std::string& azimuth_out, const std::string& radial_out) {
    const GridSpec grid = cfg.grid();
    const RadialBasisField field = radial_basis_field(grid, rig_center(cfg.rig()));

    TensorData az;
    az.dims = {static_cast<uint32_t>(grid.height), static_cast<uint32_t>(grid.width)};
    az.values = field.azimuth;
    write_tensor(az, azimuth_out);

    TensorData er;
    er.dims = {2, static_cast<uint32_t>(grid.height), static_cast<uint32_t>(grid.width)};
    er.values.resize(2 * field.e_r.size());
    for (size_t n = 0; n < field.e_r.size(); ++n) {
        er.values[n] = field.e_r[n].x;
        er.values[field.e_r.size() + n] = field.e_r[n].y;
    }
    write_tensor(er, radial_out);

    std::cout << "wrote " << azimuth_out << " and " << radial_out << "\n";
    return 0;
}

int cmd_conv(const RunConfig& cfg, const std::string& input, const std::string& op,
             const std::string& output, bool naive, bool zero_azimuth) {
    const FeatureMap map = to_feature_map(read_tensor(input));
    const GridSpec grid = cfg.grid();
    if (map.height != grid.height || map.width != grid.width)
        throw config_error("input tensor is " + std::to_string(map.height) + "x" +
                           std::to_string(map.width) + " but the configured grid is " +
                           std::to_string(grid.height) + "x" + std::to_string(grid.width));
    const Kernel ker = kernel_for(cfg, map.channels);

    FeatureMap out;
    if (op == "standard") {
        out = standard_conv(map, ker);
    } else if (op == "aeconv") {
        const RadialBasisField field = zero_azimuth ? uniform_field(grid.height, grid.width)
                                                    : radial_basis_field(grid, rig_center(cfg.rig()));
        out = naive ? aeconv_forward_naive(map, ker, field)
                    : aeconv_forward_planned(map, ker, build_gather_plan(field, ker.k, grid));
    } else {
        throw config_error("unknown operator '" + op + "' (expected aeconv or standard)");
    }
    write_tensor(to_tensor(out), output);
    std::cout << "wrote " << output << "\n";
    return 0;
}

// Boxes are anchored at their nearest grid cell; decode needs the anchor
// locations back, so encode emits them as a sidecar CSV.
int cmd_encode(const RunConfig& cfg, const std::string& boxes_csv, const std::string& residuals_out,
               const std::string& anchors_out) {
    const GridSpec grid = cfg.grid();
    const RadialBasisField field = radial_basis_field(grid, rig_center(cfg.rig()));
    const std::vector<BoxState> boxes = read_boxes(boxes_csv);

    std::vector<ResidualState> residuals;
    std::vector<Vec2> anchor_points;
    for (size_t n = 0; n < boxes.size(); ++n) {
        const Vec2 cc = grid.to_cell(boxes[n].center);
        const int i = static_cast<int>(std::lround(cc.x));
        const int j = static_cast<int>(std::lround(cc.y));
        if (i < 0 || i >= grid.height || j < 0 || j >= grid.width)
            throw config_error("box " + std::to_string(n + 1) + " center (" +
                               fmt_double(boxes[n].center.x) + ", " + fmt_double(boxes[n].center.y) +
                               ") lies outside the grid");
        const AzimuthAnchor anchor = anchor_from_field(field, grid, i, j);
        residuals.push_back(encode(boxes[n], anchor));
        anchor_points.push_back(anchor.location);
    }
    write_residuals(residuals, residuals_out);
    write_anchors(anchor_points, anchors_out);
    std::cout << "wrote " << residuals_out << " and " << anchors_out << "\n";
    return 0;
}

int cmd_decode(const RunConfig& cfg, const std::string& residuals_csv, const std::string& anchors_csv,
               const std::string& boxes_out) {
    const GridSpec grid = cfg.grid();
    const RadialBasisField field = radial_basis_field(grid, rig_center(cfg.rig()));
    const std::vector<ResidualState> residuals = read_residuals(residuals_csv);
    const std::vector<Vec2> anchor_points = read_anchors(anchors_csv);
    if (residuals.size() != anchor_points.size())
        throw config_error("residuals and anchors row counts differ (" + std::to_string(residuals.size()) +
                           " vs " + std::to_string(anchor_points.size()) + ")");

    std::vector<BoxState> boxes;
    for (size_t n = 0; n < residuals.size(); ++n) {
        const Vec2 cc = grid.to_cell(anchor_points[n]);
        const int i = static_cast<int>(std::lround(cc.x));
        const int j = static_cast<int>(std::lround(cc.y));
        if (i < 0 || i >= grid.height || j < 0 || j >= grid.width ||
            (grid.cell_center(i, j) - anchor_points[n]).norm() > 1e-6 * grid.resolution)
            throw config_error("anchor " + std::to_string(n + 1) + " is not a grid cell center");
        boxes.push_back(decode(residuals[n], anchor_from_field(field, grid, i, j)));
    }
    write_boxes(boxes, boxes_out);
    std::cout << "wrote " << boxes_out << "\n";
    return 0;
}

int cmd_mapdepth(const RunConfig& cfg, const std::string& scores_csv, double fx, double fy,
                 const std::string& out) {
    const VirtualDepthSpec vspec = cfg.virtual_depth();
    const FixedDepthSpec fspec = cfg.fixed_depth();
    const std::vector<double> s_v = read_scores(scores_csv);
    if (static_cast<int>(s_v.size()) != vspec.bins)
        throw config_error("score file has " + std::to_string(s_v.size()) + " rows, expected " +
                           std::to_string(vspec.bins));
    const double dr = real_bin_size(vspec, real_focal(fx, fy));
    const std::vector<double> s_f = map_scores(s_v, vspec, fspec, dr);
    write_mapped_scores(bin_centers(fspec), s_f, out);
    std::cout << "wrote " << out << " (real bin size " << fmt_double(dr) << " m)\n";
    return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& report) {
    const std::vector<CriterionResult> results = run_all_checks(cfg);

    std::ofstream csv(report);
    if (!csv) throw format_error("cannot open '" + report + "' for writing");
    csv << "criterion,check,passed,measured,bound\n";

    bool all_ok = true;
    for (const CriterionResult& cr : results) {
        for (const CheckResult& c : cr.checks) {
            csv << cr.id << ',' << c.name << ',' << (c.passed ? 1 : 0) << ',' << fmt_double(c.measured)
                << ',' << fmt_double(c.bound) << "\n";
            if (!c.passed) {
                all_ok = false;
                std::cout << "FAIL " << c.name << ": measured " << fmt_double(c.measured) << " vs bound "
                          << fmt_double(c.bound) << "\n";
            }
        }
        std::cout << (cr.passed() ? "pass" : "FAIL") << "  criterion " << cr.id << ": " << cr.label << "\n";
        all_ok = all_ok && cr.passed();
    }
    std::cout << "report: " << report << "\n";
    return all_ok ? 0 : 1;
}

int cmd_revolve(const RunConfig& cfg, const std::vector<double>& angles_deg, const std::string& out) {
    const GridSpec grid = cfg.grid();
    const Vec2 center = rig_center(cfg.rig());
    const SyntheticScene scene = SyntheticScene::random(grid, center, 5, cfg.seed);
    const Kernel ker = random_revolve_kernel(cfg.kernel_extent, 0.3, cfg.kernel_seed);

    std::ofstream csv(out);
    if (!csv) throw format_error("cannot open '" + out + "' for writing");
    csv << "angle_deg,operator,rel_l2,max_abs,interior_margin\n";
    for (double deg : angles_deg) {
        const RevolveReport rep = run_revolve(scene, ker, deg * kPi / 180.0);
        csv << fmt_double(deg) << ",aeconv," << fmt_double(rep.aeconv_rel_l2) << ','
            << fmt_double(rep.max_abs_aeconv) << ',' << rep.interior_margin << "\n";
        csv << fmt_double(deg) << ",standard," << fmt_double(rep.standard_rel_l2) << ','
            << fmt_double(rep.max_abs_standard) << ',' << rep.interior_margin << "\n";
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_bench(const RunConfig& cfg, const std::vector<std::string>& size_tokens, int reps,
              const std::string& out) {
    std::vector<BenchSize> sizes;
    for (const std::string& tok : size_tokens) sizes.push_back(parse_bench_size(tok));
    const std::vector<BenchRow> rows = run_bench(cfg, sizes, reps);

    std::ofstream csv(out);
    if (!csv) throw format_error("cannot open '" + out + "' for writing");
    csv << "operator,grid,channels,k,ns_per_cell\n";
    for (const BenchRow& r : rows) {
        csv << r.op << ',' << r.height << 'x' << r.width << ',' << r.channels << ',' << r.kernel_extent
            << ',' << fmt_double(r.ns_per_cell) << "\n";
        std::cout << r.op << " " << r.height << "x" << r.width << "x" << r.channels
                  << ": " << fmt_double(r.ns_per_cell) << " ns/cell\n";
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"azimuth-equivariant BEV kernels"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "key=value config file (defaults used when omitted)");

    std::string az_out, rad_out;
    CLI::App* field = app.add_subcommand("field", "write the azimuth and radial basis fields as tensors");
    field->add_option("--azimuth-out", az_out, "output path for the azimuth tensor");
    field->add_option("--radial-out", rad_out, "output path for the radial unit-vector tensor");

    std::string conv_in, conv_out, conv_op = "aeconv";
    bool conv_naive = false, conv_zero_az = false;
    CLI::App* conv = app.add_subcommand("conv", "convolve an input tensor");
    conv->add_option("-i,--input", conv_in, "input feature tensor (rank 3)")->required();
    conv->add_option("-o,--output", conv_out, "output tensor path")->required();
    conv->add_option("--operator", conv_op, "aeconv or standard")->check(CLI::IsMember({"aeconv", "standard"}));
    conv->add_flag("--naive", conv_naive, "use the naive aeconv path instead of the gather plan");
    conv->add_flag("--zero-azimuth", conv_zero_az,
                   "pin the azimuth to 0 everywhere (aeconv then reduces to standard)");

    std::string enc_boxes, enc_res, enc_anchors;
    CLI::App* enc = app.add_subcommand("encode", "encode ground-truth boxes into anchor residuals");
    enc->add_option("-b,--boxes", enc_boxes, "input boxes CSV")->required();
    enc->add_option("-o,--residuals", enc_res, "output residuals CSV")->required();
    enc->add_option("-a,--anchors", enc_anchors, "output anchor-locations CSV")->required();

    std::string dec_res, dec_anchors, dec_boxes;
    CLI::App* dec = app.add_subcommand("decode", "decode anchor residuals back into boxes");
    dec->add_option("-r,--residuals", dec_res, "input residuals CSV")->required();
    dec->add_option("-a,--anchors", dec_anchors, "input anchor-locations CSV")->required();
    dec->add_option("-o,--boxes", dec_boxes, "output boxes CSV")->required();

    std::string md_scores, md_out;
    double md_fx = 0.0, md_fy = 0.0;
    CLI::App* md = app.add_subcommand("mapdepth", "map virtual depth scores onto the fixed bin layout");
    md->add_option("-s,--scores", md_scores, "virtual score CSV (one 'score' column)")->required();
    md->add_option("--fx", md_fx, "camera focal length x, pixels")->required();
    md->add_option("--fy", md_fy, "camera focal length y, pixels")->required();
    md->add_option("-o,--output", md_out, "output fixed-score CSV")->required();

    std::string check_report;
    CLI::App* check = app.add_subcommand("check", "run the full property suite; exit 0 iff all pass");
    check->add_option("--report", check_report, "per-check CSV report path");

    std::vector<double> rev_angles{30.0, 60.0, 90.0, 120.0};
    std::string rev_out;
    CLI::App* rev = app.add_subcommand("revolve", "equivariance report for a revolved synthetic scene");
    rev->add_option("--angles", rev_angles, "rotation angles in degrees")->delimiter(',');
    rev->add_option("-o,--output", rev_out, "output CSV path");

    std::vector<std::string> bench_sizes{"32x32x4", "64x64x8"};
    int bench_reps = 5;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "time standard vs naive vs planned convolution");
    bench->add_option("--sizes", bench_sizes, "grid sizes as HxWxC tokens")->delimiter(',');
    bench->add_option("--reps", bench_reps, "timed repetitions (median reported)")->check(CLI::Range(5, 1000));
    bench->add_option("-o,--output", bench_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_path);
        if (field->parsed()) {
            if (az_out.empty()) az_out = out_path(cfg, "azimuth.aebf");
            if (rad_out.empty()) rad_out = out_path(cfg, "radial.aebf");
            return cmd_field(cfg, az_out, rad_out);
        }
        if (conv->parsed()) return cmd_conv(cfg, conv_in, conv_op, conv_out, conv_naive, conv_zero_az);
        if (enc->parsed()) return cmd_encode(cfg, enc_boxes, enc_res, enc_anchors);
        if (dec->parsed()) return cmd_decode(cfg, dec_res, dec_anchors, dec_boxes);
        if (md->parsed()) return cmd_mapdepth(cfg, md_scores, md_fx, md_fy, md_out);
        if (check->parsed()) {
            if (check_report.empty()) check_report = out_path(cfg, "checks.csv");
            return cmd_check(cfg, check_report);
        }
        if (rev->parsed()) {
            if (rev_out.empty()) rev_out = out_path(cfg, "revolve.csv");
            return cmd_revolve(cfg, rev_angles, rev_out);
        }
        if (bench->parsed()) {
            if (bench_out.empty()) bench_out = out_path(cfg, "bench.csv");
            return cmd_bench(cfg, bench_sizes, bench_reps, bench_out);
        }
    } catch (const aebev::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

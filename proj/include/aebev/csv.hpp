#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aebev/anchor.hpp"
#include "aebev/core.hpp"

// CSV schemas. Fixed column sets, no optional columns, headers always
// written and verified on read. Doubles are printed with 17 significant
// digits so files round-trip bit-exactly.

namespace aebev {

inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

struct CsvReader {
    std::ifstream in;
    std::string where;
    int lineno = 0;

    CsvReader(const std::string& path, const std::string& header) : in(path), where(path) {
        if (!in) throw format_error("cannot open '" + path + "'");
        std::string line;
        if (!std::getline(in, line)) throw format_error(where + ": empty file, expected header '" + header + "'");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != header)
            throw format_error(where + ": expected header '" + header + "', got '" + line + "'");
    }

    // Returns false at EOF; otherwise fills exactly `n` doubles.
    bool row(double* vals, size_t n) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line == "\r") continue;
            const std::vector<std::string> cols = split_csv_line(line);
            if (cols.size() != n)
                throw format_error(where + " line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(n) + " columns, got " + std::to_string(cols.size()));
            for (size_t i = 0; i < n; ++i) {
                try {
                    size_t used = 0;
                    vals[i] = std::stod(cols[i], &used);
                    if (used != cols[i].size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw format_error(where + " line " + std::to_string(lineno) + ": bad number '" +
                                       cols[i] + "'");
                }
            }
            return true;
        }
        return false;
    }
};

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

// --- boxes ------------------------------------------------------------------

inline constexpr const char* kBoxesHeader = "x,y,z,l,w,h,theta,vx,vy";

inline std::vector<BoxState> read_boxes(const std::string& path) {
    detail::CsvReader r(path, kBoxesHeader);
    std::vector<BoxState> boxes;
    double v[9];
    while (r.row(v, 9)) {
        BoxState b;
        b.center = {v[0], v[1]};
        b.z = v[2];
        b.length = v[3];
        b.width = v[4];
        b.height = v[5];
        b.theta = v[6];
        b.velocity = {v[7], v[8]};
        boxes.push_back(b);
    }
    return boxes;
}

inline void write_boxes(const std::vector<BoxState>& boxes, const std::string& path) {
    auto out = detail::open_out(path);
    out << kBoxesHeader << "\n";
    for (const BoxState& b : boxes) {
        out << fmt_double(b.center.x) << ',' << fmt_double(b.center.y) << ',' << fmt_double(b.z) << ','
            << fmt_double(b.length) << ',' << fmt_double(b.width) << ',' << fmt_double(b.height) << ','
            << fmt_double(b.theta) << ',' << fmt_double(b.velocity.x) << ',' << fmt_double(b.velocity.y)
            << "\n";
    }
}

// --- residuals ----------------------------------------------------------------

inline constexpr const char* kResidualsHeader = "dr,do,dz,dl,dw,dh,dtheta,vr,vo";

inline std::vector<ResidualState> read_residuals(const std::string& path) {
    detail::CsvReader r(path, kResidualsHeader);
    std::vector<ResidualState> res;
    double v[9];
    while (r.row(v, 9)) {
        ResidualState s;
        s.d_r = v[0];
        s.d_o = v[1];
        s.d_z = v[2];
        s.d_l = v[3];
        s.d_w = v[4];
        s.d_h = v[5];
        s.d_theta = v[6];
        s.v_r = v[7];
        s.v_o = v[8];
        res.push_back(s);
    }
    return res;
}

inline void write_residuals(const std::vector<ResidualState>& res, const std::string& path) {
    auto out = detail::open_out(path);
    out << kResidualsHeader << "\n";
    for (const ResidualState& s : res) {
        out << fmt_double(s.d_r) << ',' << fmt_double(s.d_o) << ',' << fmt_double(s.d_z) << ','
            << fmt_double(s.d_l) << ',' << fmt_double(s.d_w) << ',' << fmt_double(s.d_h) << ','
            << fmt_double(s.d_theta) << ',' << fmt_double(s.v_r) << ',' << fmt_double(s.v_o) << "\n";
    }
}

// --- anchor locations (sidecar for decode) -----------------------------------

inline constexpr const char* kAnchorsHeader = "x,y";

inline std::vector<Vec2> read_anchors(const std::string& path) {
    detail::CsvReader r(path, kAnchorsHeader);
    std::vector<Vec2> pts;
    double v[2];
    while (r.row(v, 2)) pts.push_back({v[0], v[1]});
    return pts;
}

inline void write_anchors(const std::vector<Vec2>& pts, const std::string& path) {
    auto out = detail::open_out(path);
    out << kAnchorsHeader << "\n";
    for (Vec2 p : pts) out << fmt_double(p.x) << ',' << fmt_double(p.y) << "\n";
}

// --- depth scores -------------------------------------------------------------

inline constexpr const char* kScoresHeader = "score";

inline std::vector<double> read_scores(const std::string& path) {
    detail::CsvReader r(path, kScoresHeader);
    std::vector<double> scores;
    double v;
    while (r.row(&v, 1)) scores.push_back(v);
    return scores;
}

inline void write_scores(const std::vector<double>& scores, const std::string& path) {
    auto out = detail::open_out(path);
    out << kScoresHeader << "\n";
    for (double s : scores) out << fmt_double(s) << "\n";
}

inline void write_mapped_scores(const std::vector<double>& centers, const std::vector<double>& scores,
                                const std::string& path) {
    if (centers.size() != scores.size()) throw config_error("write_mapped_scores: size mismatch");
    auto out = detail::open_out(path);
    out << "bin,center_m,score\n";
    for (size_t i = 0; i < scores.size(); ++i) {
        out << i << ',' << fmt_double(centers[i]) << ',' << fmt_double(scores[i]) << "\n";
    }
}

}  // namespace aebev

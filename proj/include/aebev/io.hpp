#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aebev/core.hpp"
#include "aebev/geometry.hpp"
#include "aebev/tensor.hpp"

// File formats.
//
// Binary tensor ("AEBF"): magic "AEBF", u16 version (= 1), u8 rank,
// rank x u32 dims, then product(dims) IEEE-754 binary32 values, row-major
// with the last dimension fastest. All integers and floats little-endian.
// Values are widened to double on read and quantized to float on write.
//
// Camera rig: line-oriented text,
//   camera <name> x=<m> y=<m> yaw=<rad> fx=<px> fy=<px>
// with blank lines and '#' comments ignored.

namespace aebev {

struct TensorData {
    std::vector<uint32_t> dims;
    std::vector<double> values;

    size_t element_count() const {
        size_t n = 1;
        for (uint32_t d : dims) n *= d;
        return n;
    }
};

namespace detail {

inline constexpr char kTensorMagic[4] = {'A', 'E', 'B', 'F'};
inline constexpr uint16_t kTensorVersion = 1;
inline constexpr uint64_t kMaxTensorElements = uint64_t(1) << 28;

inline void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::string& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

struct ByteReader {
    const uint8_t* data;
    size_t size;
    size_t pos = 0;

    void require(size_t n, const char* what) const {
        if (pos + n > size)
            throw format_error(std::string("tensor file truncated reading ") + what + " at byte offset " +
                               std::to_string(pos));
    }
    uint8_t u8(const char* what) {
        require(1, what);
        return data[pos++];
    }
    uint16_t u16(const char* what) {
        require(2, what);
        uint16_t v = static_cast<uint16_t>(data[pos]) | static_cast<uint16_t>(data[pos + 1]) << 8;
        pos += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        require(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    float f32(const char* what) {
        const uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
};

}  // namespace detail

inline std::string encode_tensor(const TensorData& t) {
    if (t.dims.empty()) throw config_error("encode_tensor: rank must be at least 1");
    if (t.dims.size() > 255) throw config_error("encode_tensor: rank exceeds 255");
    uint64_t n = 1;
    for (uint32_t d : t.dims) {
        if (d == 0) throw config_error("encode_tensor: zero dimension");
        n *= d;
        if (n > detail::kMaxTensorElements) throw config_error("encode_tensor: tensor too large");
    }
    if (t.values.size() != n) throw config_error("encode_tensor: dims/payload mismatch");

    std::string out;
    out.reserve(16 + 4 * t.values.size());
    out.append(detail::kTensorMagic, 4);
    detail::put_u16(out, detail::kTensorVersion);
    out.push_back(static_cast<char>(t.dims.size()));
    for (uint32_t d : t.dims) detail::put_u32(out, d);
    for (double v : t.values) detail::put_f32(out, static_cast<float>(v));
    return out;
}

inline TensorData decode_tensor(const uint8_t* bytes, size_t size) {
    detail::ByteReader r{bytes, size};
    r.require(4, "magic");
    if (std::memcmp(bytes, detail::kTensorMagic, 4) != 0)
        throw format_error("bad tensor magic at byte offset 0");
    r.pos = 4;
    const uint16_t version = r.u16("version");
    if (version != detail::kTensorVersion)
        throw format_error("unsupported tensor version " + std::to_string(version) + " at byte offset 4");
    const uint8_t rank = r.u8("rank");
    if (rank == 0) throw format_error("tensor rank 0 at byte offset 6 (minimum rank 1)");

    TensorData t;
    uint64_t n = 1;
    for (int i = 0; i < rank; ++i) {
        const size_t off = r.pos;
        const uint32_t d = r.u32("dims");
        if (d == 0) throw format_error("zero dimension at byte offset " + std::to_string(off));
        n *= d;
        if (n > detail::kMaxTensorElements)
            throw format_error("tensor dims overflow at byte offset " + std::to_string(off));
        t.dims.push_back(d);
    }
    t.values.resize(n);
    for (uint64_t i = 0; i < n; ++i) t.values[i] = static_cast<double>(r.f32("payload"));
    if (r.pos != size)
        throw format_error("trailing bytes after payload at byte offset " + std::to_string(r.pos));
    return t;
}

inline void write_tensor(const TensorData& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot open '" + path + "' for writing");
    const std::string bytes = encode_tensor(t);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw format_error("short write to '" + path + "'");
}

inline TensorData read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_tensor(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
    } catch (const format_error& e) {
        throw format_error(path + ": " + e.what());
    }
}

inline TensorData to_tensor(const FeatureMap& map) {
    TensorData t;
    t.dims = {static_cast<uint32_t>(map.channels), static_cast<uint32_t>(map.height),
              static_cast<uint32_t>(map.width)};
    t.values = map.data;
    return t;
}

inline FeatureMap to_feature_map(const TensorData& t) {
    if (t.dims.size() != 3)
        throw format_error("feature map tensor must have rank 3, got rank " + std::to_string(t.dims.size()));
    FeatureMap m(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]));
    m.data = t.values;
    return m;
}

inline Kernel to_kernel(const TensorData& t) {
    if (t.dims.size() != 4)
        throw format_error("kernel tensor must have rank 4 [out,in,k,k], got rank " +
                           std::to_string(t.dims.size()));
    if (t.dims[2] != t.dims[3]) throw format_error("kernel tensor must be square in its last two dims");
    Kernel k(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]), static_cast<int>(t.dims[2]));
    k.weights = t.values;
    return k;
}

// --- camera rig -------------------------------------------------------------

inline CameraRig parse_rig(std::istream& in, const std::string& where = "rig") {
    CameraRig rig;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fail = [&](const std::string& msg) {
            throw format_error(where + " line " + std::to_string(lineno) + ": " + msg);
        };
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (tok != "camera") fail("expected 'camera', got '" + tok + "'");
        Camera cam;
        if (!(ls >> cam.name)) fail("missing camera name");
        bool seen[5] = {false, false, false, false, false};
        static const char* keys[5] = {"x", "y", "yaw", "fx", "fy"};
        while (ls >> tok) {
            if (tok[0] == '#') break;
            const size_t eq = tok.find('=');
            if (eq == std::string::npos) fail("expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            double value = 0.0;
            try {
                size_t used = 0;
                value = std::stod(tok.substr(eq + 1), &used);
                if (used != tok.size() - eq - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail("bad numeric value in '" + tok + "'");
            }
            int ki = -1;
            for (int i = 0; i < 5; ++i)
                if (key == keys[i]) ki = i;
            if (ki < 0) fail("unknown key '" + key + "'");
            if (seen[ki]) fail("duplicate key '" + key + "'");
            seen[ki] = true;
            switch (ki) {
                case 0: cam.x = value; break;
                case 1: cam.y = value; break;
                case 2: cam.yaw = value; break;
                case 3: cam.fx = value; break;
                case 4: cam.fy = value; break;
            }
        }
        for (int i = 0; i < 5; ++i)
            if (!seen[i]) fail(std::string("missing key '") + keys[i] + "'");
        if (!(cam.fx > 0.0) || !(cam.fy > 0.0)) fail("focal lengths must be positive");
        rig.cameras.push_back(cam);
    }
    validate(rig);
    return rig;
}

inline CameraRig read_rig(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open rig file '" + path + "'");
    return parse_rig(in, path);
}

}  // namespace aebev

// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/error.hpp>
#include <splatpose/ply.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

static_assert(std::endian::native == std::endian::little, "PLY I/O assumes a little-endian host");

namespace splatpose {

namespace {

constexpr std::array<const char *, GaussianPrimitive::kParamCount> kFieldNames = {
    "x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2", "opacity", "scale_0", "scale_1", "scale_2",
    "rot_0", "rot_1", "rot_2", "rot_3"};

std::array<double, GaussianPrimitive::kParamCount>
pack(const GaussianPrimitive &g) {
    return {g.position.x(),     g.position.y(),     g.position.z(),     g.color_logits.x(),
            g.color_logits.y(), g.color_logits.z(), g.opacity_logit,    g.log_scales.x(),
            g.log_scales.y(),   g.log_scales.z(),   g.rotation[0],      g.rotation[1],
            g.rotation[2],      g.rotation[3]};
}

GaussianPrimitive
unpack(const std::array<double, GaussianPrimitive::kParamCount> &v) {
    GaussianPrimitive g;
    g.position = {v[0], v[1], v[2]};
    g.color_logits = {v[3], v[4], v[5]};
    g.opacity_logit = v[6];
    g.log_scales = {v[7], v[8], v[9]};
    g.rotation = {v[10], v[11], v[12], v[13]};
    return g;
}

struct Property {
    std::string name;
    std::size_t size = 0;
    bool is_float = false;
    bool is_double = false;
};

std::size_t
type_size(const std::string &type, bool &is_float, bool &is_double) {
    is_float = type == "float" || type == "float32";
    is_double = type == "double" || type == "float64";
    if (is_double) {
        return 8;
    }
    if (is_float || type == "int" || type == "int32" || type == "uint" || type == "uint32") {
        return 4;
    }
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") {
        return 2;
    }
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") {
        return 1;
    }
    return 0;
}

} // namespace

void
write_ply(std::ostream &out, const SceneModel &scene, PlyPrecision precision) {
    const bool f64 = precision == PlyPrecision::kFloat64;
    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << scene.size() << "\n";
    for (const char *name : kFieldNames) {
        out << "property " << (f64 ? "double " : "float ") << name << "\n";
    }
    out << "end_header\n";
    for (const auto &g : scene.primitives()) {
        for (double v : pack(g)) {
            if (f64) {
                out.write(reinterpret_cast<const char *>(&v), sizeof v);
            } else {
                const auto f = static_cast<float>(v);
                out.write(reinterpret_cast<const char *>(&f), sizeof f);
            }
        }
    }
}

void
write_ply(const std::filesystem::path &path, const SceneModel &scene, PlyPrecision precision) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError(path.string(), 0, "cannot open for writing");
    }
    write_ply(out, scene, precision);
    if (!out) {
        throw ParseError(path.string(), 0, "write failed");
    }
}

SceneModel
read_ply(std::istream &in, const std::string &name) {
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) {
            throw ParseError(name, line_no, "unexpected end of header");
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
    };

    next_line();
    if (line != "ply") {
        throw ParseError(name, line_no, "missing 'ply' magic");
    }
    std::size_t vertex_count = 0;
    bool in_vertex = false;
    bool seen_format = false;
    std::vector<Property> props;
    for (;;) {
        next_line();
        std::istringstream ss(line);
        std::string kw;
        ss >> kw;
        if (kw == "end_header") {
            break;
        }
        if (kw == "comment" || kw == "obj_info" || kw.empty()) {
            continue;
        }
        if (kw == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt != "binary_little_endian") {
                throw ParseError(name, line_no, "only binary_little_endian PLY is supported");
            }
            seen_format = true;
        } else if (kw == "element") {
            std::string el;
            std::size_t n = 0;
            ss >> el >> n;
            if (!ss) {
                throw ParseError(name, line_no, "malformed element line");
            }
            in_vertex = el == "vertex";
            if (in_vertex) {
                vertex_count = n;
            } else if (n != 0) {
                throw ParseError(name, line_no, "unsupported non-empty element '" + el + "'");
            }
        } else if (kw == "property") {
            std::string type, pname;
            ss >> type;
            if (type == "list") {
                throw ParseError(name, line_no, "list properties are not supported");
            }
            ss >> pname;
            Property p;
            p.name = pname;
            p.size = type_size(type, p.is_float, p.is_double);
            if (p.size == 0 || pname.empty()) {
                throw ParseError(name, line_no, "unknown property type '" + type + "'");
            }
            if (in_vertex) {
                props.push_back(p);
            }
        } else {
            throw ParseError(name, line_no, "unexpected header keyword '" + kw + "'");
        }
    }
    if (!seen_format) {
        throw ParseError(name, line_no, "missing format line");
    }

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < props.size(); ++i) {
        index[props[i].name] = i;
    }
    std::array<std::size_t, GaussianPrimitive::kParamCount> slots{};
    for (std::size_t f = 0; f < kFieldNames.size(); ++f) {
        auto it = index.find(kFieldNames[f]);
        if (it == index.end()) {
            throw ParseError(name, 0, std::string("missing vertex property '") + kFieldNames[f] + "'");
        }
        const Property &p = props[it->second];
        if (!p.is_float && !p.is_double) {
            throw ParseError(name, 0, std::string("property '") + kFieldNames[f] + "' must be float or double");
        }
        slots[f] = it->second;
    }
    std::vector<std::size_t> offsets(props.size());
    std::size_t stride = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        offsets[i] = stride;
        stride += props[i].size;
    }

    std::vector<GaussianPrimitive> prims;
    prims.reserve(vertex_count);
    std::vector<char> row(stride);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        if (!in.read(row.data(), static_cast<std::streamsize>(stride))) {
            throw ParseError(name, 0, "truncated vertex data at vertex " + std::to_string(v));
        }
        std::array<double, GaussianPrimitive::kParamCount> vals{};
        for (std::size_t f = 0; f < slots.size(); ++f) {
            const Property &p = props[slots[f]];
            const char *src = row.data() + offsets[slots[f]];
            if (p.is_double) {
                std::memcpy(&vals[f], src, 8);
            } else {
                float x;
                std::memcpy(&x, src, 4);
                vals[f] = x;
            }
        }
        prims.push_back(unpack(vals));
    }
    return SceneModel(std::move(prims));
}

SceneModel
read_ply(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    return read_ply(in, path.string());
}

} // namespace splatpose

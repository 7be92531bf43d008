#include "rlw/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "rlw/errors.hpp"

namespace rlw {

namespace {

constexpr const char* kMagic = "RLWFIELD v1";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// strict full-token double parse
double parse_value(const std::string& tok, int line) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0') {
        throw ParseError("line " + std::to_string(line) + ": cannot parse '" + tok +
                             "' as a number",
                         line);
    }
    return v;
}

}  // namespace

void write_field(const std::string& path, const Field& u, double t) {
    if (!u.grid) throw DimensionError("write_field: field has no grid");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ConfigError("cannot open '" + path + "' for writing");

    std::fprintf(f, "%s\n", kMagic);
    if (u.grid->dim() == 1) {
        const Axis& ax = u.grid->axis(0);
        std::fprintf(f, "1 %d %s %s %s\n", ax.n, fmt(ax.a).c_str(), fmt(ax.b).c_str(),
                     fmt(t).c_str());
    } else {
        const Axis& ax = u.grid->axis(0);
        const Axis& ay = u.grid->axis(1);
        std::fprintf(f, "2 %d %d %s %s %s %s %s\n", ax.n, ay.n, fmt(ax.a).c_str(),
                     fmt(ax.b).c_str(), fmt(ay.a).c_str(), fmt(ay.b).c_str(), fmt(t).c_str());
    }
    for (double v : u.values) std::fprintf(f, "%s\n", fmt(v).c_str());
    if (std::fclose(f) != 0) throw ConfigError("write failed for '" + path + "'");
}

LoadedField read_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: empty file", 1);
    if (line != kMagic) {
        throw ParseError("line 1: expected '" + std::string(kMagic) + "', got '" + line + "'",
                         1);
    }

    if (!std::getline(in, line)) throw ParseError("line 2: missing header", 2);
    std::istringstream hdr(line);
    int dim = 0;
    if (!(hdr >> dim)) throw ParseError("line 2: missing dimension", 2);
    if (dim != 1 && dim != 2) {
        throw ParseError("line 2: unsupported dimension " + std::to_string(dim), 2);
    }

    GridPtr g;
    double t = 0.0;
    try {
        if (dim == 1) {
            int n = 0;
            double a = 0.0, b = 0.0;
            if (!(hdr >> n >> a >> b >> t)) throw ParseError("line 2: malformed 1D header", 2);
            g = make_grid({a, b}, n);
        } else {
            int nx = 0, ny = 0;
            double ax = 0.0, bx = 0.0, ay = 0.0, by = 0.0;
            if (!(hdr >> nx >> ny >> ax >> bx >> ay >> by >> t)) {
                throw ParseError("line 2: malformed 2D header", 2);
            }
            g = make_grid({ax, bx}, {ay, by}, nx, ny);
        }
    } catch (const ConfigError& e) {
        throw ParseError("line 2: " + std::string(e.what()), 2);
    }
    std::string extra;
    if (hdr >> extra) throw ParseError("line 2: trailing token '" + extra + "'", 2);
    if (!std::isfinite(t)) throw ParseError("line 2: non-finite time", 2);

    LoadedField out;
    out.u = Field(g);
    out.t = t;
    const std::size_t total = out.u.values.size();
    std::size_t count = 0;
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;  // tolerate trailing blank lines
        if (count >= total) {
            throw ParseError("line " + std::to_string(lineno) + ": trailing data after " +
                                 std::to_string(total) + " values",
                             lineno);
        }
        const double v = parse_value(line, lineno);
        if (!std::isfinite(v)) {
            throw ParseError("line " + std::to_string(lineno) + ": non-finite value", lineno);
        }
        out.u.values[count++] = v;
    }
    if (count != total) {
        throw ParseError("expected " + std::to_string(total) + " values, got " +
                             std::to_string(count),
                         lineno + 1);
    }
    return out;
}

}  // namespace rlw

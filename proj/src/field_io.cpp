#include "parafree/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace parafree {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; this platform is not");

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw std::runtime_error("field file '" + path + "': " + why);
}

}  // namespace

void write_field(const Field& f, const std::string& path) {
    const Grid& g = f.grid;
    if (f.data.size() != g.size()) fail(path, "payload does not match the grid");
    char header[192];
    const int len =
        std::snprintf(header, sizeof header,
                      "PARAFREE-FIELD v1; n=%d; nx=%d; nt=%d; L=%.17g; t0=%.17g; t1=%.17g;\n",
                      g.n, g.nx, g.nt, g.L, g.t0, g.t1);
    if (len <= 0 || len >= static_cast<int>(sizeof header)) fail(path, "header formatting failed");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out.write(header, len);
    out.write(reinterpret_cast<const char*>(f.data.data()),
              static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!out) fail(path, "write failed");
}

Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    std::string header;
    if (!std::getline(in, header)) fail(path, "missing header line");

    int n = 0, nx = 0, nt = 0, consumed = 0;
    double L = 0.0, t0 = 0.0, t1 = 0.0;
    const int got =
        std::sscanf(header.c_str(), "PARAFREE-FIELD v1; n=%d; nx=%d; nt=%d; L=%lf; t0=%lf; t1=%lf;%n",
                    &n, &nx, &nt, &L, &t0, &t1, &consumed);
    if (got != 6 || consumed != static_cast<int>(header.size())) {
        fail(path, "malformed header '" + header + "'");
    }

    Grid g;
    try {
        g = grid_from_header(n, nx, nt, L, t0, t1);
    } catch (const std::exception& e) {
        fail(path, e.what());
    }

    Field f = make_field(g);
    in.read(reinterpret_cast<char*>(f.data.data()),
            static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(f.data.size() * sizeof(double))) {
        fail(path, "payload shorter than the header promises");
    }
    if (in.peek() != std::ifstream::traits_type::eof()) {
        fail(path, "trailing bytes after the payload");
    }
    return f;
}

void write_mask(const Mask& m, const std::string& path) {
    Field f = make_field(m.grid);
    for (std::size_t p = 0; p < f.data.size(); ++p) f.data[p] = m.data[p] ? 1.0 : 0.0;
    write_field(f, path);
}

Mask read_mask(const std::string& path) {
    const Field f = read_field(path);
    Mask m = make_mask(f.grid);
    for (std::size_t p = 0; p < f.data.size(); ++p) {
        if (f.data[p] != 0.0 && f.data[p] != 1.0) fail(path, "mask values must be 0 or 1");
        m.data[p] = f.data[p] == 1.0 ? 1 : 0;
    }
    return m;
}

}  // namespace parafree

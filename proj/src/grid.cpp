#include "parafree/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parafree {

namespace {

void check_box(int n, int nx, double L, double t0, double t1) {
    if (n != 1 && n != 2) {
        throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(n));
    }
    if (nx < 3 || nx % 2 == 0) {
        throw std::invalid_argument("grid needs an odd node count >= 3 per axis, got " +
                                    std::to_string(nx));
    }
    if (!(L > 0.0)) throw std::invalid_argument("grid half-width must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("grid needs t1 > t0");
}

}  // namespace

bool Grid::same_layout(const Grid& other) const {
    return n == other.n && nx == other.nx && nt == other.nt && std::abs(L - other.L) < 1e-12 &&
           std::abs(t0 - other.t0) < 1e-12 && std::abs(t1 - other.t1) < 1e-12;
}

Grid make_grid(int n, int nx, double L, double t0, double t1, double kappa) {
    check_box(n, nx, L, t0, t1);
    if (!(kappa > 0.0)) throw std::invalid_argument("time step ratio must be positive");
    Grid g;
    g.n = n;
    g.nx = nx;
    g.L = L;
    g.t0 = t0;
    g.t1 = t1;
    g.h = 2.0 * L / (nx - 1);
    const double step_cap = kappa * g.h * g.h;
    const int nsteps = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step_cap - 1e-9)));
    g.nt = nsteps + 1;
    g.dt = (t1 - t0) / nsteps;
    return g;
}

Grid grid_from_header(int n, int nx, int nt, double L, double t0, double t1) {
    check_box(n, nx, L, t0, t1);
    if (nt < 2) throw std::invalid_argument("grid needs at least 2 time levels");
    Grid g;
    g.n = n;
    g.nx = nx;
    g.nt = nt;
    g.L = L;
    g.t0 = t0;
    g.t1 = t1;
    g.h = 2.0 * L / (nx - 1);
    g.dt = (t1 - t0) / (nt - 1);
    return g;
}

Field make_field(const Grid& grid, double fill) {
    Field f;
    f.grid = grid;
    f.data.assign(grid.size(), fill);
    return f;
}

Mask make_mask(const Grid& grid, bool fill) {
    Mask m;
    m.grid = grid;
    m.data.assign(grid.size(), fill ? 1 : 0);
    return m;
}

std::size_t count_true(const Mask& mask) {
    std::size_t count = 0;
    for (const std::uint8_t v : mask.data) count += v != 0;
    return count;
}

std::size_t count_mismatch(const Mask& a, const Mask& b) {
    if (!a.grid.same_layout(b.grid)) {
        throw std::invalid_argument("mask layouts differ, cannot compare");
    }
    std::size_t count = 0;
    for (std::size_t p = 0; p < a.data.size(); ++p) count += (a.data[p] != 0) != (b.data[p] != 0);
    return count;
}

bool mask_flip_near(const Mask& mask, std::size_t flat, int steps) {
    const Grid& g = mask.grid;
    int i = 0, j = 0, k = 0;
    g.node_coords(flat, &i, &j, &k);
    const bool here = mask[flat];
    const int span = g.n == 2 ? steps : 0;
    for (int dj = -span; dj <= span; ++dj) {
        const int jj = j + dj;
        if (jj < 0 || (g.n == 2 && jj >= g.nx)) continue;
        for (int di = -steps; di <= steps; ++di) {
            const int ii = i + di;
            if (ii < 0 || ii >= g.nx) continue;
            const std::size_t q = g.n == 1 ? g.flat(ii, k) : g.flat(ii, jj, k);
            if (mask[q] != here) return true;
        }
    }
    return false;
}

namespace {

/// Splits a continuous axis coordinate into a base index and weight, snapping
/// to exact nodes so resampling aligned grids stays bitwise.
void axis_split(double s, int count, const char* axis, int* base, double* frac) {
    if (s < -1e-6 || s > count - 1 + 1e-6) {
        throw std::out_of_range(std::string("sample point leaves the grid along ") + axis);
    }
    int i = static_cast<int>(std::floor(s));
    double w = s - i;
    if (w < 1e-9) {
        w = 0.0;
    } else if (w > 1.0 - 1e-9) {
        ++i;
        w = 0.0;
    }
    if (i < 0) {
        i = 0;
        w = 0.0;
    }
    if (i >= count - 1) {
        i = count - 1;
        w = 0.0;
    }
    *base = i;
    *frac = w;
}

}  // namespace

double sample(const Field& f, const double* x, double t) {
    const Grid& g = f.grid;
    int i = 0, k = 0;
    double wx = 0.0, wt = 0.0;
    axis_split((x[0] + g.L) / g.h, g.nx, "x", &i, &wx);
    axis_split((t - g.t0) / g.dt, g.nt, "t", &k, &wt);

    const auto lerp = [](double a, double b, double w) { return w == 0.0 ? a : (1.0 - w) * a + w * b; };

    if (g.n == 1) {
        const int i1 = wx == 0.0 ? i : i + 1;
        const int k1 = wt == 0.0 ? k : k + 1;
        const double lo = lerp(f.at(i, k), f.at(i1, k), wx);
        const double hi = wt == 0.0 ? lo : lerp(f.at(i, k1), f.at(i1, k1), wx);
        return lerp(lo, hi, wt);
    }

    int j = 0;
    double wy = 0.0;
    axis_split((x[1] + g.L) / g.h, g.nx, "y", &j, &wy);
    const int i1 = wx == 0.0 ? i : i + 1;
    const int j1 = wy == 0.0 ? j : j + 1;
    const int k1 = wt == 0.0 ? k : k + 1;
    const auto plane = [&](int kk) {
        const double row0 = lerp(f.at(i, j, kk), f.at(i1, j, kk), wx);
        const double row1 = wy == 0.0 ? row0 : lerp(f.at(i, j1, kk), f.at(i1, j1, kk), wx);
        return lerp(row0, row1, wy);
    };
    const double lo = plane(k);
    return wt == 0.0 ? lo : lerp(lo, plane(k1), wt);
}

Field resample(const Field& f, const Grid& target) {
    if (f.grid.same_layout(target)) return f;
    if (f.grid.n != target.n) {
        throw std::invalid_argument("resample cannot change the spatial dimension");
    }
    Field out = make_field(target);
    double point[2] = {0.0, 0.0};
    for (std::size_t p = 0; p < out.data.size(); ++p) {
        double t = 0.0;
        target.node_point(p, &point[0], &point[1], &t);
        out.data[p] = sample(f, point, t);
    }
    return out;
}

}  // namespace parafree

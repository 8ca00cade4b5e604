#include "parafree/cylinder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parafree {

namespace {

double dist2(const Grid& g, const double* x0, int i, int j) {
    const double dx = g.x_of(i) - x0[0];
    double d2 = dx * dx;
    if (g.n == 2) {
        const double dy = g.x_of(j) - x0[1];
        d2 += dy * dy;
    }
    return d2;
}

bool in_ball(const Grid& g, const double* x0, double r, int i, int j) {
    return dist2(g, x0, i, j) <= r * r + 1e-12 * (1.0 + r * r);
}

}  // namespace

CylinderNodes classify_cylinder(const Grid& g, const double* x0, double t0, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
    const double eps_x = 1e-9 * g.h;
    const double eps_t = 1e-9 * g.dt;
    for (int a = 0; a < g.n; ++a) {
        if (x0[a] - r < -g.L - eps_x || x0[a] + r > g.L + eps_x) {
            throw std::invalid_argument("cylinder ball leaves the grid box");
        }
    }
    if (t0 - r * r < g.t0 - eps_t || t0 > g.t1 + eps_t) {
        throw std::invalid_argument("cylinder time window leaves the grid");
    }

    CylinderNodes nodes;
    nodes.k_bot = std::max(0, static_cast<int>(std::ceil((t0 - r * r - g.t0) / g.dt - 1e-9)));
    nodes.k_top =
        std::min(g.nt - 1, static_cast<int>(std::floor((t0 - g.t0) / g.dt + 1e-9)));
    if (nodes.k_top <= nodes.k_bot) {
        throw std::invalid_argument("cylinder is thinner than one time step");
    }

    const int i_lo = std::max(0, static_cast<int>(std::floor((x0[0] - r + g.L) / g.h)));
    const int i_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((x0[0] + r + g.L) / g.h)));
    int j_lo = 0, j_hi = 0;
    if (g.n == 2) {
        j_lo = std::max(0, static_cast<int>(std::floor((x0[1] - r + g.L) / g.h)));
        j_hi = std::min(g.nx - 1, static_cast<int>(std::ceil((x0[1] + r + g.L) / g.h)));
    }

    const auto stencil_inside = [&](int i, int j) {
        if (g.n == 1) {
            return i - 1 >= 0 && i + 1 <= g.nx - 1 && in_ball(g, x0, r, i - 1, 0) &&
                   in_ball(g, x0, r, i + 1, 0);
        }
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const int ii = i + di, jj = j + dj;
                if (ii < 0 || ii > g.nx - 1 || jj < 0 || jj > g.nx - 1) return false;
                if (!in_ball(g, x0, r, ii, jj)) return false;
            }
        }
        return true;
    };

    for (int k = nodes.k_bot; k <= nodes.k_top; ++k) {
        for (int j = j_lo; j <= j_hi; ++j) {
            for (int i = i_lo; i <= i_hi; ++i) {
                if (!in_ball(g, x0, r, i, j)) continue;
                const std::size_t p = g.n == 1 ? g.flat(i, k) : g.flat(i, j, k);
                if (k > nodes.k_bot && stencil_inside(i, j)) {
                    nodes.interior.push_back(p);
                } else {
                    nodes.boundary.push_back(p);
                }
            }
            if (g.n == 1) break;
        }
    }
    return nodes;
}

bool in_cylinder(const Grid& g, const double* x0, double t0, double r, std::size_t flat) {
    int i = 0, j = 0, k = 0;
    g.node_coords(flat, &i, &j, &k);
    const double t = g.t_of(k);
    const double eps_t = 1e-9 * g.dt;
    if (t < t0 - r * r - eps_t || t > t0 + eps_t) return false;
    return in_ball(g, x0, r, i, j);
}

Mask cylinder_mask(const Grid& g, const double* x0, double t0, double r) {
    Mask m = make_mask(g);
    for (std::size_t p = 0; p < m.data.size(); ++p) {
        m.data[p] = in_cylinder(g, x0, t0, r, p) ? 1 : 0;
    }
    return m;
}

double measure(const Mask& mask, par::Mode mode) {
    const Grid& g = mask.grid;
    const int slabs = g.nt - 1;
    if (slabs <= 0) return 0.0;
    std::vector<long long> per_slab(static_cast<std::size_t>(slabs), 0);

    par::for_each(mode, static_cast<std::size_t>(slabs), [&](std::size_t k) {
        long long count = 0;
        if (g.n == 1) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                const int kk = static_cast<int>(k);
                if (mask.at(i, kk) && mask.at(i + 1, kk) && mask.at(i, kk + 1) &&
                    mask.at(i + 1, kk + 1)) {
                    ++count;
                }
            }
        } else {
            const int kk = static_cast<int>(k);
            for (int j = 0; j + 1 < g.nx; ++j) {
                for (int i = 0; i + 1 < g.nx; ++i) {
                    bool all = true;
                    for (int c = 0; c < 8 && all; ++c) {
                        all = mask.at(i + (c & 1), j + ((c >> 1) & 1), kk + ((c >> 2) & 1));
                    }
                    if (all) ++count;
                }
            }
        }
        per_slab[k] = count;
    });

    long long cells = 0;
    for (const long long c : per_slab) cells += c;
    const double cell_volume = (g.n == 1 ? g.h : g.h * g.h) * g.dt;
    return static_cast<double>(cells) * cell_volume;
}

}  // namespace parafree

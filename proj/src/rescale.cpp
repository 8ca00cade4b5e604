#include "parafree/rescale.hpp"

#include <cmath>
#include <stdexcept>

#include "parafree/differentials.hpp"

namespace parafree {

namespace {

void check_scale(const Field& u, const Grid& target, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("rescaling factor must be positive");
    if (u.grid.n != target.n) {
        throw std::invalid_argument("rescaling cannot change the spatial dimension");
    }
}

}  // namespace

Field rescale_field(const Field& u, const double* x0, double t0, double r, const Grid& target,
                    par::Mode mode) {
    check_scale(u, target, r);
    Field out = make_field(target);
    const double inv = 1.0 / (r * r);
    par::for_each(mode, out.data.size(), [&](std::size_t p) {
        double y[2] = {0.0, 0.0};
        double tau = 0.0;
        target.node_point(p, &y[0], &y[1], &tau);
        const double x[2] = {x0[0] + r * y[0], u.grid.n == 2 ? x0[1] + r * y[1] : 0.0};
        out.data[p] = sample(u, x, t0 + r * r * tau) * inv;
    });
    return out;
}

Field blowup_field(const Field& u, const double* x0, double t0, double r, const Grid& target,
                   par::Mode mode) {
    check_scale(u, target, r);
    const Grid& g = u.grid;
    const int i0 = static_cast<int>(std::lround((x0[0] + g.L) / g.h));
    const int j0 = g.n == 2 ? static_cast<int>(std::lround((x0[1] + g.L) / g.h)) : 0;
    const int k0 = static_cast<int>(std::lround((t0 - g.t0) / g.dt));
    const bool on_node = i0 >= 0 && i0 < g.nx && k0 >= 0 && k0 < g.nt &&
                         (g.n == 1 || (j0 >= 0 && j0 < g.nx)) &&
                         std::abs(g.x_of(i0) - x0[0]) <= 1e-9 &&
                         (g.n == 1 || std::abs(g.x_of(j0) - x0[1]) <= 1e-9) &&
                         std::abs(g.t_of(k0) - t0) <= 1e-9;
    if (!on_node) throw std::invalid_argument("blowup base point must sit on a grid node");
    const std::size_t base = g.n == 1 ? g.flat(i0, k0) : g.flat(i0, j0, k0);
    if (!space_interior(g, base) || k0 < 1) {
        throw std::invalid_argument("blowup base point needs interior stencils");
    }

    const double u0 = u[base];
    double grad[2] = {0.0, 0.0};
    diff_gradient(u, base, grad);

    Field out = make_field(target);
    const double inv = 1.0 / (r * r);
    par::for_each(mode, out.data.size(), [&](std::size_t p) {
        double y[2] = {0.0, 0.0};
        double tau = 0.0;
        target.node_point(p, &y[0], &y[1], &tau);
        const double x[2] = {x0[0] + r * y[0], g.n == 2 ? x0[1] + r * y[1] : 0.0};
        const double value = sample(u, x, t0 + r * r * tau);
        const double linear = r * (grad[0] * y[0] + (g.n == 2 ? grad[1] * y[1] : 0.0));
        out.data[p] = (value - u0 - linear) * inv;
    });
    return out;
}

}  // namespace parafree

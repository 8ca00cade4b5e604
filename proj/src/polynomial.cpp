#include "parafree/polynomial.hpp"

#include <cmath>
#include <stdexcept>

#include "parafree/differentials.hpp"

namespace parafree {

ParabolicPolynomial zoom_in(const ParabolicPolynomial& p, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("zoom scale must be positive");
    ParabolicPolynomial q = p;
    q.a = p.a / (s * s);
    q.b[0] = p.b[0] / s;
    q.b[1] = p.b[1] / s;
    return q;
}

double h_of(const Operator& op, const ParabolicPolynomial& p) {
    return eval_f(op, p.m) - p.c;
}

Field make_polynomial_field(const Grid& g, const ParabolicPolynomial& p) {
    if (p.n != g.n) throw std::invalid_argument("polynomial and grid dimensions differ");
    Field f = make_field(g);
    double x[2] = {0.0, 0.0};
    double t = 0.0;
    for (std::size_t q = 0; q < f.data.size(); ++q) {
        g.node_point(q, &x[0], &x[1], &t);
        f.data[q] = p.value(x, t);
    }
    return f;
}

ParabolicPolynomial taylor2(const Field& u, const double* x0, double t0) {
    const Grid& g = u.grid;
    const int i0 = static_cast<int>(std::lround((x0[0] + g.L) / g.h));
    const int j0 = g.n == 2 ? static_cast<int>(std::lround((x0[1] + g.L) / g.h)) : 0;
    const int k0 = static_cast<int>(std::lround((t0 - g.t0) / g.dt));
    const bool on_node = i0 >= 0 && i0 < g.nx && k0 >= 0 && k0 < g.nt &&
                         (g.n == 1 || (j0 >= 0 && j0 < g.nx)) &&
                         std::abs(g.x_of(i0) - x0[0]) <= 1e-9 &&
                         (g.n == 1 || std::abs(g.x_of(j0) - x0[1]) <= 1e-9) &&
                         std::abs(g.t_of(k0) - t0) <= 1e-9;
    if (!on_node) throw std::invalid_argument("taylor2 base point must sit on a grid node");
    const std::size_t base = g.n == 1 ? g.flat(i0, k0) : g.flat(i0, j0, k0);
    if (!space_interior(g, base) || k0 < 1) {
        throw std::invalid_argument("taylor2 base point needs interior stencils");
    }

    ParabolicPolynomial p;
    p.n = g.n;
    p.m = diff_hessian(u, base);
    p.c = k0 >= 2 ? diff_ut2(u, base) : diff_ut(u, base);
    double grad[2] = {0.0, 0.0};
    diff_gradient(u, base, grad);

    // Re-expand around the global origin: the centered form is
    // u0 + g.(x - x0) + (x - x0)'M(x - x0)/2 + c (t - t0).
    const double mx0 = p.m.xx * x0[0] + (g.n == 2 ? p.m.xy * x0[1] : 0.0);
    const double my0 = g.n == 2 ? p.m.xy * x0[0] + p.m.yy * x0[1] : 0.0;
    const double quad = 0.5 * (x0[0] * mx0 + (g.n == 2 ? x0[1] * my0 : 0.0));
    p.a = u[base] - (grad[0] * x0[0] + (g.n == 2 ? grad[1] * x0[1] : 0.0)) + quad - p.c * t0;
    p.b[0] = grad[0] - mx0;
    p.b[1] = g.n == 2 ? grad[1] - my0 : 0.0;
    return p;
}

}  // namespace parafree

#include "parafree/differentials.hpp"

#include <limits>
#include <stdexcept>

namespace parafree {

namespace {

void coords_checked(const Grid& g, std::size_t flat, int* i, int* j, int* k) {
    if (flat >= g.size()) throw std::out_of_range("node index outside the grid");
    g.node_coords(flat, i, j, k);
}

void require_interior(const Grid& g, int i, int j) {
    const bool ok = i >= 1 && i <= g.nx - 2 && (g.n == 1 || (j >= 1 && j <= g.nx - 2));
    if (!ok) throw std::out_of_range("spatial stencil leaves the grid");
}

}  // namespace

bool space_interior(const Grid& g, std::size_t flat) {
    int i = 0, j = 0, k = 0;
    g.node_coords(flat, &i, &j, &k);
    return i >= 1 && i <= g.nx - 2 && (g.n == 1 || (j >= 1 && j <= g.nx - 2));
}

double diff_ut(const Field& u, std::size_t flat) {
    int i = 0, j = 0, k = 0;
    coords_checked(u.grid, flat, &i, &j, &k);
    if (k < 1) throw std::out_of_range("backward time difference needs a level above the first");
    const std::size_t below = flat - u.grid.slice_size();
    return (u[flat] - u[below]) / u.grid.dt;
}

double diff_ut2(const Field& u, std::size_t flat) {
    int i = 0, j = 0, k = 0;
    coords_checked(u.grid, flat, &i, &j, &k);
    if (k < 2) throw std::out_of_range("second-order time difference needs two levels below");
    const std::size_t slice = u.grid.slice_size();
    return (3.0 * u[flat] - 4.0 * u[flat - slice] + u[flat - 2 * slice]) / (2.0 * u.grid.dt);
}

void diff_gradient(const Field& u, std::size_t flat, double* grad) {
    const Grid& g = u.grid;
    int i = 0, j = 0, k = 0;
    coords_checked(g, flat, &i, &j, &k);
    require_interior(g, i, j);
    grad[0] = (u[flat + 1] - u[flat - 1]) / (2.0 * g.h);
    grad[1] = 0.0;
    if (g.n == 2) {
        const std::size_t row = static_cast<std::size_t>(g.nx);
        grad[1] = (u[flat + row] - u[flat - row]) / (2.0 * g.h);
    }
}

SymMat diff_hessian(const Field& u, std::size_t flat) {
    const Grid& g = u.grid;
    int i = 0, j = 0, k = 0;
    coords_checked(g, flat, &i, &j, &k);
    require_interior(g, i, j);
    const double h2 = g.h * g.h;
    const double xx = (u[flat + 1] - 2.0 * u[flat] + u[flat - 1]) / h2;
    if (g.n == 1) return SymMat::diag(1, xx);
    const std::size_t row = static_cast<std::size_t>(g.nx);
    const double yy = (u[flat + row] - 2.0 * u[flat] + u[flat - row]) / h2;
    const double xy =
        (u[flat + row + 1] - u[flat + row - 1] - u[flat - row + 1] + u[flat - row - 1]) /
        (4.0 * h2);
    return SymMat::make(2, xx, xy, yy);
}

Jet diff_jet(const Field& u, std::size_t flat) {
    Jet jet;
    jet.value = u[flat];
    jet.ut = diff_ut(u, flat);
    diff_gradient(u, flat, jet.grad);
    jet.hess = diff_hessian(u, flat);
    return jet;
}

Field h_residual(const Operator& op, const Field& u, par::Mode mode) {
    if (op.n != u.grid.n) {
        throw std::invalid_argument("operator and field dimensions differ");
    }
    Field out = make_field(u.grid, std::numeric_limits<double>::quiet_NaN());
    const Grid& g = u.grid;
    const std::size_t slice = g.slice_size();
    par::for_each(mode, g.size(), [&](std::size_t p) {
        if (p < slice || !space_interior(g, p)) return;
        out[p] = eval_h(op, diff_hessian(u, p), diff_ut(u, p));
    });
    return out;
}

}  // namespace parafree

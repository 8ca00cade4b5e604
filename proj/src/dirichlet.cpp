#include "parafree/dirichlet.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parafree/differentials.hpp"
#include "level_solver.hpp"

namespace parafree {

namespace detail {

std::vector<Stencil> build_stencils(const DirichletProblem& prob, const Grid& g) {
    if (prob.policies.empty()) {
        throw std::invalid_argument("dirichlet solve needs at least one policy");
    }
    std::vector<Stencil> out;
    out.reserve(prob.policies.size());
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (const AffinePolicy& pol : prob.policies) {
        if (pol.a.n != g.n) {
            throw std::invalid_argument("policy matrix dimension does not match the grid");
        }
        Stencil st;
        st.b = pol.b;
        if (g.n == 1) {
            st.ax = pol.a.xx * inv_h2;
            st.center = -2.0 * pol.a.xx * inv_h2;
        } else {
            const double mix = std::abs(pol.a.xy);
            if (pol.a.xx + 1e-12 < mix || pol.a.yy + 1e-12 < mix) {
                throw std::invalid_argument(
                    "policy matrix " + pol.a.describe() +
                    " is not monotone on this stencil: both diagonal entries must "
                    "dominate |a_xy|");
            }
            st.ax = (pol.a.xx - mix) * inv_h2;
            st.ay = (pol.a.yy - mix) * inv_h2;
            st.ad = mix * inv_h2;
            st.center = -2.0 * (pol.a.xx + pol.a.yy - mix) * inv_h2;
            st.anti = pol.a.xy < 0.0;
        }
        if (!(st.center < 0.0)) {
            throw std::invalid_argument("policy matrix " + pol.a.describe() +
                                        " has no diffusion on this stencil");
        }
        out.push_back(st);
    }
    return out;
}

double select_value_and_root(const std::vector<Stencil>& stencils, PolicySense sense,
                             const double* cur, std::size_t q, std::ptrdiff_t row,
                             double inv_dt, double prev_q, double rhs_q, double* root) {
    const double here = cur[q];
    const double east = cur[q + 1], west = cur[q - 1];
    double north = 0.0, south = 0.0, d1 = 0.0, d2 = 0.0, e1 = 0.0, e2 = 0.0;
    if (row != 0) {
        north = cur[q + row];
        south = cur[q - row];
        d1 = cur[q + row + 1];  // (+1,+1)
        d2 = cur[q - row - 1];
        e1 = cur[q - row + 1];  // (+1,-1)
        e2 = cur[q + row - 1];
    }
    double best_value = 0.0;
    double best_root = 0.0;
    for (std::size_t j = 0; j < stencils.size(); ++j) {
        const Stencil& st = stencils[j];
        double offsum = st.ax * (east + west);
        if (row != 0) {
            offsum += st.ay * (north + south);
            offsum += st.ad * (st.anti ? e1 + e2 : d1 + d2);
        }
        const double value = offsum + st.center * here + st.b;
        const double r = (rhs_q - st.b - prev_q * inv_dt - offsum) / (st.center - inv_dt);
        if (j == 0 || (sense == PolicySense::Max ? value > best_value : value < best_value)) {
            best_value = value;
        }
        if (j == 0 || (sense == PolicySense::Max ? r > best_root : r < best_root)) {
            best_root = r;
        }
    }
    *root = best_root;
    return best_value;
}

int solve_level(const Grid& g, const std::vector<Stencil>& stencils, PolicySense sense,
                double tol, int max_sweeps, const double* prev, const double* rhs,
                const std::vector<std::size_t>& interior, LevelWorkspace& ws, par::Mode mode,
                int level) {
    const double inv_dt = 1.0 / g.dt;
    const std::ptrdiff_t row = g.n == 2 ? g.nx : 0;
    ws.next = ws.cur;
    ws.resid.assign(interior.size(), 0.0);

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        const double* cur = ws.cur.data();
        par::for_each(mode, interior.size(), [&](std::size_t w) {
            const std::size_t q = interior[w];
            double root = 0.0;
            const double value = select_value_and_root(stencils, sense, cur, q, row, inv_dt,
                                                       prev[q], rhs[q], &root);
            ws.next[q] = root;
            ws.resid[w] = value - (cur[q] - prev[q]) * inv_dt - rhs[q];
        });

        if (par::max_abs(mode, ws.resid) <= tol) return sweep - 1;  // cur already satisfies
        std::swap(ws.cur, ws.next);
    }
    throw std::runtime_error("jacobi sweeps stalled above tolerance on level " +
                             std::to_string(level));
}

std::vector<std::size_t> box_interior_slice(const Grid& g) {
    std::vector<std::size_t> interior;
    if (g.n == 1) {
        for (int i = 1; i + 1 < g.nx; ++i) interior.push_back(static_cast<std::size_t>(i));
    } else {
        for (int j = 1; j + 1 < g.nx; ++j) {
            for (int i = 1; i + 1 < g.nx; ++i) {
                interior.push_back(static_cast<std::size_t>(j) * g.nx + i);
            }
        }
    }
    return interior;
}

}  // namespace detail

namespace {

/// Shared driver: solves the listed interior nodes level by level, reading
/// initial and boundary values from the data already present in out.
/// nodes_of(k) returns the slice-local interior indices of level k.
template <class LevelNodes>
void solve_levels(const Grid& g, const DirichletProblem& prob, const Field& rhs, Field& out,
                  LevelNodes&& nodes_of, int k_start, par::Mode mode) {
    const std::vector<detail::Stencil> stencils = detail::build_stencils(prob, g);
    const std::size_t slice = g.slice_size();
    detail::LevelWorkspace ws;
    for (int k = k_start; k < g.nt; ++k) {
        const std::vector<std::size_t>& interior = nodes_of(k);
        if (interior.empty()) continue;
        const double* prev = out.data.data() + (static_cast<std::size_t>(k) - 1) * slice;
        const double* rhs_slice = rhs.data.data() + static_cast<std::size_t>(k) * slice;
        double* level = out.data.data() + static_cast<std::size_t>(k) * slice;

        ws.cur.assign(level, level + slice);
        for (const std::size_t q : interior) ws.cur[q] = prev[q];  // warm start
        detail::solve_level(g, stencils, prob.sense, prob.tol, prob.max_sweeps, prev, rhs_slice,
                            interior, ws, mode, k);
        for (const std::size_t q : interior) level[q] = ws.cur[q];
    }
}

void check_shapes(const Field& rhs, const Field& data) {
    if (!rhs.grid.same_layout(data.grid)) {
        throw std::invalid_argument("rhs and data grids differ");
    }
}

}  // namespace

DirichletProblem make_problem(const Operator& op, int net_points) {
    DirichletProblem prob;
    const Operator* source = &op;
    Operator net;
    if (op.kind == OperatorKind::PucciPlus || op.kind == OperatorKind::PucciMinus) {
        net = pucci_net(op, net_points);
        source = &net;
    }
    prob.sense = source->sense;
    prob.policies.reserve(source->coeff.size());
    for (const SymMat& a : source->coeff) prob.policies.push_back({a, 0.0});
    return prob;
}

DirichletProblem shift_problem(const DirichletProblem& prob, const SymMat& m0, double c0) {
    DirichletProblem shifted = prob;
    for (AffinePolicy& policy : shifted.policies) policy.b += dot(policy.a, m0) - c0;
    return shifted;
}

Field solve_box(const DirichletProblem& prob, const Field& rhs, const Field& data,
                par::Mode mode) {
    check_shapes(rhs, data);
    const Grid& g = data.grid;
    Field out = data;
    const std::vector<std::size_t> interior = detail::box_interior_slice(g);
    solve_levels(
        g, prob, rhs, out, [&](int) -> const std::vector<std::size_t>& { return interior; }, 1,
        mode);
    return out;
}

Field solve_cylinder(const DirichletProblem& prob, const Field& rhs, const Field& data,
                     const CylinderNodes& nodes, par::Mode mode) {
    check_shapes(rhs, data);
    const Grid& g = data.grid;
    Field out = data;
    const std::size_t slice = g.slice_size();
    std::vector<std::vector<std::size_t>> by_level(g.nt);
    for (const std::size_t p : nodes.interior) {
        by_level[p / slice].push_back(p % slice);
    }
    solve_levels(
        g, prob, rhs, out,
        [&](int k) -> const std::vector<std::size_t>& {
            return by_level[static_cast<std::size_t>(k)];
        },
        nodes.k_bot + 1, mode);
    return out;
}

Field solver_residual_box(const DirichletProblem& prob, const Field& rhs, const Field& u,
                          par::Mode mode) {
    check_shapes(rhs, u);
    const Grid& g = u.grid;
    const std::vector<detail::Stencil> stencils = detail::build_stencils(prob, g);
    const double inv_dt = 1.0 / g.dt;
    const std::ptrdiff_t row = g.n == 2 ? g.nx : 0;
    const std::size_t slice = g.slice_size();
    Field out = make_field(g, std::numeric_limits<double>::quiet_NaN());

    par::for_each(mode, g.size(), [&](std::size_t p) {
        if (p < slice || !space_interior(g, p)) return;
        const std::size_t k = p / slice;
        const std::size_t q = p % slice;
        const double* level = u.data.data() + k * slice;
        const double* prev = level - slice;
        double root = 0.0;
        const double value = detail::select_value_and_root(stencils, prob.sense, level, q, row,
                                                           inv_dt, prev[q], rhs[p], &root);
        out[p] = value - (level[q] - prev[q]) * inv_dt - rhs[p];
    });
    return out;
}

}  // namespace parafree

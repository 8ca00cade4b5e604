#include "parafree/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "parafree/differentials.hpp"
#include "level_solver.hpp"

namespace parafree {

namespace {

/// Euclidean gradient norm within one time slice, one-sided at the box faces.
double slice_grad_norm(const Grid& g, const double* slice, int i, int j) {
    const auto axis = [&](int idx, std::size_t q, std::ptrdiff_t stride) {
        if (idx == 0) return (slice[q + stride] - slice[q]) / g.h;
        if (idx == g.nx - 1) return (slice[q] - slice[q - stride]) / g.h;
        return (slice[q + stride] - slice[q - stride]) / (2.0 * g.h);
    };
    if (g.n == 1) {
        return std::abs(axis(i, static_cast<std::size_t>(i), 1));
    }
    const std::size_t q = static_cast<std::size_t>(j) * g.nx + i;
    return std::hypot(axis(i, q, 1), axis(j, q, g.nx));
}

void rule_slice(const Grid& g, const double* slice, MaskRule rule, double theta,
                std::uint8_t* out) {
    if (rule == MaskRule::ValueThreshold) {
        for (std::size_t q = 0; q < g.slice_size(); ++q) out[q] = std::abs(slice[q]) > theta;
        return;
    }
    for (int j = 0; j < (g.n == 2 ? g.nx : 1); ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t q = g.n == 1 ? static_cast<std::size_t>(i)
                                           : static_cast<std::size_t>(j) * g.nx + i;
            out[q] = slice_grad_norm(g, slice, i, j) > theta;
        }
    }
}

}  // namespace

double mask_threshold(MaskRule rule, const Grid& g, double field_scale) {
    return rule == MaskRule::ValueThreshold ? 10.0 * g.h * g.h * field_scale : 10.0 * g.h;
}

Mask apply_mask_rule(const Field& u, MaskRule rule, double field_scale) {
    const Grid& g = u.grid;
    const double theta = mask_threshold(rule, g, field_scale);
    Mask m = make_mask(g);
    for (int k = 0; k < g.nt; ++k) {
        rule_slice(g, u.data.data() + static_cast<std::size_t>(k) * g.slice_size(), rule, theta,
                   m.data.data() + static_cast<std::size_t>(k) * g.slice_size());
    }
    return m;
}

FreeBoundarySolution solve_free_boundary(const Operator& op, const Field& data,
                                         const FreeBoundaryParams& params, par::Mode mode) {
    const Grid& g = data.grid;
    DirichletProblem prob = make_problem(op, params.net_points);
    prob.tol = params.tol;
    prob.max_sweeps = params.max_sweeps;
    const std::vector<detail::Stencil> stencils = detail::build_stencils(prob, g);
    const double theta = mask_threshold(params.rule, g, params.field_scale);
    const std::size_t slice = g.slice_size();
    const std::vector<std::size_t> interior = detail::box_interior_slice(g);

    FreeBoundarySolution sol;
    sol.u = data;
    sol.omega = make_mask(g);
    sol.threshold = theta;

    std::vector<std::uint8_t> mask_k(slice), mask_new(slice), mask_prev(slice);
    rule_slice(g, sol.u.data.data(), params.rule, theta, mask_k.data());
    std::copy(mask_k.begin(), mask_k.end(), sol.omega.data.begin());

    detail::LevelWorkspace ws;
    std::vector<double> rhs_slice(slice, 0.0);
    const auto solve_with_mask = [&](const double* prev, int k) {
        for (std::size_t q = 0; q < slice; ++q) rhs_slice[q] = mask_k[q] ? 1.0 : 0.0;
        detail::solve_level(g, stencils, prob.sense, prob.tol, prob.max_sweeps, prev,
                            rhs_slice.data(), interior, ws, mode, k);
    };
    for (int k = 1; k < g.nt; ++k) {
        double* level = sol.u.data.data() + static_cast<std::size_t>(k) * slice;
        const double* prev = level - slice;
        ws.cur.assign(level, level + slice);
        for (const std::size_t q : interior) ws.cur[q] = prev[q];  // warm start

        int iters = 0;
        bool fixed_point = false;
        bool cycled = false;
        while (true) {
            ++iters;
            solve_with_mask(prev, k);
            rule_slice(g, ws.cur.data(), params.rule, theta, mask_new.data());
            if (mask_new == mask_k) {
                fixed_point = true;
                break;
            }
            if (iters >= 2 && mask_new == mask_prev) {
                cycled = true;
                break;
            }
            // On cap exhaustion keep mask_k as the mask the values were solved
            // under, so the exported mask and the rule's image of the exported
            // values disagree exactly where the iteration still wanted to move.
            if (iters >= params.max_mask_iters) break;
            mask_prev = mask_k;
            mask_k.swap(mask_new);
        }
        if (cycled) {
            // Two-state flicker: nodes straddling the threshold alternate in
            // and out of the mask, moving the value by one time-step worth of
            // right-hand side each solve. Pin the union of both states and
            // solve once more; the flickering values settle just under the
            // threshold.
            ++iters;
            for (std::size_t q = 0; q < slice; ++q) mask_k[q] = mask_k[q] | mask_new[q];
            solve_with_mask(prev, k);
            fixed_point = true;
        }
        sol.worst_mask_iters = std::max(sol.worst_mask_iters, iters);
        if (!fixed_point) sol.mask_converged = false;

        std::copy(ws.cur.begin(), ws.cur.end(), level);
        std::copy(mask_k.begin(), mask_k.end(),
                  sol.omega.data.begin() + static_cast<std::size_t>(k) * slice);
    }
    return sol;
}

FreeBoundarySolution solve_complementarity(const Operator& op, const Field& data,
                                           const FreeBoundaryParams& params, par::Mode mode) {
    const Grid& g = data.grid;
    DirichletProblem prob = make_problem(op, params.net_points);
    prob.tol = params.tol;
    prob.max_sweeps = params.max_sweeps;
    const std::vector<detail::Stencil> stencils = detail::build_stencils(prob, g);
    const std::size_t slice = g.slice_size();
    const std::vector<std::size_t> interior = detail::box_interior_slice(g);
    const double inv_dt = 1.0 / g.dt;
    const std::ptrdiff_t row = g.n == 2 ? g.nx : 0;

    FreeBoundarySolution sol;
    sol.u = data;
    sol.omega = make_mask(g);
    sol.threshold = 0.0;

    // Start from the positivity pattern of the initial level.
    std::vector<std::uint8_t> inactive(slice, 0);
    for (std::size_t q = 0; q < slice; ++q) inactive[q] = sol.u.data[q] > 0.0;

    detail::LevelWorkspace ws;
    const std::vector<double> ones(slice, 1.0);
    std::vector<std::size_t> solve_list;
    for (int k = 1; k < g.nt; ++k) {
        double* level = sol.u.data.data() + static_cast<std::size_t>(k) * slice;
        const double* prev = level - slice;
        ws.cur.assign(level, level + slice);
        for (const std::size_t q : interior) ws.cur[q] = inactive[q] ? prev[q] : 0.0;

        int iters = 0;
        bool settled = false;
        while (iters < params.max_mask_iters) {
            ++iters;
            solve_list.clear();
            for (const std::size_t q : interior) {
                if (inactive[q]) solve_list.push_back(q);
            }
            if (!solve_list.empty()) {
                detail::solve_level(g, stencils, prob.sense, prob.tol, prob.max_sweeps, prev,
                                    ones.data(), solve_list, ws, mode, k);
            }
            int switches = 0;
            for (const std::size_t q : interior) {
                if (inactive[q]) {
                    if (ws.cur[q] < 0.0) {  // obstacle violated
                        inactive[q] = 0;
                        ws.cur[q] = 0.0;
                        ++switches;
                    }
                } else {
                    double root = 0.0;
                    const double value = detail::select_value_and_root(
                        stencils, prob.sense, ws.cur.data(), q, row, inv_dt, prev[q], 1.0, &root);
                    // The equation wants to push through the obstacle here.
                    if (value + prev[q] * inv_dt - 1.0 > 1e-12) {
                        inactive[q] = 1;
                        ++switches;
                    }
                }
            }
            if (switches == 0) {
                settled = true;
                break;
            }
        }
        sol.worst_mask_iters = std::max(sol.worst_mask_iters, iters);
        if (!settled) sol.mask_converged = false;
        std::copy(ws.cur.begin(), ws.cur.end(), level);
    }

    for (std::size_t p = 0; p < sol.u.data.size(); ++p) sol.omega.data[p] = sol.u.data[p] > 0.0;
    return sol;
}

namespace {

/// Marks nodes that see a set value within the given per-axis windows.
void window_any_axis(const Grid& g, const std::vector<std::uint8_t>& in,
                     std::vector<std::uint8_t>& out, int axis, int halfwidth, par::Mode mode) {
    if (halfwidth <= 0) {
        out = in;
        return;
    }
    const std::size_t slice = g.slice_size();
    std::size_t lines = 0, length = 0, stride = 0;
    if (axis == 0) {
        lines = static_cast<std::size_t>(g.nt) * (g.n == 2 ? g.nx : 1);
        length = static_cast<std::size_t>(g.nx);
        stride = 1;
    } else if (axis == 1) {
        lines = static_cast<std::size_t>(g.nt) * g.nx;
        length = static_cast<std::size_t>(g.nx);
        stride = static_cast<std::size_t>(g.nx);
    } else {
        lines = slice;
        length = static_cast<std::size_t>(g.nt);
        stride = slice;
    }

    par::for_each(mode, lines, [&](std::size_t line) {
        std::size_t base = 0;
        if (axis == 0) {
            base = line * static_cast<std::size_t>(g.nx);
        } else if (axis == 1) {
            const std::size_t k = line / g.nx;
            const std::size_t i = line % g.nx;
            base = k * slice + i;
        } else {
            base = line;
        }
        std::vector<int> prefix(length + 1, 0);
        for (std::size_t m = 0; m < length; ++m) {
            prefix[m + 1] = prefix[m] + (in[base + m * stride] != 0);
        }
        const long long w = halfwidth;
        for (std::size_t m = 0; m < length; ++m) {
            const std::size_t lo =
                static_cast<std::size_t>(std::max<long long>(0, static_cast<long long>(m) - w));
            const std::size_t hi =
                static_cast<std::size_t>(std::min<long long>(length - 1, m + w));
            out[base + m * stride] = prefix[hi + 1] - prefix[lo] > 0;
        }
    });
}

std::vector<std::uint8_t> dilate_mask(const Grid& g, const std::vector<std::uint8_t>& in,
                                      int spatial, int temporal, par::Mode mode) {
    std::vector<std::uint8_t> a = in;
    std::vector<std::uint8_t> b(in.size());
    window_any_axis(g, a, b, 0, spatial, mode);
    std::swap(a, b);
    if (g.n == 2) {
        window_any_axis(g, a, b, 1, spatial, mode);
        std::swap(a, b);
    }
    window_any_axis(g, a, b, 2, temporal, mode);
    std::swap(a, b);
    return a;
}

}  // namespace

VerifyReport verify_solution(const Operator& op, const Field& u, const Mask& omega, double band,
                             par::Mode mode) {
    const Grid& g = u.grid;
    if (!g.same_layout(omega.grid)) {
        throw std::invalid_argument("field and mask grids differ in verify");
    }
    if (op.n != g.n) throw std::invalid_argument("operator dimension does not match the grid");
    if (band < 0.0) band = 2.0 * g.h;

    VerifyReport report;
    report.band_spatial = static_cast<int>(std::ceil(band / g.h - 1e-9));
    report.band_temporal = static_cast<int>(std::ceil(band * band / g.dt - 1e-9));

    // A node is near the interface when both phases appear in its window.
    std::vector<std::uint8_t> inverted(omega.data.size());
    for (std::size_t p = 0; p < inverted.size(); ++p) inverted[p] = omega.data[p] ? 0 : 1;
    const std::vector<std::uint8_t> see_omega =
        dilate_mask(g, omega.data, report.band_spatial, report.band_temporal, mode);
    const std::vector<std::uint8_t> see_comp =
        dilate_mask(g, inverted, report.band_spatial, report.band_temporal, mode);

    const std::size_t slice = g.slice_size();
    std::vector<double> eq(u.data.size(), 0.0);
    std::vector<double> comp(u.data.size(), 0.0);
    par::for_each(mode, u.data.size(), [&](std::size_t p) {
        if (p < slice || !space_interior(g, p)) return;
        if (see_omega[p] && see_comp[p]) return;  // banded out
        if (omega.data[p]) {
            eq[p] = std::abs(eval_h(op, diff_hessian(u, p), diff_ut(u, p)) - 1.0);
        } else {
            comp[p] = std::max(diff_hessian(u, p).max_abs_entry(), std::abs(diff_ut(u, p)));
        }
    });
    report.sup_eq_error = par::max_abs(mode, eq);
    report.sup_second_order = par::max_abs(mode, comp);

    for (std::size_t p = slice; p < u.data.size(); ++p) {
        if (!space_interior(g, p) || (see_omega[p] && see_comp[p])) continue;
        if (omega.data[p]) {
            ++report.eq_nodes;
        } else {
            ++report.comp_nodes;
        }
    }
    return report;
}

Normalized normalize(const Operator& op, const Field& u, double R, const Grid& target) {
    if (!(R > 0.0)) throw std::invalid_argument("normalization scale must be positive");
    if (target.n != u.grid.n) {
        throw std::invalid_argument("normalization cannot change the spatial dimension");
    }
    Normalized result{make_field(target), op};
    double y[2] = {0.0, 0.0};
    double tau = 0.0;
    for (std::size_t p = 0; p < result.u.data.size(); ++p) {
        target.node_point(p, &y[0], &y[1], &tau);
        const double x[2] = {y[0] / R, y[1] / R};
        result.u.data[p] = sample(u, x, tau / (R * R));
    }
    return result;
}

}  // namespace parafree

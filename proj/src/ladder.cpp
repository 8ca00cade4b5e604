#include "parafree/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parafree/cylinder.hpp"
#include "parafree/differentials.hpp"
#include "parafree/rescale.hpp"

namespace parafree {

namespace {

constexpr double kOrigin[2] = {0.0, 0.0};

/// Sup of |u - p| over the grid nodes inside Q_r around the space-time
/// origin (clipped to the grid).
double sup_cylinder_dev(const Field& u, const ParabolicPolynomial& p, double r, par::Mode mode) {
    const Grid& g = u.grid;
    const std::size_t slice = g.slice_size();
    std::vector<double> level_max(g.nt, 0.0);
    par::for_each(mode, g.nt, [&](std::size_t k) {
        double worst = 0.0;
        double x[2];
        double t = 0.0;
        for (std::size_t s = 0; s < slice; ++s) {
            const std::size_t q = k * slice + s;
            if (!in_cylinder(g, kOrigin, 0.0, r, q)) continue;
            g.node_point(q, &x[0], &x[1], &t);
            worst = std::max(worst, std::abs(u[q] - p.value(x, t)));
        }
        level_max[k] = worst;
    });
    return *std::max_element(level_max.begin(), level_max.end());
}

void subtract_polynomial(Field& u, const ParabolicPolynomial& p, par::Mode mode) {
    const Grid& g = u.grid;
    par::for_each(mode, g.size(), [&](std::size_t q) {
        double x[2];
        double t = 0.0;
        g.node_point(q, &x[0], &x[1], &t);
        u[q] -= p.value(x, t);
    });
}

int resolve_nx_ref(const LadderParams& params, int n) {
    if (params.nx_ref > 0) return params.nx_ref;
    return n == 1 ? 129 : 65;
}

/// Unit-scale grid for one rung. With the resolution left on automatic, the
/// grid adopts the node lattice the zoom maps onto source nodes whenever the
/// scale/h ratio is integral, so sampled data is interpolation-free; an
/// explicit resolution (or a non-integral ratio) samples by interpolation.
Grid rung_grid(const Grid& src, double scale, const LadderParams& params) {
    if (params.nx_ref <= 0) {
        const double s = scale / src.h;
        const double rounded = std::round(s);
        if (rounded >= 4.0 && std::abs(s - rounded) <= 1e-9 * s) {
            return make_grid(src.n, 2 * static_cast<int>(rounded) + 1, 1.0, params.t0_ref, 0.0);
        }
    }
    return make_grid(src.n, resolve_nx_ref(params, src.n), 1.0, params.t0_ref, 0.0);
}

DirichletProblem base_problem(const Operator& op, const LadderParams& params) {
    DirichletProblem prob = make_problem(op, params.net_points);
    prob.tol = params.tol;
    prob.max_sweeps = params.max_sweeps;
    return prob;
}

int snap_rung(const LadderResult& ladder, double r) {
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const LadderStep& step : ladder.steps) {
        const double gap = std::abs(std::pow(ladder.rho, step.k) - r);
        if (gap < best_gap) {
            best_gap = gap;
            best = step.k;
        }
    }
    return best;
}

const LadderStep& rung(const LadderResult& ladder, int k) {
    for (const LadderStep& step : ladder.steps) {
        if (step.k == k) return step;
    }
    throw std::logic_error("ladder rung lookup failed");
}

/// Cell count of the complement through the window B_rb x (t1 - rt, t1]
/// around the top center, times cell volume (unscaled).
double complement_window_volume(const Mask& omega, double rb, double rt) {
    const Grid& g = omega.grid;
    if (!(rb > 0.0) || !(rt > 0.0)) {
        throw std::invalid_argument("complement window extents must be positive");
    }
    const double eps_x = 1e-9 * g.h;
    const double eps_t = 1e-9 * g.dt;
    if (rb > g.L + eps_x || rt > g.t1 - g.t0 + eps_t) {
        throw std::invalid_argument("complement window leaves the grid");
    }
    const auto corner_in_ball = [&](int i, int j) {
        if (g.n == 1) return std::abs(g.x_of(i)) <= rb + eps_x;
        return std::hypot(g.x_of(i), g.x_of(j)) <= rb + eps_x;
    };
    long long cells = 0;
    for (int k = 0; k + 1 < g.nt; ++k) {
        if (g.t_of(k) < g.t1 - rt - eps_t) continue;
        const std::size_t base = static_cast<std::size_t>(k) * g.slice_size();
        const std::size_t next = base + g.slice_size();
        if (g.n == 1) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                if (!corner_in_ball(i, 0) || !corner_in_ball(i + 1, 0)) continue;
                if (omega.data[base + i] || omega.data[base + i + 1] ||
                    omega.data[next + i] || omega.data[next + i + 1]) {
                    continue;
                }
                ++cells;
            }
            continue;
        }
        for (int j = 0; j + 1 < g.nx; ++j) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                bool inside = true;
                for (int dj = 0; dj < 2 && inside; ++dj) {
                    for (int di = 0; di < 2 && inside; ++di) {
                        const std::size_t s =
                            static_cast<std::size_t>(j + dj) * g.nx + (i + di);
                        inside = corner_in_ball(i + di, j + dj) && !omega.data[base + s] &&
                                 !omega.data[next + s];
                    }
                }
                if (inside) ++cells;
            }
        }
    }
    const double cell_volume = std::pow(g.h, g.n) * g.dt;
    return static_cast<double>(cells) * cell_volume;
}

}  // namespace

LadderResult run_ladder(const Operator& op, const Field& u, const LadderParams& params,
                        par::Mode mode) {
    const Grid& g = u.grid;
    if (!(params.rho > 0.0 && params.rho < 1.0)) {
        throw std::invalid_argument("ladder shrink factor must lie in (0, 1)");
    }
    if (params.k_max < 0) throw std::invalid_argument("ladder depth must be nonnegative");
    if (std::abs(g.t1) > 1e-9 * g.dt) {
        throw std::invalid_argument("ladder grids must end at time zero");
    }
    if (par::max_abs(mode, u.data) > 1.0 + 1e-9) {
        throw std::invalid_argument("ladder input must be bounded by one");
    }

    LadderResult out;
    out.rho = params.rho;

    const DirichletProblem base = base_problem(op, params);

    ParabolicPolynomial p;
    p.n = g.n;
    p.m = SymMat::zero(g.n);
    for (int k = 0;; ++k) {
        const double rk = std::pow(params.rho, k);
        if (std::floor(2.0 * rk / g.h + 1e-9) + 1.0 < 8.0) {
            out.truncated = true;
            out.truncation_reason =
                "cylinder at rung " + std::to_string(k) + " spans fewer than 8 nodes";
            break;
        }

        LadderStep step;
        step.k = k;
        step.p = p;
        step.e = sup_cylinder_dev(u, p, rk, mode);
        step.ratio = step.e / (rk * rk);
        out.steps.push_back(step);
        out.fitted_c = std::max(out.fitted_c, step.ratio);
        if (k == params.k_max) break;

        const Grid ref = rung_grid(g, rk, params);
        Field data = rescale_field(u, kOrigin, 0.0, rk, ref, mode);
        subtract_polynomial(data, zoom_in(p, rk), mode);
        Field v;
        try {
            const CylinderNodes cyl = classify_cylinder(ref, kOrigin, 0.0, 0.5);
            v = solve_cylinder(shift_problem(base, p.m, p.c), make_field(ref), data, cyl, mode);
        } catch (const std::exception& ex) {
            out.truncated = true;
            out.truncation_reason = ex.what();
            break;
        }
        ParabolicPolynomial sharp = taylor2(v, kOrigin, 0.0);
        sharp.c = eval_f(op, sharp.m + p.m) - p.c;
        p.a += rk * rk * sharp.a;
        p.b[0] += rk * sharp.b[0];
        p.b[1] += rk * sharp.b[1];
        p.m = p.m + sharp.m;
        p.c += sharp.c;
    }
    return out;
}

std::vector<BmoRow> pointwise_bmo(const Field& u, const LadderResult& ladder,
                                  const std::vector<double>& rs) {
    if (ladder.steps.empty()) throw std::invalid_argument("ladder has no rungs");
    if (std::abs(u.grid.t1) > 1e-9 * u.grid.dt) {
        throw std::invalid_argument("deviation tables need a grid ending at time zero");
    }
    std::vector<BmoRow> rows;
    rows.reserve(rs.size());
    for (const double r : rs) {
        if (!(r > 0.0 && r <= 1.0)) {
            throw std::invalid_argument("deviation table radii must lie in (0, 1]");
        }
        BmoRow row;
        row.r = r;
        row.k = snap_rung(ladder, r);
        row.p = rung(ladder, row.k).p;
        row.sup_dev = sup_cylinder_dev(u, row.p, r, par::Mode::Serial);
        row.ratio = row.sup_dev / (r * r);
        rows.push_back(row);
    }
    return rows;
}

std::vector<MeanRow> lp_bmo(const Field& u, const LadderResult& ladder, double p,
                            const Mask* omega) {
    if (!(p >= 1.0)) throw std::invalid_argument("mean exponent must be at least one");
    const Grid& g = u.grid;
    if (std::abs(g.t1) > 1e-9 * g.dt) {
        throw std::invalid_argument("deviation tables need a grid ending at time zero");
    }
    if (omega != nullptr && !omega->grid.same_layout(g)) {
        throw std::invalid_argument("mask grid does not match the field");
    }

    const auto near_interface = [&](std::size_t q) {
        return omega != nullptr && mask_flip_near(*omega, q, 2);
    };

    std::vector<MeanRow> rows;
    rows.reserve(ladder.steps.size());
    for (const LadderStep& step : ladder.steps) {
        const double r = 0.5 * std::pow(ladder.rho, step.k);
        MeanRow row;
        row.k = step.k;
        double accum = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            if (!in_cylinder(g, kOrigin, 0.0, r, q)) continue;
            if (!space_interior(g, q) || q < g.slice_size()) continue;
            if (near_interface(q)) {
                ++row.skipped;
                continue;
            }
            const SymMat dev_m = diff_hessian(u, q) - step.p.m;
            const double dev_c = diff_ut(u, q) - step.p.c;
            accum += std::pow(tilde_norm(dev_m, dev_c), p);
            ++row.nodes;
        }
        row.mean = row.nodes == 0 ? 0.0
                                  : std::pow(accum / static_cast<double>(row.nodes), 1.0 / p);
        rows.push_back(row);
    }
    return rows;
}

double complement_fill_isotropic(const Mask& omega, double r, double clip) {
    if (!(clip > 0.0 && clip <= 1.0)) {
        throw std::invalid_argument("window clip must lie in (0, 1]");
    }
    const double volume = complement_window_volume(omega, clip * r, clip * r);
    return volume * std::pow(r, -(omega.grid.n + 1));
}

double complement_fill_parabolic(const Mask& omega, double r) {
    const double volume = complement_window_volume(omega, r, r * r);
    return volume * std::pow(r, -(omega.grid.n + 2));
}

DensityTable density_decay(const Mask& omega, const LadderResult& ladder,
                           const std::vector<double>& rs) {
    const int n = omega.grid.n;
    const double decay_bound = 1.0 / std::pow(2.0, n + 1);
    DensityTable table;
    table.rows.reserve(rs.size());
    for (const double r : rs) {
        DensityRow row;
        row.r = r;
        row.fill = complement_fill_isotropic(omega, r);
        row.fill_half = complement_fill_isotropic(omega, 0.5 * r);
        row.ratio = row.fill > 0.0 ? row.fill_half / row.fill : 0.0;
        const LadderStep& step = rung(ladder, snap_rung(ladder, r));
        row.p_norm = tilde_norm(step.p.m, step.p.c);
        row.decays = row.ratio <= decay_bound + 1e-12;
        table.rows.push_back(row);
    }

    // Least second-order size above which every row decays.
    std::vector<const DensityRow*> by_norm;
    for (const DensityRow& row : table.rows) by_norm.push_back(&row);
    std::sort(by_norm.begin(), by_norm.end(),
              [](const DensityRow* a, const DensityRow* b) { return a->p_norm > b->p_norm; });
    for (const DensityRow* row : by_norm) {
        if (!row->decays) break;
        table.threshold = row->p_norm;
        table.threshold_found = true;
    }
    return table;
}

Decomposition decompose(const Operator& op, const Field& u, const Mask& omega,
                        const ParabolicPolynomial& p, double r, const LadderParams& params,
                        par::Mode mode) {
    const Grid& g = u.grid;
    if (!(r > 0.0)) throw std::invalid_argument("decomposition radius must be positive");
    if (!omega.grid.same_layout(g)) {
        throw std::invalid_argument("mask grid does not match the field");
    }

    const Grid ref = make_grid(g.n, resolve_nx_ref(params, g.n), 1.0, -1.0, 0.0);
    Field data = rescale_field(u, kOrigin, g.t1, r, ref, mode);
    subtract_polynomial(data, zoom_in(p, r), mode);

    const Field ones = make_field(ref, 1.0);
    Decomposition out;
    out.v = solve_box(shift_problem(base_problem(op, params), p.m, p.c), ones, data, mode);
    out.w = make_field(ref);
    for (std::size_t q = 0; q < ref.size(); ++q) out.w[q] = data[q] - out.v[q];
    out.sup_w = par::max_abs(mode, out.w.data);
    out.fill = complement_fill_parabolic(omega, r);
    out.fill_pow = std::pow(out.fill, 1.0 / (g.n + 1));
    out.ratio = out.fill_pow > 0.0 ? out.sup_w / out.fill_pow : 0.0;
    return out;
}

}  // namespace parafree

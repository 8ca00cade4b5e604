#include "parafree/analysis.hpp"

#include "parafree/cylinder.hpp"
#include "parafree/differentials.hpp"
#include "parafree/rescale.hpp"
#include "parafree/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace parafree {

namespace {

constexpr double kOrigin[2] = {0.0, 0.0};

struct NodeRef {
    int i = 0, j = 0, k = 0;
    std::size_t flat = 0;
};

int snap_index(double s, int count, const char* axis, bool exact) {
    const long v = std::lround(s);
    if (v < 0 || v >= count) {
        throw std::invalid_argument(std::string("base point leaves the grid along ") + axis);
    }
    if (exact && std::abs(s - static_cast<double>(v)) > 1e-9) {
        throw std::invalid_argument(std::string("base point must sit on a grid node along ") +
                                    axis);
    }
    return static_cast<int>(v);
}

NodeRef nearest_node(const Grid& g, const double* x0, double t0, bool exact = false) {
    NodeRef node;
    node.i = snap_index((x0[0] + g.L) / g.h, g.nx, "x", exact);
    node.j = g.n == 2 ? snap_index((x0[1] + g.L) / g.h, g.nx, "y", exact) : 0;
    node.k = snap_index((t0 - g.t0) / g.dt, g.nt, "t", exact);
    node.flat = g.n == 1 ? g.flat(node.i, node.k) : g.flat(node.i, node.j, node.k);
    return node;
}

/// Visits the node and its face neighbors in space and time, reporting which
/// mask phases the neighborhood touches.
void probe_phases(const Mask& omega, const NodeRef& node, bool* has_in, bool* has_out) {
    const Grid& g = omega.grid;
    *has_in = false;
    *has_out = false;
    const auto visit = [&](int i, int j, int k) {
        if (i < 0 || i >= g.nx || k < 0 || k >= g.nt) return;
        if (g.n == 2 && (j < 0 || j >= g.nx)) return;
        const std::size_t q = g.n == 1 ? g.flat(i, k) : g.flat(i, j, k);
        (omega[q] ? *has_in : *has_out) = true;
    };
    visit(node.i, node.j, node.k);
    visit(node.i - 1, node.j, node.k);
    visit(node.i + 1, node.j, node.k);
    if (g.n == 2) {
        visit(node.i, node.j - 1, node.k);
        visit(node.i, node.j + 1, node.k);
    }
    visit(node.i, node.j, node.k - 1);
    visit(node.i, node.j, node.k + 1);
}

/// Perpendicular spread of hull points around the edge a->b.
double edge_width(const std::vector<std::array<double, 2>>& hull, std::size_t a, std::size_t b) {
    const double ex = hull[b][0] - hull[a][0];
    const double ey = hull[b][1] - hull[a][1];
    const double len = std::hypot(ex, ey);
    double spread = 0.0;
    for (const auto& p : hull) {
        const double c = ex * (p[1] - hull[a][1]) - ey * (p[0] - hull[a][0]);
        spread = std::max(spread, std::abs(c) / len);
    }
    return spread;
}

std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.size();
    if (m < 3) return pts;
    const auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                          const std::array<double, 2>& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<std::array<double, 2>> hull(2 * m);
    std::size_t k = 0;
    for (std::size_t p = 0; p < m; ++p) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[p]) <= 0.0) --k;
        hull[k++] = pts[p];
    }
    const std::size_t lower = k + 1;
    for (std::size_t p = m - 1; p-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[p]) <= 0.0) --k;
        hull[k++] = pts[p];
    }
    hull.resize(k - 1);
    return hull;
}

/// Exact one-dimensional squared distance transform: d[q] = min over p of
/// f[p] + (q - p)^2, with kFar standing in for infinity.
constexpr double kFar = 1e15;

void dt_squared(const double* f, int count, double* d) {
    std::vector<int> v(count);
    std::vector<double> z(count + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < count; ++q) {
        double s = 0.0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < count; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = f[p] + static_cast<double>(q - p) * (q - p);
    }
}

/// Distance (in spatial steps) from every node of one time level to the
/// nearest complement node on that level; kFar when the level has none.
void level_distance(const Mask& omega, int k, double* dist) {
    const Grid& g = omega.grid;
    const int nx = g.nx;
    if (g.n == 1) {
        double run = kFar;
        for (int i = 0; i < nx; ++i) {
            run = omega.at(i, k) ? run + 1.0 : 0.0;
            dist[i] = run;
        }
        run = kFar;
        for (int i = nx; i-- > 0;) {
            run = omega.at(i, k) ? run + 1.0 : 0.0;
            dist[i] = std::min(dist[i], run);
        }
        return;
    }
    std::vector<double> row(nx), sq(static_cast<std::size_t>(nx) * nx), col(nx), out(nx);
    for (int j = 0; j < nx; ++j) {
        double run = kFar;
        for (int i = 0; i < nx; ++i) {
            run = omega.at(i, j, k) ? run + 1.0 : 0.0;
            row[i] = run;
        }
        run = kFar;
        for (int i = nx; i-- > 0;) {
            run = omega.at(i, j, k) ? run + 1.0 : 0.0;
            row[i] = std::min(row[i], run);
        }
        for (int i = 0; i < nx; ++i) {
            const double r = std::min(row[i], 1e7);
            sq[static_cast<std::size_t>(j) * nx + i] = r * r;
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nx; ++j) col[j] = sq[static_cast<std::size_t>(j) * nx + i];
        dt_squared(col.data(), nx, out.data());
        for (int j = 0; j < nx; ++j) {
            const double d2 = out[j];
            dist[static_cast<std::size_t>(j) * nx + i] = d2 >= 1e13 ? kFar : std::sqrt(d2);
        }
    }
}

std::vector<std::array<double, 2>> spatial_net(int n) {
    std::vector<std::array<double, 2>> net;
    if (n == 1) {
        net.push_back({1.0, 0.0});
        net.push_back({-1.0, 0.0});
        return net;
    }
    const int m = 720;
    net.reserve(m);
    for (int a = 0; a < m; ++a) {
        const double th = 2.0 * M_PI * a / m;
        net.push_back({std::cos(th), std::sin(th)});
    }
    return net;
}

/// Solves the small symmetric system G x = b in place by Gaussian
/// elimination with partial pivoting; false when G is singular.
bool solve_dense(double* G, double* b, int m) {
    for (int c = 0; c < m; ++c) {
        int pivot = c;
        for (int r = c + 1; r < m; ++r) {
            if (std::abs(G[r * m + c]) > std::abs(G[pivot * m + c])) pivot = r;
        }
        if (std::abs(G[pivot * m + c]) < 1e-300) return false;
        if (pivot != c) {
            for (int a = 0; a < m; ++a) std::swap(G[c * m + a], G[pivot * m + a]);
            std::swap(b[c], b[pivot]);
        }
        for (int r = c + 1; r < m; ++r) {
            const double f = G[r * m + c] / G[c * m + c];
            for (int a = c; a < m; ++a) G[r * m + a] -= f * G[c * m + a];
            b[r] -= f * b[c];
        }
    }
    for (int c = m; c-- > 0;) {
        double s = b[c];
        for (int a = c + 1; a < m; ++a) s -= G[c * m + a] * b[a];
        b[c] = s / G[c * m + c];
    }
    return true;
}

void require_same_layout(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_layout(b)) throw std::invalid_argument(std::string(what) + " grids differ");
}

}  // namespace

double minimal_diameter(const std::vector<std::array<double, 2>>& pts, int n) {
    if (n != 1 && n != 2) throw std::invalid_argument("spatial dimension must be 1 or 2");
    if (pts.size() < 2) return 0.0;
    if (n == 1) {
        double lo = pts[0][0], hi = pts[0][0];
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return hi - lo;
    }
    const std::vector<std::array<double, 2>> hull = convex_hull(pts);
    if (hull.size() < 3) return 0.0;
    double width = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < hull.size(); ++a) {
        width = std::min(width, edge_width(hull, a, (a + 1) % hull.size()));
    }
    return width;
}

ThicknessValue thickness(const Mask& omega, const double* x0, double t0, double r) {
    const Grid& g = omega.grid;
    if (!(r > 0.0)) throw std::invalid_argument("thickness radius must be positive");
    const double eps_t = 1e-9 * g.dt;
    if (t0 - r * r < g.t0 - eps_t) {
        throw std::invalid_argument("thickness window leaves the grid below the base time");
    }
    if (t0 + r * r > g.t1 + eps_t) {
        throw std::invalid_argument("thickness window leaves the grid above the base time");
    }
    const double eps_x = 1e-9 * g.h;
    ThicknessValue out;
    out.r = r;
    out.delta = std::numeric_limits<double>::infinity();
    std::vector<std::array<double, 2>> pts;
    for (int k = 0; k < g.nt; ++k) {
        if (std::abs(g.t_of(k) - t0) > r * r + eps_t) continue;
        pts.clear();
        for (std::size_t s = 0; s < g.slice_size(); ++s) {
            const std::size_t q = static_cast<std::size_t>(k) * g.slice_size() + s;
            if (omega[q]) continue;
            double x = 0.0, y = 0.0, t = 0.0;
            g.node_point(q, &x, &y, &t);
            const double dx = x - x0[0];
            const double dy = g.n == 2 ? y - x0[1] : 0.0;
            if (std::hypot(dx, dy) > r + eps_x) continue;
            pts.push_back({x, y});
        }
        const double delta = minimal_diameter(pts, g.n) / r;
        if (delta < out.delta) {
            out.delta = delta;
            out.slice = k;
        }
    }
    if (!std::isfinite(out.delta)) {
        throw std::invalid_argument("thickness window spans no time level");
    }
    return out;
}

NondegeneracyCheck nondegeneracy(const Field& u, const Mask& omega, const double* x0, double t0,
                                 double r, double lambda1) {
    const Grid& g = u.grid;
    require_same_layout(g, omega.grid, "field and mask");
    if (!(r > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("ellipticity constant must be positive");
    const NodeRef base = nearest_node(g, x0, t0);
    bool has_in = false, has_out = false;
    probe_phases(omega, base, &has_in, &has_out);
    if (!has_in) {
        throw std::invalid_argument("base point is not in the closure of the positivity set");
    }
    const CylinderNodes cyl = classify_cylinder(g, x0, t0, r);
    NondegeneracyCheck out;
    out.lhs = -std::numeric_limits<double>::infinity();
    for (const std::size_t q : cyl.boundary) out.lhs = std::max(out.lhs, u[q]);
    out.rhs = sample(u, x0, t0) + r * r / (2.0 * g.n * lambda1 + 1.0);
    out.margin = out.lhs - out.rhs;
    out.pass = out.margin >= -10.0 * g.h * g.h;
    return out;
}

GrowthReport quadratic_growth(const Field& u, const Mask& omega, const double* x0, double t0,
                              const std::vector<double>& rs) {
    const Grid& g = u.grid;
    require_same_layout(g, omega.grid, "field and mask");
    if (rs.empty()) throw std::invalid_argument("growth table needs at least one radius");
    const NodeRef base = nearest_node(g, x0, t0, true);
    if (!space_interior(g, base.flat)) {
        throw std::invalid_argument("growth base point needs a space-interior node");
    }
    const double u0 = u[base.flat];
    double grad[2] = {0.0, 0.0};
    diff_gradient(u, base.flat, grad);

    GrowthReport out;
    out.rows.reserve(rs.size());
    for (const double r : rs) {
        if (!(r > 0.0)) throw std::invalid_argument("growth radii must be positive");
        double sup = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            if (!in_cylinder(g, x0, t0, r, q)) continue;
            double x = 0.0, y = 0.0, t = 0.0;
            g.node_point(q, &x, &y, &t);
            const double plane = u0 + grad[0] * (x - x0[0]) + grad[1] * (y - x0[1]);
            sup = std::max(sup, std::abs(u[q] - plane));
        }
        out.rows.push_back({r, sup / (r * r)});
        out.c_bar = std::max(out.c_bar, out.rows.back().s);
    }
    for (std::size_t q = g.slice_size(); q < g.size(); ++q) {
        if (!space_interior(g, q) || !in_cylinder(g, x0, t0, 0.5, q)) continue;
        if (mask_flip_near(omega, q, 2)) {
            ++out.band_skipped;
            continue;
        }
        out.sup_second_order =
            std::max(out.sup_second_order, tilde_norm(diff_hessian(u, q), diff_ut(u, q)));
        ++out.second_order_nodes;
    }
    return out;
}

DecayTable time_decay(const Field& u, const Mask& omega, par::Mode mode) {
    const Grid& g = u.grid;
    require_same_layout(g, omega.grid, "field and mask");
    DecayTable out;
    const std::size_t on = count_true(omega);
    if (on == 0 || on == g.size()) {
        out.boundary_empty = true;
        return out;
    }
    const std::size_t slice = g.slice_size();
    std::vector<double> dist(g.size());
    par::for_each(mode, static_cast<std::size_t>(g.nt),
                  [&](std::size_t k) { level_distance(omega, static_cast<int>(k), &dist[k * slice]); });

    double far = 0.0;
    for (std::size_t q = slice; q < g.size(); ++q) {
        if (omega[q] && dist[q] < 1e7) far = std::max(far, dist[q] * g.h);
    }
    for (double d = 2.0 * g.h; d <= far * (1.0 + 1e-12); d *= 2.0) {
        DecayRow row;
        row.d = d;
        for (std::size_t q = slice; q < g.size(); ++q) {
            if (!omega[q]) continue;
            const double dq = dist[q] * g.h;
            if (dq < d || dq >= 2.0 * d || dist[q] >= 1e7) continue;
            row.sup_ut = std::max(row.sup_ut, std::abs(diff_ut(u, q)));
            ++row.nodes;
        }
        out.rows.push_back(row);
    }
    return out;
}

MonotonicityCheck monotonicity_check(const Field& u, const double* e, double c0, double lambda1) {
    const Grid& g = u.grid;
    if (!(lambda1 > 0.0)) throw std::invalid_argument("ellipticity constant must be positive");
    double norm2 = e[g.n] * e[g.n];
    for (int a = 0; a < g.n; ++a) norm2 += e[a] * e[a];
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9) {
        throw std::invalid_argument("direction must be a space-time unit vector");
    }
    MonotonicityCheck out;
    out.m1 = std::numeric_limits<double>::infinity();
    out.m2 = std::numeric_limits<double>::infinity();
    for (std::size_t q = g.slice_size(); q < g.size(); ++q) {
        if (!space_interior(g, q) || !in_cylinder(g, kOrigin, g.t1, 1.0, q)) continue;
        double grad[2] = {0.0, 0.0};
        diff_gradient(u, q, grad);
        double du = diff_ut(u, q) * e[g.n];
        for (int a = 0; a < g.n; ++a) du += grad[a] * e[a];
        const double v = c0 * du - u[q];
        out.m1 = std::min(out.m1, v);
        if (in_cylinder(g, kOrigin, g.t1, 0.5, q)) out.m2 = std::min(out.m2, v);
    }
    out.threshold = 1.0 / (4.0 * (2.0 * g.n * lambda1 + 1.0));
    out.hypothesis_holds = out.m1 >= -out.threshold;
    out.conclusion_holds = out.m2 >= -10.0 * g.h * g.h;
    return out;
}

BlowupFit blowup_fit(const Operator& op, const Field& u, const Mask& omega, const double* x0,
                     double t0, const std::vector<double>& rs, par::Mode mode) {
    const Grid& g = u.grid;
    require_same_layout(g, omega.grid, "field and mask");
    if (rs.empty()) throw std::invalid_argument("blow-up fit needs at least one radius");
    for (std::size_t a = 0; a < rs.size(); ++a) {
        if (rs[a] < 8.0 * g.h * (1.0 - 1e-12)) {
            throw std::invalid_argument("blow-up radius spans fewer than eight spatial steps");
        }
        if (a > 0 && !(rs[a] < rs[a - 1])) {
            throw std::invalid_argument("blow-up radii must decrease strictly");
        }
    }
    const NodeRef base = nearest_node(g, x0, t0);
    bool has_in = false, has_out = false;
    probe_phases(omega, base, &has_in, &has_out);
    if (!has_in || !has_out) {
        throw std::invalid_argument("base point is not on the detected interface");
    }

    const Grid ref = make_grid(g.n, g.n == 1 ? 65 : 33, 1.0, -0.5, 0.0);
    struct FitNode {
        std::size_t q;
        double x[2];
        double tau;
    };
    std::vector<FitNode> fit;
    for (std::size_t q = 0; q < ref.size(); ++q) {
        if (!in_cylinder(ref, kOrigin, 0.0, 0.5, q)) continue;
        double x = 0.0, y = 0.0, t = 0.0;
        ref.node_point(q, &x, &y, &t);
        fit.push_back({q, {x, y}, t});
    }
    // Time-derivative sups stay away from the interface: nodes whose
    // pullback lands within two source steps of a mask flip are excluded,
    // like every other interface-adjacent derivative measurement.
    const auto near_source_interface = [&](const FitNode& node, double r) {
        const auto clamp_index = [](double s, int count) {
            const long v = std::lround(s);
            return static_cast<int>(std::min<long>(std::max<long>(v, 0), count - 1));
        };
        const int i = clamp_index((x0[0] + r * node.x[0] + g.L) / g.h, g.nx);
        const int k = clamp_index((t0 + r * r * node.tau - g.t0) / g.dt, g.nt);
        std::size_t flat = 0;
        if (g.n == 1) {
            flat = g.flat(i, k);
        } else {
            const int j = clamp_index((x0[1] + r * node.x[1] + g.L) / g.h, g.nx);
            flat = g.flat(i, j, k);
        }
        return mask_flip_near(omega, flat, 2);
    };
    const std::vector<std::array<double, 2>> net = spatial_net(g.n);
    const int nb = g.n + 2;  // basis: profile, spatial coordinates, constant

    BlowupFit out;
    out.rows.reserve(rs.size());
    for (const double r : rs) {
        const Field w = rescale_field(u, x0, t0, r, ref, mode);

        // Gram entries among {y, 1} and their products with w do not depend
        // on the direction; only the profile column does.
        double yy[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        double y1[2] = {0.0, 0.0}, wy[2] = {0.0, 0.0};
        double s11 = 0.0, w1 = 0.0, sww = 0.0;
        for (const FitNode& node : fit) {
            const double wq = w[node.q];
            sww += wq * wq;
            w1 += wq;
            s11 += 1.0;
            for (int a = 0; a < g.n; ++a) {
                wy[a] += wq * node.x[a];
                y1[a] += node.x[a];
                for (int b = 0; b < g.n; ++b) yy[a][b] += node.x[a] * node.x[b];
            }
        }

        BlowupRow row;
        row.r = r;
        double best = std::numeric_limits<double>::infinity();
        double best_theta[4] = {0.0, 0.0, 0.0, 0.0};
        for (const auto& e : net) {
            double spp = 0.0, spw = 0.0, sp1 = 0.0;
            double spy[2] = {0.0, 0.0};
            for (const FitNode& node : fit) {
                const double d = node.x[0] * e[0] + node.x[1] * e[1];
                if (d <= 0.0) continue;
                const double phi = 0.5 * d * d;
                spp += phi * phi;
                spw += phi * w[node.q];
                sp1 += phi;
                for (int a = 0; a < g.n; ++a) spy[a] += phi * node.x[a];
            }
            double G[16], rhs[4];
            G[0] = spp;
            rhs[0] = spw;
            for (int a = 0; a < g.n; ++a) {
                G[a + 1] = G[(a + 1) * nb] = spy[a];
                rhs[a + 1] = wy[a];
                for (int b = 0; b < g.n; ++b) G[(a + 1) * nb + b + 1] = yy[a][b];
                G[(a + 1) * nb + nb - 1] = G[(nb - 1) * nb + a + 1] = y1[a];
            }
            G[nb - 1] = G[(nb - 1) * nb] = sp1;
            G[nb * nb - 1] = s11;
            rhs[nb - 1] = w1;
            double theta[4];
            std::copy(rhs, rhs + nb, theta);
            if (!solve_dense(G, theta, nb)) continue;
            if (!(theta[0] > 0.0)) continue;
            double res2 = sww;
            res2 -= theta[0] * spw;
            for (int a = 0; a < g.n; ++a) res2 -= theta[a + 1] * wy[a];
            res2 -= theta[nb - 1] * w1;
            res2 = std::max(0.0, res2);
            if (res2 < best) {
                best = res2;
                row.gamma = theta[0];
                row.e[0] = e[0];
                row.e[1] = e[1];
                std::copy(theta, theta + nb, best_theta);
            }
        }
        if (!std::isfinite(best)) {
            throw std::runtime_error("no direction fits a positive half-space profile");
        }
        double den = 0.0;
        for (const FitNode& node : fit) {
            double affine = best_theta[nb - 1];
            for (int a = 0; a < g.n; ++a) affine += best_theta[a + 1] * node.x[a];
            const double v = w[node.q] - affine;
            den += v * v;
        }
        row.residual = den > 0.0 ? std::sqrt(best / den) : 0.0;
        for (const FitNode& node : fit) {
            if (node.q < ref.slice_size() || near_source_interface(node, r)) continue;
            row.m_hat = std::max(row.m_hat, std::abs(diff_ut(w, node.q)));
        }
        out.rows.push_back(row);
    }
    out.e[0] = out.rows.back().e[0];
    out.e[1] = out.rows.back().e[1];
    out.gamma = out.rows.back().gamma;
    out.gamma_reference = halfspace_gamma(op, out.e);
    return out;
}

std::vector<std::array<double, 3>> interface_points(const Mask& omega) {
    const Grid& g = omega.grid;
    std::vector<std::array<double, 3>> mids;
    for (int k = 0; k < g.nt; ++k) {
        const double t = g.t_of(k);
        if (g.n == 1) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                if (omega.at(i, k) != omega.at(i + 1, k)) {
                    mids.push_back({g.x_of(i) + 0.5 * g.h, 0.0, t});
                }
            }
        } else {
            for (int j = 0; j < g.nx; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    if (i + 1 < g.nx && omega.at(i, j, k) != omega.at(i + 1, j, k)) {
                        mids.push_back({g.x_of(i) + 0.5 * g.h, g.x_of(j), t});
                    }
                    if (j + 1 < g.nx && omega.at(i, j, k) != omega.at(i, j + 1, k)) {
                        mids.push_back({g.x_of(i), g.x_of(j) + 0.5 * g.h, t});
                    }
                }
            }
        }
    }
    for (std::size_t q = 0; q + g.slice_size() < g.size(); ++q) {
        if (omega[q] == omega[q + g.slice_size()]) continue;
        double x = 0.0, y = 0.0, t = 0.0;
        g.node_point(q, &x, &y, &t);
        mids.push_back({x, y, t + 0.5 * g.dt});
    }
    return mids;
}

GraphReport graph_fit(const Mask& omega, const double* x0, double t0,
                      const std::vector<double>& rs) {
    const Grid& g = omega.grid;
    if (rs.empty()) throw std::invalid_argument("graph fit needs at least one radius");
    for (const double r : rs) {
        if (!(r > 0.0)) throw std::invalid_argument("graph fit radii must be positive");
    }

    const std::vector<std::array<double, 3>> mids = interface_points(omega);
    const std::vector<std::array<double, 2>> net = spatial_net(g.n);
    const double eps_x = 1e-9 * g.h;
    const double eps_t = 1e-9 * g.dt;

    GraphReport out;
    std::vector<double> radii = rs;
    std::sort(radii.begin(), radii.end(), std::greater<double>());
    std::vector<std::array<double, 3>> q;
    for (const double r : radii) {
        q.clear();
        for (const auto& p : mids) {
            const double dx = p[0] - x0[0];
            const double dy = g.n == 2 ? p[1] - x0[1] : 0.0;
            const double dt = p[2] - t0;
            if (std::hypot(dx, dy) > r + eps_x) continue;
            if (dt > eps_t || dt < -r * r - eps_t) continue;
            q.push_back({dx, dy, dt / r});
        }
        GraphRow row;
        row.r = r;
        row.points = q.size();
        if (q.size() < 4) {
            row.skipped = true;
            out.rows.push_back(row);
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (const auto& nu : net) {
            double s = 0.0;
            for (const auto& d : q) {
                const double a = d[0] * nu[0] + d[1] * nu[1];
                const double px = d[0] - a * nu[0];
                const double py = d[1] - a * nu[1];
                const double b = std::sqrt(px * px + py * py + d[2] * d[2]);
                const double slack = std::abs(a) - 2.0 * g.h;
                if (slack <= 0.0) continue;
                if (b <= 1e-12) {
                    s = std::numeric_limits<double>::infinity();
                    break;
                }
                s = std::max(s, slack / b);
            }
            if (s < best) {
                best = s;
                row.e[0] = nu[0];
                row.e[1] = nu[1];
            }
        }
        row.s = best;
        out.rows.push_back(row);
    }

    std::vector<std::size_t> kept;
    for (std::size_t a = 0; a < out.rows.size(); ++a) {
        if (!out.rows[a].skipped) kept.push_back(a);
    }
    if (!kept.empty()) {
        std::size_t start = kept.size() - 1;
        while (start > 0) {
            const GraphRow& prev = out.rows[kept[start - 1]];
            const GraphRow& next = out.rows[kept[start]];
            if (next.s > prev.s + 2.0 * g.h / next.r) break;
            --start;
        }
        out.r0 = out.rows[kept[start]].r;
        out.c1_monotone = start == 0;
    }
    return out;
}

}  // namespace parafree

#include "parafree/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "parafree/analysis.hpp"
#include "parafree/free_boundary.hpp"
#include "parafree/grid.hpp"
#include "parafree/ladder.hpp"
#include "parafree/model_fields.hpp"
#include "parafree/operators.hpp"
#include "parafree/polynomial.hpp"
#include "parafree/rescale.hpp"
#include "parafree/sym_matrix.hpp"

namespace parafree {

namespace {

constexpr double kOrigin[2] = {0.0, 0.0};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Default node counts divided by the coarsening factor; the -1/+1 keeps the
/// counts odd so the origin stays a node.
int scaled(int base_nx, int h_scale) { return (base_nx - 1) / h_scale + 1; }

int refined(int nx) { return 2 * (nx - 1) + 1; }

double sup_diff(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t q = 0; q < a.data.size(); ++q) {
        worst = std::max(worst, std::abs(a.data[q] - b.data[q]));
    }
    return worst;
}

/// Distance of a polynomial's second-order data from a target space-time
/// jet (diagonal spatial part m_d, time slope c).
double jet_distance(const ParabolicPolynomial& p, double m_d, double c) {
    const SymMat target = SymMat::diag(p.n, m_d, m_d);
    return tilde_norm(p.m - target, p.c - c);
}

/// First masked node on one level, -1 when the level is uniform.
int flip_index(const Mask& m, int k) {
    for (int i = 0; i + 1 < m.grid.nx; ++i) {
        if (m.at(i, k) != m.at(i + 1, k)) return i + 1;
    }
    return -1;
}

/// Interface midpoints admissible as nondegeneracy base points: spatial
/// faces sitting on a time level, far enough from the box sides and deep
/// enough above the bottom to fit Q_{r_max}, thinned to at most `want`.
std::vector<std::array<double, 3>> sampled_interface(const Mask& omega, double r_max, int want) {
    const Grid& g = omega.grid;
    std::vector<std::array<double, 3>> keep;
    for (const std::array<double, 3>& p : interface_points(omega)) {
        if (std::abs(p[0]) > g.L - r_max - 2.0 * g.h) continue;
        if (g.n == 2 && std::abs(p[1]) > g.L - r_max - 2.0 * g.h) continue;
        if (p[2] < g.t0 + r_max * r_max - 1e-12) continue;
        const double level = (p[2] - g.t0) / g.dt;
        if (std::abs(level - std::round(level)) > 1e-9) continue;
        keep.push_back(p);
    }
    if (keep.size() <= static_cast<std::size_t>(want)) return keep;
    std::vector<std::array<double, 3>> out;
    const std::size_t stride = keep.size() / static_cast<std::size_t>(want);
    for (std::size_t a = 0; a < keep.size() && out.size() < static_cast<std::size_t>(want);
         a += stride) {
        out.push_back(keep[a]);
    }
    return out;
}

// --- criterion 1: closed-form extremal operators against a net oracle ----

CriterionResult criterion_operator_oracle() {
    CriterionResult res{1, "operator-oracle", false, ""};

    // The admissible coefficients are linear in the objective, so netting
    // each eigendirection weight over [lo, hi] is exhaustive as long as the
    // net carries both endpoints; eigenvalues come from the direct quadratic
    // formula rather than the library path.
    std::mt19937 rng(90210u);
    std::uniform_real_distribution<double> entry(-3.0, 3.0);
    std::uniform_real_distribution<double> lo_dist(0.4, 1.6);
    std::uniform_real_distribution<double> gap_dist(0.1, 2.0);
    const int net = 50;
    double worst_net = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const int n = (s % 2) + 1;
        const SymMat m = n == 1 ? SymMat::make(1, entry(rng), 0.0, 0.0)
                                : SymMat::make(2, entry(rng), entry(rng), entry(rng));
        const double lo = lo_dist(rng);
        const double hi = lo + gap_dist(rng);
        double ev[2] = {m.xx, 0.0};
        int ev_count = 1;
        if (n == 2) {
            const double mean = 0.5 * (m.xx + m.yy);
            const double disc =
                std::sqrt(0.25 * (m.xx - m.yy) * (m.xx - m.yy) + m.xy * m.xy);
            ev[0] = mean - disc;
            ev[1] = mean + disc;
            ev_count = 2;
        }
        double best_hi = -std::numeric_limits<double>::infinity();
        double best_lo = std::numeric_limits<double>::infinity();
        for (int ia = 0; ia < net; ++ia) {
            const double a = lo + (hi - lo) * ia / (net - 1);
            const double va = a * ev[0];
            if (ev_count == 1) {
                best_hi = std::max(best_hi, va);
                best_lo = std::min(best_lo, va);
                continue;
            }
            for (int ib = 0; ib < net; ++ib) {
                const double b = lo + (hi - lo) * ib / (net - 1);
                const double v = va + b * ev[1];
                best_hi = std::max(best_hi, v);
                best_lo = std::min(best_lo, v);
            }
        }
        worst_net = std::max(worst_net, std::abs(pucci_plus(m, lo, hi) - best_hi));
        worst_net = std::max(worst_net, std::abs(pucci_minus(m, lo, hi) - best_lo));
    }

    const Operator ops[] = {
        make_linear(SymMat::make(2, 1.4, 0.2, 0.8)),
        make_bellman(1, {SymMat::diag(1, 1.0), SymMat::diag(1, 1.5), SymMat::diag(1, 2.0)}),
        make_bellman(2,
                     {SymMat::diag(2, 1.0, 2.0), SymMat::diag(2, 2.0, 1.0),
                      SymMat::make(2, 1.5, 0.25, 1.5)},
                     PolicySense::Min),
        make_pucci_plus(1, 1.0, 2.0),
        make_pucci_plus(2, 1.0, 2.0),
        make_pucci_minus(2, 0.5, 1.0),
    };
    double worst_gap = 0.0;
    bool structure_ok = true;
    for (const Operator& op : ops) {
        const OperatorCheck check = validate(op, 1000, 416u);
        structure_ok = structure_ok && check.zero_at_zero && check.sandwiched;
        worst_gap = std::max({worst_gap, check.worst_upper_gap, check.worst_lower_gap});
    }

    res.pass = worst_net <= 1e-10 && worst_gap <= 1e-12 && structure_ok;
    res.detail = "closed form vs 50-point nets on 1000 matrices: max delta " + num(worst_net) +
                 " (<= 1e-10); extremal sandwich on 1000 pairs x 6 operators: worst gap " +
                 num(worst_gap) + " (<= 1e-12)";
    return res;
}

// --- criterion 2: half-space profile coefficient --------------------------

CriterionResult criterion_halfspace_coefficient() {
    CriterionResult res{2, "halfspace-coefficient", false, ""};
    const double ex[2] = {1.0, 0.0};

    double dev = 0.0;
    dev = std::max(dev, std::abs(halfspace_gamma(make_linear(SymMat::identity(1)), ex) - 1.0));
    dev = std::max(dev, std::abs(halfspace_gamma(make_pucci_plus(1, 1.0, 2.0), ex) - 0.5));
    dev = std::max(dev, std::abs(halfspace_gamma(make_pucci_minus(1, 0.5, 1.0), ex) - 2.0));
    const double tilt[2] = {std::cos(0.4), std::sin(0.4)};
    dev = std::max(dev, std::abs(halfspace_gamma(make_linear(SymMat::identity(2)), tilt) - 1.0));

    // Range property on sampled operators and directions: the coefficient
    // always lands between the reciprocal ellipticity bounds.
    std::mt19937 rng(1105u);
    std::uniform_real_distribution<double> bound(0.4, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double worst_range = -std::numeric_limits<double>::infinity();
    const int samples = 40;
    for (int s = 0; s < samples; ++s) {
        const int n = (s % 2) + 1;
        const double lo = bound(rng);
        const double hi = lo + 0.1 + 0.5 * bound(rng);
        Operator op;
        switch (s % 4) {
            case 0: op = make_pucci_plus(n, lo, hi); break;
            case 1: op = make_pucci_minus(n, lo, hi); break;
            case 2:
                op = make_bellman(n, {SymMat::diag(n, lo, hi), SymMat::diag(n, hi, lo),
                                      SymMat::diag(n, 0.5 * (lo + hi), lo)});
                break;
            default: op = make_linear(SymMat::diag(n, lo, hi)); break;
        }
        double e[2] = {1.0, 0.0};
        if (n == 1) {
            e[0] = (s % 8) < 4 ? 1.0 : -1.0;
        } else {
            const double a = angle(rng);
            e[0] = std::cos(a);
            e[1] = std::sin(a);
        }
        const double gamma = halfspace_gamma(op, e);
        worst_range = std::max(worst_range, 1.0 / op.lambda_hi - gamma);
        worst_range = std::max(worst_range, gamma - 1.0 / op.lambda_lo);
    }

    res.pass = dev <= 1e-10 && worst_range <= 1e-9;
    res.detail = "closed-form coefficients off by " + num(dev) +
                 " (<= 1e-10); range slack over " + std::to_string(samples) +
                 " sampled operators " + num(worst_range) + " (<= 1e-09)";
    return res;
}

// --- criterion 3: the half-space profile is a stationary solve ------------

CriterionResult criterion_halfspace_preservation(const AcceptanceOptions& o) {
    CriterionResult res{3, "halfspace-preservation", false, ""};
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const double e[2] = {1.0, 0.0};

    bool converged = true;
    const auto drift = [&](int nx, double* h_out) {
        const Grid g = make_grid(1, nx, 1.0, -0.0625, 0.0);
        const Field data = make_halfspace_field(g, op, e);
        FreeBoundaryParams params;
        const FreeBoundarySolution sol = solve_free_boundary(op, data, params, o.mode);
        converged = converged && sol.mask_converged;
        *h_out = g.h;
        return sup_diff(sol.u, data);
    };

    const int nx = scaled(257, o.h_scale);
    double h1 = 0.0, h2 = 0.0;
    const double dev1 = drift(nx, &h1);
    const double dev2 = drift(refined(nx), &h2);
    const double shrink = dev2 > 0.0 ? dev1 / dev2 : std::numeric_limits<double>::infinity();

    res.pass = converged && dev1 <= 10.0 * h1 * h1 && dev2 <= 10.0 * h2 * h2 && shrink >= 3.0;
    res.detail = "sup drift " + num(dev1) + " (<= 10h^2 = " + num(10.0 * h1 * h1) +
                 "), refined " + num(dev2) + " (<= " + num(10.0 * h2 * h2) + "); shrink " +
                 num(shrink) + "x (>= 3x)" + (converged ? "" : "; mask iteration stalled");
    return res;
}

// --- criterion 4: the nonconvex fixture as negative/positive control ------

CriterionResult criterion_nonconvex_control(const AcceptanceOptions& o) {
    CriterionResult res{4, "nonconvex-control", false, ""};
    const Operator op = make_linear(SymMat::identity(1));
    const Grid g = make_grid(1, scaled(257, o.h_scale), 1.0, -0.25, 0.0);
    const Field u = make_nonconvex_field(g);
    const Mask omega = apply_mask_rule(u, MaskRule::GradientThreshold, 1.0);

    const VerifyReport report = verify_solution(op, u, omega, -1.0, o.mode);
    const double eq_bound = 10.0 * g.h * g.h;
    const bool eq_ok = report.eq_nodes > 0 && report.sup_eq_error <= eq_bound;
    const bool bound_ok =
        report.comp_nodes > 0 && std::abs(report.sup_second_order - 2.0) <= 1e-9;

    // No decay anywhere: the drift term keeps the time derivative at 2 in
    // every distance band, which is exactly why the solution set has to
    // carry the whole support of u.
    const DecayTable decay = time_decay(u, omega, o.mode);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const DecayRow& row : decay.rows) {
        if (row.nodes == 0) continue;
        lo = std::min(lo, row.sup_ut);
        hi = std::max(hi, row.sup_ut);
    }
    const double flatness = (hi > 0.0 && lo <= hi) ? lo / hi : 0.0;
    const bool no_decay = !decay.rows.empty() && flatness >= 0.9;

    res.pass = eq_ok && bound_ok && no_decay;
    res.detail = "eq residual " + num(report.sup_eq_error) + " (<= " + num(eq_bound) +
                 "); complement bound " + num(report.sup_second_order) +
                 " (= 2 +- 1e-09); band flatness " + num(flatness) + " (>= 0.9, no decay)";
    return res;
}

// --- criterion 5: boundary maxima beat the quadratic growth rate ----------

CriterionResult criterion_nondegeneracy(const AcceptanceOptions& o) {
    CriterionResult res{5, "boundary-nondegeneracy", false, ""};
    const Operator lin = make_linear(SymMat::identity(1));
    const Grid g = make_grid(1, scaled(257, o.h_scale), 1.0, -0.1875, 0.0);
    const double e[2] = {1.0, 0.0};
    const std::vector<double> radii = {0.0625, 0.125, 0.25};
    const double t_base = -0.0625;

    // Closed-form case: boundary max r^2/2 against the rate r^2/3, margin
    // r^2/6 on the nose.
    const Field half = make_halfspace_field(g, lin, e);
    const Mask true_mask = make_halfspace_mask(g, e);
    double exact_dev = 0.0;
    for (const double r : radii) {
        const NondegeneracyCheck c = nondegeneracy(half, true_mask, kOrigin, t_base, r, 1.0);
        exact_dev = std::max(exact_dev, std::abs(c.margin - r * r / 6.0));
    }

    // Detected-interface sweep over the gradient-rule masks of both
    // closed-form fixtures. The masks repeat level to level, so a thinned
    // sample of faces loses nothing.
    const Field noncvx = make_nonconvex_field(g);
    const std::pair<const Field*, Mask> fixtures[] = {
        {&half, apply_mask_rule(half, MaskRule::GradientThreshold, 1.0)},
        {&noncvx, apply_mask_rule(noncvx, MaskRule::GradientThreshold, 1.0)},
    };
    double worst_margin = std::numeric_limits<double>::infinity();
    bool all_pass = true;
    std::size_t points = 0;
    for (const auto& [field, omega] : fixtures) {
        for (const std::array<double, 3>& p : sampled_interface(omega, radii.back(), 16)) {
            ++points;
            const double x0[2] = {p[0], p[1]};
            for (const double r : radii) {
                const NondegeneracyCheck c = nondegeneracy(*field, omega, x0, p[2], r, 1.0);
                worst_margin = std::min(worst_margin, c.margin);
                all_pass = all_pass && c.pass;
            }
        }
    }

    res.pass = points > 0 && all_pass && exact_dev <= 1e-12;
    res.detail = "worst margin " + num(worst_margin) + " (>= -10h^2 = " + num(-10.0 * g.h * g.h) +
                 ") at " + std::to_string(points) + " detected points x 3 radii; closed-form " +
                 "margin off by " + num(exact_dev) + " (<= 1e-12)";
    return res;
}

// --- criterion 6: quadratic approximation ladder ---------------------------

CriterionResult criterion_ladder(const AcceptanceOptions& o) {
    CriterionResult res{6, "approximation-ladder", false, ""};
    const Operator lin = make_linear(SymMat::identity(1));
    const int nx = scaled(257, o.h_scale);
    LadderParams params;
    params.k_max = 4;
    // Pinned unit-solve resolution: every source grid here is a power-of-two
    // refinement of it, so rung sampling stays interpolation-free while the
    // refinement axis remains the source field.
    params.nx_ref = 129;

    double worst_ratio = 0.0;
    double worst_h = 0.0;
    const auto absorb = [&](const LadderResult& ladder) {
        for (const LadderStep& step : ladder.steps) {
            worst_ratio = std::max(worst_ratio, step.ratio);
            worst_h = std::max(worst_h, std::abs(h_of(lin, step.p)));
        }
    };

    // Exact quadratic input: the ladder is a fixed point and the jet is hit
    // at solver precision.
    const Grid gq = make_grid(1, nx, 1.0, -0.5, 0.0);
    const LadderResult quad = run_ladder(lin, make_caloric_field(gq), params, o.mode);
    absorb(quad);

    // Smooth non-polynomial input solving the same equation: rung over rung
    // the second-order data converges to the closed-form jet at the origin.
    Field smooth = make_field(gq);
    for (std::size_t q = 0; q < gq.size(); ++q) {
        double x = 0.0, y = 0.0, t = 0.0;
        gq.node_point(q, &x, &y, &t);
        smooth[q] = 0.3 * std::exp(x + t);
    }
    const LadderResult exp_ladder = run_ladder(lin, smooth, params, o.mode);
    absorb(exp_ladder);

    bool monotone = true;
    double jet_last = 0.0;
    // Each rung resolves the jet only down to its own sampling floor
    // h^2 / rho^(2k) (interpolation error brought back to unit scale), so
    // monotonicity is required with that floor as slack. The ladder stops
    // before rho^k reaches 4h, which caps the slack at 1/16 -- far below any
    // genuine divergence.
    const auto check_jets = [&](const LadderResult& ladder, double m_d, double c) {
        double prev = std::numeric_limits<double>::infinity();
        for (const LadderStep& step : ladder.steps) {
            const double d = jet_distance(step.p, m_d, c);
            const double floor = gq.h * gq.h / std::pow(ladder.rho, 2.0 * step.k);
            monotone = monotone && d <= prev + floor;
            prev = d;
        }
        return prev;
    };
    check_jets(quad, 2.0, 2.0);
    jet_last = check_jets(exp_ladder, 0.3, 0.3);
    const bool converged = jet_last <= 0.1 * jet_distance(ParabolicPolynomial{}, 0.3, 0.3);

    // Half-space input: fitted deviation constant at most one, stable under
    // refinement of the source grid.
    const auto fitted = [&](int nxi) {
        const Grid gh = make_grid(1, nxi, 1.0, -1.0, 0.0);
        const double e[2] = {1.0, 0.0};
        const LadderResult ladder = run_ladder(lin, make_halfspace_field(gh, lin, e), params, o.mode);
        absorb(ladder);
        return ladder.fitted_c;
    };
    const double c_coarse = fitted(nx);
    const double c_fine = fitted(refined(nx));
    const double c_ratio = c_coarse > 0.0 ? c_fine / c_coarse : 0.0;
    const bool c_ok = c_coarse <= 1.0 && c_fine <= 1.0 && c_ratio >= 0.5 && c_ratio <= 2.0;

    res.pass = worst_ratio <= 1.5 && monotone && converged && c_ok && worst_h <= 1e-10;
    res.detail = "deviation ratio " + num(worst_ratio) + " (<= 1.5); jet distance monotone " +
                 std::string(monotone ? "yes" : "NO") + ", last " + num(jet_last) +
                 "; fitted C " + num(c_coarse) + " -> " + num(c_fine) +
                 " (<= 1, ratio in [0.5, 2]); max |H(P)| " + num(worst_h) + " (<= 1e-10)";
    return res;
}

// --- criterion 7: complement thickness -------------------------------------

CriterionResult criterion_thickness(const AcceptanceOptions& o) {
    CriterionResult res{7, "complement-thickness", false, ""};
    const Grid g = make_grid(1, scaled(257, o.h_scale), 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};
    const Mask half = make_halfspace_mask(g, e);

    // Half-space value is one at every scale, within the node rounding of
    // the window.
    double half_budget = 0.0;  // worst |delta - 1| against its 2h/r budget
    for (const double r : {0.5, 0.25, 0.125}) {
        const ThicknessValue tv = thickness(half, kOrigin, -0.5, r);
        half_budget = std::max(half_budget, std::abs(tv.delta - 1.0) / (2.0 * g.h / r));
    }

    // Quadratic profile: the complement is one grid line, so the width
    // vanishes identically.
    ParabolicPolynomial p2;
    p2.n = 1;
    p2.m = SymMat::diag(1, 1.0);
    const Field quad = make_polynomial_field(g, p2);
    Mask quad_mask = make_mask(g);
    for (std::size_t q = 0; q < g.size(); ++q) quad_mask.set(q, quad[q] > 0.0);
    const double p2_delta = thickness(quad_mask, kOrigin, -0.5, 0.25).delta;

    // Scaling identity: the value at (X0, r) agrees with the unit-scale
    // value of the rescaled set. Carrier fields whose sign reproduces the
    // mask make the rescaled set samplable.
    const Grid ref = make_grid(1, 65, 1.0, -2.5, 0.0);
    const Operator lin = make_linear(SymMat::identity(1));
    double identity_budget = 0.0;
    const auto identity_gap = [&](const Field& carrier, const Mask& omega, const double* x0,
                                  double t0, double r) {
        const ThicknessValue src = thickness(omega, x0, t0, r);
        const Field w = rescale_field(carrier, x0, t0, r, ref);
        Mask zoomed = make_mask(ref);
        for (std::size_t q = 0; q < ref.size(); ++q) zoomed.set(q, w[q] > 0.0);
        const ThicknessValue dst = thickness(zoomed, kOrigin, -1.25, 1.0);
        identity_budget =
            std::max(identity_budget, std::abs(src.delta - dst.delta) / (4.0 * g.h / r));
    };
    const Field half_field = make_halfspace_field(g, lin, e);
    const double inside[2] = {0.0625, 0.0};
    identity_gap(half_field, half, inside, -0.5, 0.25);
    Field line = make_field(g);  // sign carrier of the nonconvex mask {x > 0}
    for (std::size_t q = 0; q < g.size(); ++q) {
        double x = 0.0, y = 0.0, t = 0.0;
        g.node_point(q, &x, &y, &t);
        line[q] = x;
    }
    const double outside[2] = {-0.03125, 0.0};
    identity_gap(line, make_nonconvex_mask(g), outside, -0.5, 0.25);
    identity_gap(quad, quad_mask, kOrigin, -0.5, 0.25);

    res.pass = half_budget <= 1.0 && p2_delta == 0.0 && identity_budget <= 1.0;
    res.detail = "half-space |delta - 1| at " + num(half_budget) +
                 " of the 2h/r budget (<= 1); quadratic-profile delta " + num(p2_delta) +
                 " (= 0 exactly); scaling identity at " + num(identity_budget) +
                 " of the 4h/r budget (<= 1)";
    return res;
}

// --- criterion 8: directional monotonicity ---------------------------------

CriterionResult criterion_monotonicity(const AcceptanceOptions& o) {
    CriterionResult res{8, "directional-monotonicity", false, ""};
    const Grid g = make_grid(1, scaled(257, o.h_scale), 1.0, -1.0, 0.0);
    const Operator lin = make_linear(SymMat::identity(1));
    const double ex[2] = {1.0, 0.0};
    const double et[2] = {0.0, 1.0};
    const double slack = 10.0 * g.h * g.h;

    // The fixtures are history-deep fields; keeping one alive at a time
    // bounds the working set.
    MonotonicityCheck strong, counter;
    {
        const Field half = make_halfspace_field(g, lin, ex);
        strong = monotonicity_check(half, ex, 1.0, 1.0);
        // Dropping the drift multiplier turns the half-space check into its
        // own counter-case: both sides fail together and the deficit bottoms
        // out at -1/8 on the far edge of the positive phase.
        counter = monotonicity_check(half, ex, 0.0, 1.0);
    }
    MonotonicityCheck time_dir;
    {
        const Field caloric = make_caloric_field(g);
        time_dir = monotonicity_check(caloric, et, 1.0, 1.0);
    }
    const bool threshold_exact = strong.threshold == 1.0 / 12.0;

    double worst_m2 = std::numeric_limits<double>::infinity();
    bool implication = true;
    int held = 0;
    for (const MonotonicityCheck* c : {&strong, &time_dir}) {
        if (!c->hypothesis_holds) continue;
        ++held;
        worst_m2 = std::min(worst_m2, c->m2);
        implication = implication && c->conclusion_holds && c->m2 >= -slack;
    }

    const bool counter_ok = !counter.hypothesis_holds && !counter.conclusion_holds &&
                            std::abs(counter.m2 + 0.125) <= slack;

    res.pass = threshold_exact && held == 2 && implication && counter_ok;
    res.detail = std::string("threshold 1/12 ") + (threshold_exact ? "exact" : "WRONG") +
                 "; hypothesis holds on " + std::to_string(held) + "/2 fixtures, worst m2 " +
                 num(worst_m2) + " (>= " + num(-slack) + "); counter-case m2 " + num(counter.m2) +
                 " (= -0.125 +- " + num(slack) + "), fails both sides " +
                 (counter_ok ? "yes" : "NO");
    return res;
}

// --- criterion 9: blow-up profile signature --------------------------------

CriterionResult criterion_blowup(const AcceptanceOptions& o) {
    CriterionResult res{9, "blowup-signature", false, ""};
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const int nx = scaled(257, o.h_scale);
    // Base times, radii, and history depth all follow the step size: the
    // fitted profile scale carries a relative offset of about 2h/r, so the
    // radii that resolve it within tolerance are fixed multiples of h.
    const double hx = 2.0 / (nx - 1);
    const Grid g = make_grid(1, nx, 1.0, -5120.0 * hx * hx, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field data = make_halfspace_field(g, op, e);

    FreeBoundaryParams params;
    const FreeBoundarySolution sol = solve_free_boundary(op, data, params, o.mode);
    const std::vector<double> radii = {48.0 * g.h, 32.0 * g.h};

    bool converged = sol.mask_converged;
    bool residual_improves = true;
    bool graph_monotone = true;
    double worst_gamma = 0.0;  // relative distance to the reference scale
    double worst_m_hat = 0.0;
    int points = 0;
    for (const double t_base : {-1280.0 * hx * hx, -2560.0 * hx * hx}) {
        const int k = static_cast<int>(std::lround((t_base - g.t0) / g.dt));
        const int flip = flip_index(sol.omega, k);
        if (flip < 0) {
            converged = false;
            continue;
        }
        ++points;
        const double x0[2] = {g.x_of(flip), 0.0};
        const BlowupFit fit = blowup_fit(op, sol.u, sol.omega, x0, t_base, radii, o.mode);
        for (std::size_t a = 0; a + 1 < fit.rows.size(); ++a) {
            residual_improves =
                residual_improves && fit.rows[a].residual <= fit.rows[a + 1].residual + 1e-9;
        }
        for (const BlowupRow& row : fit.rows) worst_m_hat = std::max(worst_m_hat, row.m_hat);
        worst_gamma = std::max(
            worst_gamma, std::abs(fit.gamma - fit.gamma_reference) / fit.gamma_reference);
        const GraphReport graph = graph_fit(sol.omega, x0, t_base, radii);
        graph_monotone = graph_monotone && graph.c1_monotone;
    }

    const double m_bound = 10.0 * g.h;
    res.pass = converged && points == 2 && residual_improves && worst_gamma <= 0.10 &&
               worst_m_hat <= m_bound && graph_monotone;
    res.detail = "residual improves with r at " + std::to_string(points) +
                 " solved interface points " + (residual_improves ? "yes" : "NO") +
                 "; gamma off by " + num(100.0 * worst_gamma) + "% (<= 10%); m_hat " +
                 num(worst_m_hat) + " (<= 10h = " + num(m_bound) + "); graph slopes monotone " +
                 (graph_monotone ? "yes" : "NO");
    return res;
}

// --- criterion 10: complement density scaling ------------------------------

CriterionResult criterion_density(const AcceptanceOptions& o) {
    CriterionResult res{10, "density-scaling", false, ""};
    const double ex[2] = {1.0, 0.0};
    const Operator lin = make_linear(SymMat::identity(1));

    // Half-scale identity, measured in cells of the isotropic window; the
    // two windows cover the same point set, so the counts must agree.
    double worst_cells = 0.0;
    int pairs = 0;
    const auto identity_cells = [&](const Mask& m, double r) {
        ++pairs;
        const Grid& mg = m.grid;
        const double lhs = complement_fill_isotropic(m, 0.5 * r);
        const double rhs = complement_fill_isotropic(m, r, 0.5);
        const double scale = std::pow(0.5 * r, mg.n + 1);
        const double cell = std::pow(mg.h, mg.n) * mg.dt;
        worst_cells = std::max(
            worst_cells, std::abs(lhs - std::pow(2.0, mg.n + 1) * rhs) * scale / cell);
    };
    {
        const Grid g = make_grid(1, scaled(257, o.h_scale), 1.0, -1.0, 0.0);
        const Mask half = make_halfspace_mask(g, ex);
        const Mask grad = apply_mask_rule(make_nonconvex_field(g), MaskRule::GradientThreshold, 1.0);
        const Mask full = make_mask(g, true);
        for (const Mask* m : {&half, &grad, &full}) {
            identity_cells(*m, 1.0);
            identity_cells(*m, 0.5);
        }
    }
    {
        const Grid g2 = make_grid(2, scaled(129, o.h_scale), 1.0, -0.25, 0.0);
        const double tilt[2] = {std::cos(M_PI / 6.0), std::sin(M_PI / 6.0)};
        const Mask half2 = make_halfspace_mask(g2, tilt);
        identity_cells(half2, 0.25);
        identity_cells(half2, 0.125);
    }

    // The remainder-to-measure ratio of the source split holds steady when
    // the half-space grid is refined.
    LadderParams params;
    params.nx_ref = 65;
    ParabolicPolynomial zero;
    double ratios[2] = {0.0, 0.0};
    const int nx = scaled(257, o.h_scale);
    const int resolutions[2] = {nx, refined(nx)};
    for (int s = 0; s < 2; ++s) {
        // The half-scale zoom and its fill window only reach a quarter deep.
        const Grid g = make_grid(1, resolutions[s], 1.0, -0.25, 0.0);
        const Field u = make_halfspace_field(g, lin, ex);
        const Mask omega = make_halfspace_mask(g, ex);
        ratios[s] = decompose(lin, u, omega, zero, 0.5, params, o.mode).ratio;
    }
    const double drift = ratios[0] > 0.0
                             ? std::abs(ratios[1] - ratios[0]) / std::max(ratios[0], ratios[1])
                             : 1.0;

    res.pass = worst_cells <= 1.0 && ratios[0] > 0.0 && drift <= 0.2;
    res.detail = "half-scale identity off by " + num(worst_cells) + " cells (<= 1) over " +
                 std::to_string(pairs) + " mask/radius pairs; remainder ratio " + num(ratios[0]) +
                 " -> " + num(ratios[1]) + ", drift " + num(100.0 * drift) + "% (<= 20%)";
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    if (opts.h_scale != 1 && opts.h_scale != 2) {
        throw std::invalid_argument("h scale must be 1 or 2");
    }
    std::vector<CriterionResult> results;
    results.push_back(criterion_operator_oracle());
    results.push_back(criterion_halfspace_coefficient());
    results.push_back(criterion_halfspace_preservation(opts));
    results.push_back(criterion_nonconvex_control(opts));
    results.push_back(criterion_nondegeneracy(opts));
    results.push_back(criterion_ladder(opts));
    results.push_back(criterion_thickness(opts));
    results.push_back(criterion_monotonicity(opts));
    results.push_back(criterion_blowup(opts));
    results.push_back(criterion_density(opts));
    return results;
}

std::string format_criterion(const CriterionResult& r) {
    char head[64];
    std::snprintf(head, sizeof head, "%2d %-4s %-24s ", r.index, r.pass ? "pass" : "FAIL",
                  r.name.c_str());
    return head + r.detail;
}

int cmd_verify(const AcceptanceOptions& opts) {
    const std::vector<CriterionResult> results = run_acceptance(opts);
    std::size_t passed = 0;
    for (const CriterionResult& r : results) {
        std::cout << format_criterion(r) << "\n";
        if (r.pass) ++passed;
    }
    std::cout << (passed == results.size() ? "verification passed" : "verification FAILED")
              << ": " << passed << " of " << results.size() << " criteria hold\n";
    return passed == results.size() ? 0 : 3;
}

}  // namespace parafree

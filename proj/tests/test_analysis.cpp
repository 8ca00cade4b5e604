#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "parafree/analysis.hpp"
#include "parafree/free_boundary.hpp"
#include "parafree/grid.hpp"
#include "parafree/model_fields.hpp"
#include "parafree/operators.hpp"
#include "parafree/rescale.hpp"
#include "parafree/sym_matrix.hpp"

using namespace parafree;

namespace {

constexpr double kOrigin[2] = {0.0, 0.0};

std::vector<std::array<double, 2>> disk_samples(double r, double step, bool half) {
    std::vector<std::array<double, 2>> pts;
    for (double x = -r; x <= r + 1e-12; x += step) {
        for (double y = -r; y <= r + 1e-12; y += step) {
            if (std::hypot(x, y) > r) continue;
            if (half && x > 0.0) continue;
            pts.push_back({x, y});
        }
    }
    return pts;
}

std::vector<std::array<double, 2>> rotated(const std::vector<std::array<double, 2>>& pts,
                                           double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<std::array<double, 2>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back({c * p[0] - s * p[1], s * p[0] + c * p[1]});
    return out;
}

/// First node on the level whose mask value differs from its left neighbor.
int flip_index(const Mask& m, int k) {
    for (int i = 0; i + 1 < m.grid.nx; ++i) {
        if (m.at(i, k) != m.at(i + 1, k)) return i + 1;
    }
    return -1;
}

}  // namespace

TEST_CASE("minimal diameter measures width rather than extent") {
    // Degenerate sets collapse to zero.
    CHECK(minimal_diameter({}, 2) == 0.0);
    CHECK(minimal_diameter({{0.3, -0.2}}, 2) == 0.0);
    std::vector<std::array<double, 2>> line;
    for (int a = 0; a <= 20; ++a) line.push_back({0.1 * a, 0.05 * a});
    CHECK(minimal_diameter(line, 2) <= 1e-12);

    // One dimension reduces to the coordinate spread.
    CHECK(minimal_diameter({{-0.3, 0.0}, {0.1, 0.0}, {0.7, 0.0}}, 1) == doctest::Approx(1.0));

    const double h = 0.01;
    const auto disk = disk_samples(0.4, h, false);
    CHECK(std::abs(minimal_diameter(disk, 2) - 0.8) <= 2.0 * h);

    const auto half = disk_samples(0.4, h, true);
    CHECK(std::abs(minimal_diameter(half, 2) - 0.4) <= 2.0 * h);

    // Rotation invariance and monotonicity under inclusion.
    const double base = minimal_diameter(half, 2);
    CHECK(std::abs(minimal_diameter(rotated(half, 0.7), 2) - base) <= 2.0 * h);
    auto subset = half;
    subset.resize(subset.size() / 2);
    CHECK(minimal_diameter(subset, 2) <= base + 1e-12);
}

TEST_CASE("complement thickness of a halfspace is one at every scale") {
    const Grid g = make_grid(1, 129, 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};
    const Mask omega = make_halfspace_mask(g, e);

    for (const double r : {0.25, 0.125}) {
        const ThicknessValue tv = thickness(omega, kOrigin, -0.5, r);
        CHECK(std::abs(tv.delta - 1.0) <= 2.0 * g.h / r);
        CHECK(tv.delta >= 0.0);
        CHECK(tv.delta <= 2.0);
        CHECK(tv.r == r);
    }

    const Mask full = make_mask(g, true);
    CHECK(thickness(full, kOrigin, -0.5, 0.25).delta == 0.0);

    CHECK_THROWS_WITH_AS(thickness(omega, kOrigin, -0.9, 0.5),
                         "thickness window leaves the grid below the base time",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(thickness(omega, kOrigin, -0.1, 0.5),
                         "thickness window leaves the grid above the base time",
                         std::invalid_argument);
}

TEST_CASE("thickness agrees with the rescaled view of the same set") {
    const Operator op = make_linear(SymMat::identity(1));
    const Grid g = make_grid(1, 129, 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field u = make_halfspace_field(g, op, e);
    const Mask omega = make_halfspace_mask(g, e);

    // Base point one sixteenth inside the positive phase: the complement
    // seen in B_r is a strict subinterval, so the value is not trivially 1.
    const double x0[2] = {0.0625, 0.0};
    const double t0 = -0.5;
    const double r = 0.25;
    const ThicknessValue src = thickness(omega, x0, t0, r);

    const Grid ref = make_grid(1, 65, 1.0, -2.5, 0.0);
    const Field w = rescale_field(u, x0, t0, r, ref);
    Mask omega_ref = make_mask(ref);
    for (std::size_t q = 0; q < ref.size(); ++q) omega_ref.set(q, w[q] > 0.0);
    const ThicknessValue dst = thickness(omega_ref, kOrigin, -1.25, 1.0);

    CHECK(std::abs(src.delta - 0.75) <= 2.0 * g.h / r);
    CHECK(std::abs(src.delta - dst.delta) <= 4.0 * g.h / r);
}

TEST_CASE("boundary maximum beats the quadratic growth rate") {
    const Grid g = make_grid(1, 129, 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};

    const Operator lin = make_linear(SymMat::identity(1));
    const Field half = make_halfspace_field(g, lin, e);
    const Mask omega = make_halfspace_mask(g, e);
    const double r = 0.25;

    const NondegeneracyCheck hs = nondegeneracy(half, omega, kOrigin, -0.5, r, 1.0);
    CHECK(hs.lhs == doctest::Approx(r * r / 2.0).epsilon(1e-12));
    CHECK(hs.rhs == doctest::Approx(r * r / 3.0).epsilon(1e-12));
    CHECK(hs.pass);
    CHECK(hs.margin > 0.0);

    // The bottom cap of the cylinder carries the maximum for the nonconvex
    // fixture: u there equals u(X0) + 2 r^2.
    const Field noncvx = make_nonconvex_field(g);
    const Mask omega_n = make_nonconvex_mask(g);
    const NondegeneracyCheck nc = nondegeneracy(noncvx, omega_n, kOrigin, -0.5, r, 1.0);
    CHECK(nc.lhs == doctest::Approx(1.0 + 2.0 * r * r).epsilon(1e-12));
    CHECK(nc.pass);

    const double deep[2] = {-0.5, 0.0};
    CHECK_THROWS_AS(nondegeneracy(half, omega, deep, -0.5, r, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nondegeneracy(half, omega, kOrigin, -0.5, r, 0.0), std::invalid_argument);
}

TEST_CASE("quadratic growth table is scale stable") {
    const double e[2] = {1.0, 0.0};
    const Operator lin = make_linear(SymMat::identity(1));

    const Grid g = make_grid(1, 129, 1.0, -0.25, 0.0);
    const Field half = make_halfspace_field(g, lin, e);
    const Mask omega = make_halfspace_mask(g, e);
    const GrowthReport hs = quadratic_growth(half, omega, kOrigin, -0.125, {0.25, 0.125});
    // The centered-difference gradient at the profile kink is h/4, which
    // shifts the scaled deviation by at most h/(4r).
    for (const GrowthRow& row : hs.rows) {
        CHECK(std::abs(row.s - 0.5) <= g.h / (4.0 * row.r) + 1e-9);
    }
    CHECK(hs.c_bar == doctest::Approx(std::max(hs.rows[0].s, hs.rows[1].s)));
    CHECK(hs.sup_second_order == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hs.band_skipped > 0);

    // Exact caloric quadratic: the scaled deviation is radius-independent
    // and the second-order data is the full space-time norm.
    const Grid gc = make_grid(1, 65, 1.0, -0.25, 0.0);
    const Field cal = make_caloric_field(gc);
    const Mask full = make_mask(gc, true);
    const GrowthReport cq = quadratic_growth(cal, full, kOrigin, -0.03125, {0.25, 0.125});
    CHECK(cq.rows[0].s == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cq.rows[1].s == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cq.band_skipped == 0);
    CHECK(cq.sup_second_order == doctest::Approx(std::sqrt(8.0)).epsilon(1e-9));
    CHECK(cq.second_order_nodes > 0);

    // Refinement changes the table mildly at resolvable radii.
    const Grid ga = make_grid(1, 129, 1.0, -0.0625, 0.0);
    const Grid gb = make_grid(1, 257, 1.0, -0.0625, 0.0);
    const GrowthReport ra = quadratic_growth(make_halfspace_field(ga, lin, e),
                                             make_halfspace_mask(ga, e), kOrigin, -0.03125, {0.25});
    const GrowthReport rb = quadratic_growth(make_halfspace_field(gb, lin, e),
                                             make_halfspace_mask(gb, e), kOrigin, -0.03125, {0.25});
    CHECK(std::abs(ra.rows[0].s - rb.rows[0].s) <= 0.2 * rb.rows[0].s);

    const double off[2] = {0.001, 0.0};
    CHECK_THROWS_AS(quadratic_growth(half, omega, off, -0.125, {0.25}), std::invalid_argument);
}

TEST_CASE("time derivative decays away from the interface") {
    const double e[2] = {1.0, 0.0};
    const Operator lin = make_linear(SymMat::identity(1));

    // Stationary profile: every band is solver-noise free.
    const Grid g = make_grid(1, 129, 1.0, -0.125, 0.0);
    const Field half = make_halfspace_field(g, lin, e);
    const Mask omega = make_halfspace_mask(g, e);
    const DecayTable flat = time_decay(half, omega);
    CHECK(!flat.boundary_empty);
    CHECK(flat.rows.size() >= 3);
    for (const DecayRow& row : flat.rows) CHECK(row.sup_ut <= 1e-12);

    // Constant drift: a negative control with no decay anywhere.
    const Field noncvx = make_nonconvex_field(g);
    const DecayTable drift = time_decay(noncvx, make_nonconvex_mask(g));
    for (const DecayRow& row : drift.rows) {
        if (row.nodes > 0) CHECK(row.sup_ut == doctest::Approx(2.0).epsilon(1e-9));
    }

    // Manufactured decay: the time derivative shrinks exponentially with
    // the distance to the interface, so the bands must be non-increasing.
    const Grid gd = make_grid(1, 129, 1.0, -0.03125, 0.0);
    Field decaying = make_field(gd);
    for (std::size_t q = 0; q < gd.size(); ++q) {
        double x = 0.0, y = 0.0, t = 0.0;
        gd.node_point(q, &x, &y, &t);
        const double xp = std::max(x, 0.0);
        decaying[q] = 0.5 * xp * xp + 0.05 * t * std::exp(-8.0 * xp);
    }
    const DecayTable decay = time_decay(decaying, make_halfspace_mask(gd, e));
    CHECK(decay.rows.size() >= 3);
    for (std::size_t a = 0; a + 1 < decay.rows.size(); ++a) {
        CHECK(decay.rows[a + 1].sup_ut <= decay.rows[a].sup_ut + 1e-12);
    }
    CHECK(decay.rows.back().sup_ut <= decay.rows.front().sup_ut);

    const DecayTable none = time_decay(half, make_mask(g, true));
    CHECK(none.boundary_empty);
    CHECK(none.rows.empty());
}

TEST_CASE("solved fields keep the decay signature") {
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const Grid g = make_grid(1, 65, 1.0, -0.0625, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field data = make_halfspace_field(g, op, e);

    FreeBoundaryParams params;
    const FreeBoundarySolution sol = solve_free_boundary(op, data, params);
    REQUIRE(sol.mask_converged);

    const DecayTable table = time_decay(sol.u, sol.omega);
    CHECK(!table.boundary_empty);
    REQUIRE(!table.rows.empty());
    CHECK(table.rows.back().sup_ut <= table.rows.front().sup_ut + 1e-12);
}

TEST_CASE("directional monotonicity matches the halfspace closed forms") {
    const Grid g = make_grid(1, 129, 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};
    const Operator lin = make_linear(SymMat::identity(1));
    const Field half = make_halfspace_field(g, lin, e);

    const double ex[2] = {1.0, 0.0};
    const MonotonicityCheck strong = monotonicity_check(half, ex, 1.0, 1.0);
    CHECK(strong.threshold == 1.0 / 12.0);
    CHECK(strong.m2 == 0.0);
    CHECK(strong.m1 >= -1e-15);
    CHECK(strong.hypothesis_holds);
    CHECK(strong.conclusion_holds);

    // With no drift term the field itself is the deficit: the minimum over
    // Q_1/2 sits at the far edge of the positive phase.
    const MonotonicityCheck weak = monotonicity_check(half, ex, 0.0, 1.0);
    CHECK(weak.m2 == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(!weak.hypothesis_holds);
    CHECK(!weak.conclusion_holds);

    // Time direction on a caloric field: hypothesis and conclusion hold
    // together, exercising the implication on a second fixture.
    const Grid gc = make_grid(1, 65, 1.0, -1.0, 0.0);
    const Field cal = make_caloric_field(gc);
    const double et[2] = {0.0, 1.0};
    const MonotonicityCheck time_dir = monotonicity_check(cal, et, 1.0, 1.0);
    CHECK(time_dir.m1 > 0.0);
    CHECK(time_dir.hypothesis_holds);
    CHECK(time_dir.conclusion_holds);

    const double skew[2] = {1.0, 1.0};
    CHECK_THROWS_AS(monotonicity_check(half, skew, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("rescalings at the interface fit the halfspace profile") {
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const Grid g = make_grid(1, 129, 1.0, -1.0, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field u = make_halfspace_field(g, op, e);
    const Mask omega = make_halfspace_mask(g, e);

    const BlowupFit fit = blowup_fit(op, u, omega, kOrigin, -0.5, {0.25, 0.125});
    REQUIRE(fit.rows.size() == 2);
    CHECK(fit.gamma_reference == doctest::Approx(0.5).epsilon(1e-9));
    for (const BlowupRow& row : fit.rows) {
        CHECK(row.e[0] == 1.0);
        CHECK(row.e[1] == 0.0);
        CHECK(row.residual >= 0.0);
        CHECK(row.residual <= 2.0 * g.h);
        CHECK(std::abs(row.gamma - fit.gamma_reference) <= std::max(2.0 * g.h, 1e-3));
        CHECK(row.m_hat <= 1e-9);
    }

    const double inside[2] = {0.5, 0.0};
    CHECK_THROWS_AS(blowup_fit(op, u, omega, inside, -0.5, {0.25}), std::invalid_argument);
    CHECK_THROWS_AS(blowup_fit(op, u, omega, kOrigin, -0.5, {4.0 * g.h}), std::invalid_argument);
    CHECK_THROWS_AS(blowup_fit(op, u, omega, kOrigin, -0.5, {0.125, 0.25}),
                    std::invalid_argument);
}

TEST_CASE("blowup fit recovers a tilted direction in two dimensions") {
    const Operator op = make_linear(SymMat::identity(2));
    const Grid g = make_grid(2, 65, 1.0, -0.125, 0.0);
    const double tilt[2] = {std::cos(M_PI / 6.0), std::sin(M_PI / 6.0)};
    const Field u = make_halfspace_field(g, op, tilt);
    const Mask omega = make_halfspace_mask(g, tilt);

    const BlowupFit fit = blowup_fit(op, u, omega, kOrigin, -0.0625, {0.25});
    REQUIRE(fit.rows.size() == 1);
    const BlowupRow& row = fit.rows[0];
    CHECK(std::abs(std::hypot(row.e[0], row.e[1]) - 1.0) <= 1e-12);
    // Within one step of the 720-direction net.
    const double angle = std::atan2(row.e[1], row.e[0]);
    CHECK(std::abs(angle - M_PI / 6.0) <= 2.0 * M_PI / 720.0 + 1e-12);
    CHECK(std::abs(row.gamma - fit.gamma_reference) <= std::max(2.0 * g.h, 1e-3));
    CHECK(row.residual <= 2.0 * g.h);
}

TEST_CASE("solved interface blowups settle toward the profile") {
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const Grid g = make_grid(1, 129, 1.0, -0.25, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field data = make_halfspace_field(g, op, e);

    FreeBoundaryParams params;
    const FreeBoundarySolution sol = solve_free_boundary(op, data, params);
    REQUIRE(sol.mask_converged);

    const int k0 = static_cast<int>(std::lround((-0.125 - g.t0) / g.dt));
    const int flip = flip_index(sol.omega, k0);
    REQUIRE(flip >= 0);
    const double x0[2] = {g.x_of(flip), 0.0};

    const BlowupFit fit = blowup_fit(op, sol.u, sol.omega, x0, -0.125, {0.25, 0.125});
    REQUIRE(fit.rows.size() == 2);
    CAPTURE(fit.rows[0].residual);
    CAPTURE(fit.rows[1].residual);
    CAPTURE(fit.rows[0].m_hat);
    CAPTURE(fit.rows[1].m_hat);
    // The wider window resolves the profile better on a fixed grid.
    CHECK(fit.rows[0].residual <= fit.rows[1].residual + 1e-9);
    CHECK(fit.rows[0].gamma > 0.0);
    CHECK(fit.rows[1].gamma > 0.0);
    // Away from the interface band the solved field is nearly stationary;
    // what remains is the skirt of the threshold flicker next to the band.
    CHECK(fit.rows[0].m_hat <= 0.1);
    CHECK(fit.rows[1].m_hat <= 0.1);
}

TEST_CASE("graph fit flags a flat interface") {
    const Grid g = make_grid(1, 65, 1.0, -0.0625, 0.0);
    const double e[2] = {1.0, 0.0};
    const Mask omega = make_halfspace_mask(g, e);

    const GraphReport report = graph_fit(omega, kOrigin, 0.0, {0.25, 0.125});
    REQUIRE(report.rows.size() == 2);
    for (const GraphRow& row : report.rows) {
        CHECK(!row.skipped);
        CHECK(row.points >= 4);
        CHECK(row.s <= 2.0 * g.h / row.r);
        CHECK(std::abs(row.e[0]) == 1.0);
    }
    CHECK(report.c1_monotone);
    CHECK(report.r0 == 0.25);

    // A window away from the interface has no boundary points at all.
    const double far[2] = {0.9, 0.0};
    const GraphReport empty = graph_fit(omega, far, 0.0, {0.03125});
    REQUIRE(empty.rows.size() == 1);
    CHECK(empty.rows[0].skipped);
    CHECK(empty.rows[0].points < 4);
    CHECK(!empty.c1_monotone);
    CHECK(empty.r0 == 0.0);

    CHECK_THROWS_AS(graph_fit(omega, kOrigin, 0.0, {-0.25}), std::invalid_argument);
}

TEST_CASE("graph fit recovers a tilted interface normal") {
    const Grid g = make_grid(2, 65, 1.0, -0.0625, 0.0);
    const double tilt[2] = {std::cos(M_PI / 6.0), std::sin(M_PI / 6.0)};
    const Mask omega = make_halfspace_mask(g, tilt);

    const GraphReport report = graph_fit(omega, kOrigin, 0.0, {0.5, 0.25});
    REQUIRE(report.rows.size() == 2);
    for (const GraphRow& row : report.rows) {
        REQUIRE(!row.skipped);
        const double direct = std::hypot(row.e[0] - tilt[0], row.e[1] - tilt[1]);
        const double reversed = std::hypot(row.e[0] + tilt[0], row.e[1] + tilt[1]);
        CHECK(std::min(direct, reversed) <= 2.0 * g.h / row.r + 2.0 * M_PI / 720.0);
        CHECK(row.s <= 2.0 * g.h / row.r);
    }
    CHECK(report.c1_monotone);
}

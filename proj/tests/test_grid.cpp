#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parafree/differentials.hpp"
#include "parafree/grid.hpp"
#include "parafree/model_fields.hpp"
#include "parafree/operators.hpp"

using namespace parafree;

TEST_CASE("grid construction at working resolution") {
    const Grid g = make_grid(1, 257, 1.0, -1.0, 0.0);
    CHECK(g.h == 1.0 / 128);
    CHECK(g.dt == 1.0 / 65536);
    CHECK(g.nt == 65537);
    CHECK(g.x_of(128) == 0.0);
    CHECK(g.t_of(g.nt - 1) == 0.0);

    // dt is the largest uniform step below the parabolic bound.
    CHECK(g.dt <= 0.25 * g.h * g.h + 1e-15);

    const Grid g2 = make_grid(2, 65, 1.0, -0.25, 0.0);
    CHECK(g2.h == 1.0 / 32);
    CHECK(g2.nt == 1025);
    CHECK(g2.slice_size() == 65 * 65);
}

TEST_CASE("grid construction guards") {
    CHECK_THROWS(make_grid(3, 9, 1.0, -1.0, 0.0));
    CHECK_THROWS(make_grid(1, 8, 1.0, -1.0, 0.0));
    CHECK_THROWS(make_grid(1, 1, 1.0, -1.0, 0.0));
    CHECK_THROWS(make_grid(1, 9, -1.0, -1.0, 0.0));
    CHECK_THROWS(make_grid(1, 9, 1.0, 0.0, 0.0));
    CHECK_THROWS(make_grid(1, 9, 1.0, -1.0, 0.0, 0.0));
}

TEST_CASE("flat index round trips") {
    const Grid g1 = make_grid(1, 9, 1.0, -0.5, 0.0);
    int i = 0, j = 0, k = 0;
    g1.node_coords(g1.flat(3, 7), &i, &j, &k);
    CHECK(i == 3);
    CHECK(j == 0);
    CHECK(k == 7);

    const Grid g2 = make_grid(2, 9, 1.0, -0.5, 0.0);
    g2.node_coords(g2.flat(3, 5, 7), &i, &j, &k);
    CHECK(i == 3);
    CHECK(j == 5);
    CHECK(k == 7);
}

TEST_CASE("quadratic kink stencil values") {
    // u = ((x)_+)^2 / 2 sampled on h = 1/4: the centered second difference is
    // 0 one node left of the kink, 1/2 on it, and 1 one node right of it.
    const Grid g = make_grid(1, 9, 1.0, -0.25, 0.0);
    Field u = make_field(g);
    for (int k = 0; k < g.nt; ++k) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x_of(i);
            u.at(i, k) = x > 0.0 ? 0.5 * x * x : 0.0;
        }
    }
    const int mid = (g.nx - 1) / 2;
    CHECK(diff_hessian(u, g.flat(mid - 1, 1)).xx == 0.0);
    CHECK(diff_hessian(u, g.flat(mid, 1)).xx == 0.5);
    CHECK(diff_hessian(u, g.flat(mid + 1, 1)).xx == 1.0);
}

TEST_CASE("stencils are exact on quadratics") {
    const Grid g = make_grid(2, 17, 1.0, -0.25, 0.0);
    Field u = make_field(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < u.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        u.data[p] = x * x - 0.5 * y * y + 2.0 * x * y + 3.0 * x - t;
    }
    const std::size_t p = g.flat(5, 7, 2);
    const Jet jet = diff_jet(u, p);
    g.node_point(p, &x, &y, &t);
    CHECK(jet.hess.xx == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(jet.hess.yy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(jet.hess.xy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(jet.grad[0] == doctest::Approx(2.0 * x + 2.0 * y + 3.0).epsilon(1e-12));
    CHECK(jet.grad[1] == doctest::Approx(-y + 2.0 * x).epsilon(1e-12));
    CHECK(jet.ut == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(diff_ut2(u, p) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("caloric field has zero residual") {
    const Operator op = make_linear(SymMat::identity(1));
    const Grid g = make_grid(1, 33, 1.0, -0.5, 0.0);
    const Field w = make_caloric_field(g);
    const Field res = h_residual(op, w);
    for (int k = 1; k < g.nt; ++k) {
        for (int i = 1; i < g.nx - 1; ++i) {
            CHECK(std::abs(res.at(i, k)) < 1e-11);
        }
    }
    CHECK(std::isnan(res.at(0, 1)));
    CHECK(std::isnan(res.at(3, 0)));
}

TEST_CASE("nonconvex example jets") {
    const Grid g = make_grid(1, 33, 1.0, -0.5, 0.0);
    const Field u = make_nonconvex_field(g);
    const Mask omega = make_nonconvex_mask(g);
    const Operator op = make_linear(SymMat::identity(1));
    const Field res = h_residual(op, u);

    for (int k = 1; k < g.nt; ++k) {
        for (int i = 1; i < g.nx - 1; ++i) {
            const std::size_t p = g.flat(i, k);
            if (omega[p]) {
                // H(u) = 1 on the positive side, including the node next to
                // the kink.
                CHECK(res[p] == doctest::Approx(1.0).epsilon(1e-10));
            } else if (g.x_of(i) < -g.h / 2) {
                // Strictly inside the complement the second-order space-time
                // derivatives stay within the bound 2, but H(u) = 2 there.
                const Jet jet = diff_jet(u, p);
                CHECK(jet.hess.max_abs_entry() <= 2.0 + 1e-12);
                CHECK(std::abs(jet.ut) == doctest::Approx(2.0));
                CHECK(res[p] == doctest::Approx(2.0));
            }
        }
    }
}

TEST_CASE("halfspace field and mask") {
    const Operator op = make_pucci_plus(1, 1.0, 2.0);
    const Grid g = make_grid(1, 65, 1.0, -0.25, 0.0);
    const double e[2] = {1.0, 0.0};
    const Field u = make_halfspace_field(g, op, e);
    const Mask m = make_halfspace_mask(g, e);

    // gamma = 1/2 for these bounds, so u(1) = 1/4 at the right edge.
    CHECK(u.at(g.nx - 1, 0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(u.at(0, 0) == 0.0);

    const Field res = h_residual(op, u);
    for (int i = 1; i < g.nx - 1; ++i) {
        const std::size_t p = g.flat(i, 2);
        if (g.x_of(i) > g.h / 2) CHECK(res[p] == doctest::Approx(1.0).epsilon(1e-9));
        if (g.x_of(i) < -g.h / 2) CHECK(res[p] == doctest::Approx(0.0));
    }
    CHECK(count_true(m) == static_cast<std::size_t>(32 * g.nt));
}

TEST_CASE("multilinear sampling") {
    const Grid g = make_grid(2, 17, 1.0, -0.5, 0.0);
    Field u = make_field(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < u.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        u.data[p] = 2.0 * x - y + 0.5 * t + 1.0;
    }
    // Exact on multilinear data, including off-node points.
    const double q[2] = {0.3121, -0.7177};
    CHECK(sample(u, q, -0.1234) == doctest::Approx(2.0 * q[0] - q[1] + 0.5 * -0.1234 + 1.0));

    const double corner[2] = {1.0, 1.0};
    CHECK(sample(u, corner, 0.0) == doctest::Approx(2.0));
    const double outside[2] = {1.1, 0.0};
    CHECK_THROWS(sample(u, outside, 0.0));
}

TEST_CASE("resampling onto aligned grids is exact") {
    const Grid fine = make_grid(1, 65, 1.0, -0.25, 0.0);
    const Grid coarse = make_grid(1, 33, 1.0, -0.25, 0.0);
    Field u = make_field(fine);
    for (std::size_t p = 0; p < u.data.size(); ++p) u.data[p] = std::sin(double(p % 101));
    const Field v = resample(u, coarse);
    for (int k = 0; k < coarse.nt; ++k) {
        for (int i = 0; i < coarse.nx; ++i) {
            CHECK(v.at(i, k) == u.at(2 * i, 4 * k));
        }
    }
}

TEST_CASE("cubic rescaling error shrinks with the step") {
    // Interpolation is second order: sampling x^3 off-node stays within
    // h^2-scale error.
    const Grid g = make_grid(1, 129, 1.0, -0.0625, 0.0);
    Field u = make_field(g);
    for (int k = 0; k < g.nt; ++k) {
        for (int i = 0; i < g.nx; ++i) u.at(i, k) = std::pow(g.x_of(i), 3);
    }
    double worst = 0.0;
    for (int s = 0; s < 40; ++s) {
        const double xq = -0.9 + 1.8 * s / 39.0 + 0.371 * g.h;
        if (std::abs(xq) > 1.0) continue;
        const double got = sample(u, &xq, -0.01);
        worst = std::max(worst, std::abs(got - xq * xq * xq));
    }
    CHECK(worst < g.h * g.h);
    CHECK(worst > 0.0);
}

TEST_CASE("mask counters") {
    const Grid g = make_grid(1, 9, 1.0, -0.1, 0.0);
    Mask a = make_mask(g);
    Mask b = make_mask(g);
    a.set(3, true);
    a.set(5, true);
    b.set(5, true);
    CHECK(count_true(a) == 2);
    CHECK(count_mismatch(a, b) == 1);
}

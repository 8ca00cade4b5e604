#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parafree/operators.hpp"
#include "parafree/sym_matrix.hpp"

using namespace parafree;

namespace {

SymMat rotated_diag(double theta, double s1, double s2) {
    const double c = std::cos(theta), s = std::sin(theta);
    return SymMat::make(2, c * c * s1 + s * s * s2, c * s * (s1 - s2), s * s * s1 + c * c * s2);
}

SymMat random_sym2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    return SymMat::make(2, dist(rng), dist(rng), dist(rng));
}

/// Extremal coefficient matrix aligned with the eigenbasis of m: the argmax
/// of trace(A m) over lambda_lo <= A <= lambda_hi, built without the closed
/// form so the closed form has an independent witness.
SymMat aligned_extremal(const SymMat& m, double lambda_lo, double lambda_hi) {
    double lo = 0.0, hi = 0.0;
    m.eigenvalues(&lo, &hi);
    double vx = 1.0, vy = 0.0;  // eigenvector for hi
    if (std::abs(m.xy) > 1e-14) {
        vx = m.xy;
        vy = hi - m.xx;
        const double norm = std::hypot(vx, vy);
        vx /= norm;
        vy /= norm;
    } else if (m.yy > m.xx) {
        vx = 0.0;
        vy = 1.0;
    }
    const double v[2] = {vx, vy};
    const double w[2] = {-vy, vx};  // eigenvector for lo
    const double chi = hi > 0.0 ? lambda_hi : lambda_lo;
    const double clo = lo > 0.0 ? lambda_hi : lambda_lo;
    return chi * SymMat::outer(2, v) + clo * SymMat::outer(2, w);
}

}  // namespace

TEST_CASE("symmetric matrix eigenvalues and pairing") {
    const SymMat m = SymMat::make(2, 1.0, 2.0, 1.0);
    double lo = 0.0, hi = 0.0;
    m.eigenvalues(&lo, &hi);
    CHECK(lo == doctest::Approx(-1.0));
    CHECK(hi == doctest::Approx(3.0));

    CHECK(SymMat::identity(2).trace() == 2.0);
    CHECK(dot(SymMat::identity(2), m) == m.trace());
    CHECK(dot(SymMat::make(2, 0.0, 1.0, 0.0), m) == 4.0);

    const double e[2] = {0.6, 0.8};
    const SymMat p = SymMat::outer(2, e);
    CHECK(p.trace() == doctest::Approx(1.0));
    CHECK(p.min_eigenvalue() == doctest::Approx(0.0));
}

TEST_CASE("pucci closed forms on pinned matrices") {
    const SymMat m = SymMat::diag(2, 1.0, -1.0);
    CHECK(pucci_plus(m, 1.0, 2.0) == 1.0);
    CHECK(pucci_minus(m, 1.0, 2.0) == -1.0);

    CHECK(pucci_plus(SymMat::diag(1, 3.0), 1.0, 2.0) == 6.0);
    CHECK(pucci_plus(SymMat::diag(1, -3.0), 1.0, 2.0) == -3.0);
    CHECK(pucci_minus(SymMat::diag(1, 3.0), 1.0, 2.0) == 3.0);
    CHECK(pucci_minus(SymMat::diag(1, -3.0), 1.0, 2.0) == -6.0);

    // Off-diagonal witness: eigenvalues are +-1.
    const SymMat offdiag = SymMat::make(2, 0.0, 1.0, 0.0);
    CHECK(pucci_plus(offdiag, 1.0, 2.0) == doctest::Approx(1.0));
    CHECK(pucci_minus(offdiag, 1.0, 2.0) == doctest::Approx(-1.0));
}

TEST_CASE("pucci closed form dominates every admissible coefficient matrix") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(0.0, 3.2);
    std::uniform_real_distribution<double> level(1.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const SymMat m = random_sym2(rng);
        const double plus = pucci_plus(m, 1.0, 2.0);
        const double minus = pucci_minus(m, 1.0, 2.0);
        for (int k = 0; k < 50; ++k) {
            const SymMat a = rotated_diag(angle(rng), level(rng), level(rng));
            const double v = dot(a, m);
            CHECK(v <= plus + 1e-12);
            CHECK(v >= minus - 1e-12);
        }
        // The eigen-aligned extremal coefficients attain the bound.
        const SymMat best = aligned_extremal(m, 1.0, 2.0);
        CHECK(dot(best, m) == doctest::Approx(plus).epsilon(1e-12));
    }
}

TEST_CASE("bellman policy folds") {
    const std::vector<SymMat> family = {SymMat::diag(2, 1.0, 1.0), SymMat::diag(2, 2.0, 1.0)};
    const Operator fmax = make_bellman(2, family);
    const Operator fmin = make_bellman(2, family, PolicySense::Min);
    const SymMat m = SymMat::diag(2, 1.0, -1.0);
    CHECK(eval_f(fmax, m) == 1.0);  // max(0, 1)
    CHECK(eval_f(fmin, m) == 0.0);
    CHECK(fmax.lambda_lo == 1.0);
    CHECK(fmax.lambda_hi == 2.0);
}

TEST_CASE("parabolic evaluation") {
    const Operator op = make_linear(SymMat::identity(1));
    CHECK(eval_h(op, SymMat::diag(1, -1.0), -2.0) == 1.0);
    CHECK(eval_h(op, SymMat::diag(1, 2.0), 2.0) == 0.0);
}

TEST_CASE("halfspace profile scale") {
    const double e1[2] = {1.0, 0.0};
    const double e2[2] = {0.0, 1.0};

    CHECK(halfspace_gamma(make_linear(SymMat::identity(1)), e1) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(halfspace_gamma(make_pucci_plus(1, 1.0, 2.0), e1) ==
          doctest::Approx(0.5).epsilon(1e-10));
    CHECK(halfspace_gamma(make_pucci_minus(1, 0.5, 1.0), e1) ==
          doctest::Approx(2.0).epsilon(1e-10));

    // Rotation invariance of the extremal operators in two dimensions.
    const Operator pucci2 = make_pucci_plus(2, 1.0, 2.0);
    for (const double theta : {0.0, 0.3, 1.1, 2.7}) {
        const double e[2] = {std::cos(theta), std::sin(theta)};
        CHECK(halfspace_gamma(pucci2, e) == doctest::Approx(0.5).epsilon(1e-10));
    }

    const Operator aniso = make_linear(SymMat::diag(2, 1.0, 2.0));
    CHECK(halfspace_gamma(aniso, e1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(halfspace_gamma(aniso, e2) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("diagonal policy nets bound the extremal operators from inside") {
    const Operator plus = make_pucci_plus(2, 1.0, 2.0);
    const Operator minus = make_pucci_minus(2, 1.0, 2.0);
    const Operator net_plus = pucci_net(plus, 3);
    const Operator net_minus = pucci_net(minus, 3);
    CHECK(net_plus.coeff.size() == 9);
    CHECK(net_minus.sense == PolicySense::Min);

    // Exact on diagonal arguments.
    for (const double d1 : {-1.5, 0.0, 2.0}) {
        for (const double d2 : {-2.0, 0.5}) {
            const SymMat m = SymMat::diag(2, d1, d2);
            CHECK(eval_f(net_plus, m) == doctest::Approx(eval_f(plus, m)));
            CHECK(eval_f(net_minus, m) == doctest::Approx(eval_f(minus, m)));
        }
    }

    // Pinned gap on a pure off-diagonal argument: diagonal policies see zero.
    const SymMat offdiag = SymMat::make(2, 0.0, 1.0, 0.0);
    CHECK(eval_f(net_plus, offdiag) == 0.0);
    CHECK(eval_f(plus, offdiag) == doctest::Approx(1.0));

    // Inner bounds on random arguments.
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const SymMat m = random_sym2(rng);
        CHECK(eval_f(net_plus, m) <= eval_f(plus, m) + 1e-12);
        CHECK(eval_f(net_minus, m) >= eval_f(minus, m) - 1e-12);
    }

    // One-dimensional nets are the extremal operators exactly.
    const Operator net1 = pucci_net(make_pucci_plus(1, 1.0, 2.0), 2);
    CHECK(eval_f(net1, SymMat::diag(1, 0.7)) == doctest::Approx(1.4));
    CHECK(eval_f(net1, SymMat::diag(1, -0.7)) == doctest::Approx(-0.7));
}

TEST_CASE("operator hypothesis checks") {
    const OperatorCheck lin = validate(make_linear(SymMat::identity(2)), 200, 7);
    CHECK(lin.zero_at_zero);
    CHECK(lin.sandwiched);
    CHECK(lin.convex);
    CHECK(lin.concave);
    CHECK(lin.elliptic());

    const std::vector<SymMat> family = {SymMat::diag(2, 1.0, 1.0), SymMat::diag(2, 2.0, 1.0)};
    const OperatorCheck bell = validate(make_bellman(2, family), 200, 7);
    CHECK(bell.convex);
    CHECK_FALSE(bell.concave);
    CHECK(bell.sandwiched);
    CHECK(bell.elliptic());

    const OperatorCheck plus = validate(make_pucci_plus(2, 1.0, 2.0), 200, 7);
    CHECK(plus.convex);
    CHECK_FALSE(plus.concave);
    CHECK(plus.elliptic());

    const OperatorCheck minus = validate(make_pucci_minus(2, 1.0, 2.0), 200, 7);
    CHECK(minus.concave);
    CHECK_FALSE(minus.convex);
    CHECK(minus.elliptic());
}

TEST_CASE("constructor and argument guards") {
    CHECK_THROWS(make_linear(SymMat::diag(2, 1.0, -1.0)));
    CHECK_THROWS(make_bellman(2, {}));
    CHECK_THROWS(make_bellman(2, {SymMat::diag(1, 1.0)}));
    CHECK_THROWS(make_pucci_plus(2, 0.0, 1.0));
    CHECK_THROWS(make_pucci_plus(2, 2.0, 1.0));
    CHECK_THROWS(pucci_net(make_linear(SymMat::identity(2)), 3));
    CHECK_THROWS(pucci_net(make_pucci_plus(2, 1.0, 2.0), 1));

    const double skew[2] = {1.0, 1.0};
    CHECK_THROWS(halfspace_gamma(make_pucci_plus(2, 1.0, 2.0), skew));
    CHECK_THROWS(eval_f(make_linear(SymMat::identity(1)), SymMat::identity(2)));
}

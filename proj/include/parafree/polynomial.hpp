#pragma once

/// Second-order space-time polynomials a + b.x + x'Mx/2 + c t, always written
/// around the global origin, and their discrete Taylor extraction.

#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/sym_matrix.hpp"

namespace parafree {

struct ParabolicPolynomial {
    int n = 1;
    double a = 0.0;
    double b[2] = {0.0, 0.0};
    SymMat m = SymMat::zero(1);
    double c = 0.0;

    double value(const double* x, double t) const {
        double v = a + b[0] * x[0] + 0.5 * m.xx * x[0] * x[0] + c * t;
        if (n == 2) {
            v += b[1] * x[1] + m.xy * x[0] * x[1] + 0.5 * m.yy * x[1] * x[1];
        }
        return v;
    }
};

/// Coefficients of p(s y, s^2 tau) / s^2 as a polynomial in (y, tau). The
/// quadratic part and the time slope are invariant under this zoom.
ParabolicPolynomial zoom_in(const ParabolicPolynomial& p, double s);

/// H(P) = F(M) - c, constant across space-time.
double h_of(const Operator& op, const ParabolicPolynomial& p);

Field make_polynomial_field(const Grid& g, const ParabolicPolynomial& p);

/// Discrete second-order Taylor polynomial of u at the node sitting on
/// (x0, t0): centered space stencils and a backward time derivative (second
/// order when two levels lie below), re-expanded around the global origin.
ParabolicPolynomial taylor2(const Field& u, const double* x0, double t0);

}  // namespace parafree

#pragma once

/// Finite-difference stencils on grid fields: central in space, backward in
/// time to match the implicit time discretization of the solvers.

#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"
#include "parafree/sym_matrix.hpp"

namespace parafree {

struct Jet {
    double value = 0.0;
    double ut = 0.0;
    double grad[2] = {0.0, 0.0};
    SymMat hess;
};

/// Spatial stencil stays inside the box: 1 <= i <= nx-2 on every axis.
bool space_interior(const Grid& g, std::size_t flat);

/// Backward difference (u_k - u_{k-1}) / dt; needs k >= 1.
double diff_ut(const Field& u, std::size_t flat);

/// Second-order backward difference (3 u_k - 4 u_{k-1} + u_{k-2}) / (2 dt);
/// needs k >= 2.
double diff_ut2(const Field& u, std::size_t flat);

/// Central first differences; needs a space-interior node.
void diff_gradient(const Field& u, std::size_t flat, double* grad);

/// Central second differences, four-point cross term; needs space interior.
SymMat diff_hessian(const Field& u, std::size_t flat);

/// Value, backward ut, central gradient and Hessian at one node.
Jet diff_jet(const Field& u, std::size_t flat);

/// F(D^2 u) - du/dt at every space-interior node on levels k >= 1, NaN on
/// the nodes where the stencil does not fit.
Field h_residual(const Operator& op, const Field& u, par::Mode mode = par::default_mode());

}  // namespace parafree

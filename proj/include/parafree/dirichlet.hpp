#pragma once

/// Backward-Euler Dirichlet solves of policy-extremal parabolic equations
///   sel_j [ tr(A_j D^2 u) + b_j ] - du/dt = rhs
/// on box or cylinder interiors, where sel is max or min over the affine
/// policy family. Every time level runs a two-buffer Jacobi value iteration:
/// the per-node update solves its scalar extremal equation exactly, and the
/// sweep contracts in the sup norm for any time step. Two-buffer sweeps are
/// order independent, so the serial and OpenMP paths agree bitwise.
///
/// Spatial stencils are monotone: cross terms are split over the diagonal
/// (or antidiagonal) second difference, which requires every policy matrix
/// to dominate its off-diagonal entry on both axes.

#include <vector>

#include "parafree/cylinder.hpp"
#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"

namespace parafree {

struct AffinePolicy {
    SymMat a;
    double b = 0.0;
};

struct DirichletProblem {
    std::vector<AffinePolicy> policies;
    PolicySense sense = PolicySense::Max;
    double tol = 1e-10;      // sup-norm residual target per level
    int max_sweeps = 50000;  // per level, before giving up
};

/// Policy form of an operator: Linear and Bellman translate directly, the
/// extremal kinds go through their diagonal net at the given resolution.
DirichletProblem make_problem(const Operator& op, int net_points = 5);

/// Problem whose solution v satisfies sel_j [tr(A_j (D^2 v + m0)) + b_j]
/// - c0 - dv/dt = rhs: each policy offset gains tr(A_j m0) - c0.
DirichletProblem shift_problem(const DirichletProblem& prob, const SymMat& m0, double c0);

/// Solves on all space-interior nodes of levels k >= 1. data provides the
/// initial level and the lateral values (and the interior warm start).
Field solve_box(const DirichletProblem& prob, const Field& rhs, const Field& data,
                par::Mode mode = par::default_mode());

/// Solves on the cylinder's interior nodes; everything else passes through
/// from data.
Field solve_cylinder(const DirichletProblem& prob, const Field& rhs, const Field& data,
                     const CylinderNodes& nodes, par::Mode mode = par::default_mode());

/// Residual of the solver's own discretization at the box solve nodes, NaN
/// elsewhere.
Field solver_residual_box(const DirichletProblem& prob, const Field& rhs, const Field& u,
                          par::Mode mode = par::default_mode());

}  // namespace parafree

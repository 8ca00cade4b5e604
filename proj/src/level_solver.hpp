#pragma once

/// Internal level-solve machinery shared by the Dirichlet and free-boundary
/// drivers. Not part of the public headers.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "parafree/dirichlet.hpp"
#include "parafree/grid.hpp"
#include "parafree/parallel.hpp"

namespace parafree::detail {

/// One policy reduced to monotone stencil weights (units 1/h^2).
struct Stencil {
    double ax = 0.0;      // east/west
    double ay = 0.0;      // north/south
    double ad = 0.0;      // diagonal pair
    double center = 0.0;  // negative
    double b = 0.0;
    bool anti = false;    // diagonal runs (+1,-1) instead of (+1,+1)
};

std::vector<Stencil> build_stencils(const DirichletProblem& prob, const Grid& g);

/// Extremal stencil application at slice-local node q given neighbor values
/// from cur; also returns the per-node update root through *root.
double select_value_and_root(const std::vector<Stencil>& stencils, PolicySense sense,
                             const double* cur, std::size_t q, std::ptrdiff_t row,
                             double inv_dt, double prev_q, double rhs_q, double* root);

/// Per-level work buffers, reused across levels.
struct LevelWorkspace {
    std::vector<double> cur;
    std::vector<double> next;
    std::vector<double> resid;
};

/// Two-buffer Jacobi value iteration on one time level; interior holds
/// slice-local indices, cur starts at the warm start and ends at the
/// solution. Returns the sweep count.
int solve_level(const Grid& g, const std::vector<Stencil>& stencils, PolicySense sense,
                double tol, int max_sweeps, const double* prev, const double* rhs,
                const std::vector<std::size_t>& interior, LevelWorkspace& ws, par::Mode mode,
                int level);

std::vector<std::size_t> box_interior_slice(const Grid& g);

}  // namespace parafree::detail

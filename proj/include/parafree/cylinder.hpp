#pragma once

/// Parabolic cylinders Q_r(X0) = B_r(x0) x (t0 - r^2, t0] discretized onto
/// grid nodes, plus the cell-counted space-time measure of masked regions.

#include "parafree/grid.hpp"
#include "parafree/parallel.hpp"

#include <vector>

namespace parafree {

/// Closed-cylinder node set split for Dirichlet solves: interior nodes carry
/// the equation (their full spatial stencil, diagonals included in two
/// dimensions, stays inside the closed ball, and a level below exists inside
/// the cylinder); every other node carries data. The bottom time cap is the
/// single level within one step of t0 - r^2.
struct CylinderNodes {
    std::vector<std::size_t> interior;
    std::vector<std::size_t> boundary;
    int k_bot = 0;  // bottom data level
    int k_top = 0;  // level of t0
};

/// Classifies the closed cylinder; throws when it does not fit inside the
/// grid box or its time window leaves [grid.t0, grid.t1].
CylinderNodes classify_cylinder(const Grid& g, const double* x0, double t0, double r);

/// Closed-cylinder membership of one node, clipped to the grid.
bool in_cylinder(const Grid& g, const double* x0, double t0, double r, std::size_t flat);

/// Mask of the closed cylinder, clipped to the grid.
Mask cylinder_mask(const Grid& g, const double* x0, double t0, double r);

/// Space-time volume of the masked region counted in whole cells: a cell
/// contributes h^n dt when all its corner nodes are masked. Both execution
/// paths return bitwise-identical results.
double measure(const Mask& mask, par::Mode mode = par::default_mode());

}  // namespace parafree

#pragma once

/// Quadratic approximation ladder. At each scale rho^k the deviation
/// (u - P_k)/rho^2k is brought to unit scale, re-solved with the operator
/// shifted by the accumulated second-order data, and the solution's Taylor
/// polynomial sharpens P_k. On top of the ladder: pointwise and p-mean
/// second-order deviation tables, complement-density decay measurements,
/// and the source-splitting decomposition u = P + v + w.

#include <cstddef>
#include <string>
#include <vector>

#include "parafree/dirichlet.hpp"
#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"
#include "parafree/polynomial.hpp"

namespace parafree {

struct LadderParams {
    double rho = 0.5;  // scale shrink per rung, in (0, 1)
    int k_max = 4;     // last rung attempted; clipped at the resolution limit
    // Unit-scale solve resolution. 0 = automatic: the rung grid adopts the
    // lattice the zoom maps onto source nodes when the scales align (keeping
    // node data interpolation-free), and falls back to 129 (1D) / 65 (2D).
    int nx_ref = 0;
    double t0_ref = -0.5;  // history depth of the unit-scale solve grid
    int net_points = 5;
    double tol = 1e-10;
    int max_sweeps = 50000;
};

struct LadderStep {
    int k = 0;
    ParabolicPolynomial p;  // P_k; always satisfies H(P_k) = 0
    double e = 0.0;         // sup of |u - P_k| over source nodes in Q_{rho^k}
    double ratio = 0.0;     // e / rho^{2k}
};

struct LadderResult {
    double rho = 0.5;
    std::vector<LadderStep> steps;  // k = 0, 1, ...; P_0 = 0
    double fitted_c = 0.0;          // max of the step ratios
    bool truncated = false;         // stopped before k_max
    std::string truncation_reason;
};

/// Runs the ladder for a field on a box covering Q_1 with sup |u| <= 1.
/// Rungs whose cylinder spans fewer than 8 source nodes across are not
/// attempted; a failed unit-scale solve truncates the ladder with its reason.
LadderResult run_ladder(const Operator& op, const Field& u, const LadderParams& params,
                        par::Mode mode = par::default_mode());

struct BmoRow {
    double r = 0.0;  // requested radius
    int k = 0;       // ladder rung the radius snapped to
    ParabolicPolynomial p;
    double sup_dev = 0.0;
    double ratio = 0.0;  // sup_dev / r^2 at the snapped radius
};

/// Per-radius deviation table; each radius snaps to the nearest ladder rung.
std::vector<BmoRow> pointwise_bmo(const Field& u, const LadderResult& ladder,
                                  const std::vector<double>& rs);

struct MeanRow {
    int k = 0;
    double mean = 0.0;       // ((1/N) sum |D~2 u - D~2 P_k|^p)^(1/p) over Q_{rho^k/2}
    std::size_t nodes = 0;   // nodes entering the mean
    std::size_t skipped = 0;  // nodes dropped by the interface exclusion
};

/// p-means of the space-time second-order deviation from each ladder rung,
/// averaged over the half-radius cylinder. When a mask is given, nodes
/// within two grid steps of its interface are excluded (second derivatives
/// jump there).
std::vector<MeanRow> lp_bmo(const Field& u, const LadderResult& ladder, double p,
                            const Mask* omega = nullptr);

/// Scaled measure of the complement {not omega} seen through an isotropic
/// zoom window: count of grid cells fully inside B_cr x (t1 - cr, t1] around
/// the top center (c = clip) whose corners all lie outside omega, times cell
/// volume, scaled by r^-(n+1). The isotropic window makes the half-scale
/// identity fill(r/2) = 2^(n+1) * fill(r, clip = 1/2) cell-exact.
double complement_fill_isotropic(const Mask& omega, double r, double clip = 1.0);

/// Same count through the parabolic window B_r x (t1 - r^2, t1], scaled by
/// r^-(n+2); this is the measure the decomposition bound is stated against.
double complement_fill_parabolic(const Mask& omega, double r);

struct DensityRow {
    double r = 0.0;
    double fill = 0.0;       // complement_fill_isotropic at r
    double fill_half = 0.0;  // ... and at r/2
    double ratio = 0.0;      // fill_half / fill, 0 when the complement is empty
    double p_norm = 0.0;     // tilde_norm of the snapped ladder polynomial
    bool decays = false;     // ratio <= 1 / 2^(n+1)
};

struct DensityTable {
    std::vector<DensityRow> rows;
    double threshold = 0.0;      // least p_norm above which every row decays
    bool threshold_found = false;
};

/// Complement-density decay table over the given radii, with each radius
/// annotated by the second-order size of its snapped ladder polynomial.
DensityTable density_decay(const Mask& omega, const LadderResult& ladder,
                           const std::vector<double>& rs);

struct Decomposition {
    Field v;  // absorbs the unit source with the zoomed boundary deviation
    Field w;  // remainder u_r - P_r - v_r on the unit grid
    double sup_w = 0.0;
    double fill = 0.0;      // complement_fill_parabolic at r
    double fill_pow = 0.0;  // fill^(1/(n+1))
    double ratio = 0.0;     // sup_w / fill_pow, 0 when the complement is empty
};

/// Splits the r-zoom of u around the top center as u_r = P_r + v_r + w_r:
/// P_r is the zoom of the given source-scale polynomial, v_r solves the
/// shifted problem with unit source and boundary data u_r - P_r, and w_r is
/// the remainder (zero on the parabolic boundary by construction). The mask
/// supplies the complement measure for the ratio.
Decomposition decompose(const Operator& op, const Field& u, const Mask& omega,
                        const ParabolicPolynomial& p, double r, const LadderParams& params,
                        par::Mode mode = par::default_mode());

}  // namespace parafree

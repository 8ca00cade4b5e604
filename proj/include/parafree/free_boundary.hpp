#pragma once

/// Free-boundary solver for H(u) = chi_Omega: alternates one-level implicit
/// solves with mask updates until the mask reaches a level-wise fixed point,
/// plus the complementarity cross-check solver, solution verification, and
/// the zoom-out normalization.

#include "parafree/dirichlet.hpp"
#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"

namespace parafree {

/// How the positivity set is read off the iterate: by value (|u| above
/// 10 h^2 x field_scale) or by gradient size (|grad u| above 10 h).
enum class MaskRule { ValueThreshold, GradientThreshold };

struct FreeBoundaryParams {
    MaskRule rule = MaskRule::ValueThreshold;
    double field_scale = 1.0;  // scales the value threshold
    int max_mask_iters = 50;   // per level
    int net_points = 5;        // policy resolution for extremal operators
    double tol = 1e-10;        // per-level linear residual target
    int max_sweeps = 50000;
};

struct FreeBoundarySolution {
    Field u;
    Mask omega;
    double threshold = 0.0;      // the mask rule cutoff actually used
    int worst_mask_iters = 0;    // max over levels
    bool mask_converged = true;  // false when any level hit the iteration cap
};

/// The threshold the mask rule applies on a given grid.
double mask_threshold(MaskRule rule, const Grid& g, double field_scale);

/// Mask of one rule applied to a whole field (one-sided gradients at the
/// box faces).
Mask apply_mask_rule(const Field& u, MaskRule rule, double field_scale);

/// Level-by-level solve of H(u) = chi_Omega with Omega given by the mask
/// rule; data supplies the initial level and lateral values. A two-state
/// flicker of threshold-straddling nodes is resolved by pinning the union of
/// the two masks; only genuine non-stabilization leaves mask_converged false.
FreeBoundarySolution solve_free_boundary(const Operator& op, const Field& data,
                                         const FreeBoundaryParams& params,
                                         par::Mode mode = par::default_mode());

/// Cross-check for problems that keep u >= 0: solves the complementarity
/// form max(H(u) - 1, -u) = 0 by primal active sets. The returned mask is
/// the positivity set {u > 0}.
FreeBoundarySolution solve_complementarity(const Operator& op, const Field& data,
                                           const FreeBoundaryParams& params,
                                           par::Mode mode = par::default_mode());

struct VerifyReport {
    double sup_eq_error = 0.0;      // sup |H(u) - 1| over banded Omega nodes
    double sup_second_order = 0.0;  // sup of max(|D^2 u|, |du/dt|) over banded complement
    std::size_t eq_nodes = 0;
    std::size_t comp_nodes = 0;
    int band_spatial = 0;   // dilation rounds used along each space axis
    int band_temporal = 0;  // dilation rounds along time
};

/// Checks the equation on Omega and the second-order bound on the complement,
/// skipping every node within the band of the mask interface (band < 0 means
/// the default 2h). Space distance counts in steps of h, time in steps of dt
/// against band^2.
VerifyReport verify_solution(const Operator& op, const Field& u, const Mask& omega,
                             double band = -1.0, par::Mode mode = par::default_mode());

/// Zoom-out onto the unit scale: v(y, tau) = u(y/R, tau/R^2) on the target
/// grid, paired with M -> F(R^2 M) / R^2. All operator kinds built here are
/// positively homogeneous, so the operator comes back unchanged while the
/// equation residual of the zoomed field shrinks by R^2.
struct Normalized {
    Field u;
    Operator op;
};

Normalized normalize(const Operator& op, const Field& u, double R, const Grid& target);

}  // namespace parafree

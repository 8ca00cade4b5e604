#pragma once

/// Measurements on solved fields and their positivity masks: complement
/// thickness, growth and decay rates near the interface, directional
/// monotonicity, half-space profile fits of parabolic rescalings, and
/// cone-slab fits of the detected interface.

#include "parafree/grid.hpp"
#include "parafree/operators.hpp"
#include "parafree/parallel.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace parafree {

/// Width of a finite point set: the smallest gap between two parallel lines
/// (planes in one dimension reduce to the max-min spread) enclosing every
/// point. Zero for empty, single-point, and collinear sets.
double minimal_diameter(const std::vector<std::array<double, 2>>& pts, int n);

struct ThicknessValue {
    double r = 0.0;
    double delta = 0.0;  // min over slices of width(complement in B_r) / r
    int slice = 0;       // time level attaining the minimum
};

/// Scaled width of the complement of omega inside B_r(x0), minimized over
/// the time levels within [t0 - r^2, t0 + r^2]. The two-sided window must
/// sit inside the grid; the value always lands in [0, 2].
ThicknessValue thickness(const Mask& omega, const double* x0, double t0, double r);

struct NondegeneracyCheck {
    double lhs = 0.0;     // max of u over the parabolic boundary of Q_r(X0)
    double rhs = 0.0;     // u(X0) + r^2 / (2 n lambda1 + 1)
    double margin = 0.0;  // lhs - rhs
    bool pass = false;    // margin >= -10 h^2
};

/// Growth of the supremum of u on shrinking cylinders around a point of the
/// closure of omega: the boundary maximum must beat the quadratic rate set
/// by the smallest ellipticity constant.
NondegeneracyCheck nondegeneracy(const Field& u, const Mask& omega, const double* x0, double t0,
                                 double r, double lambda1);

struct GrowthRow {
    double r = 0.0;
    double s = 0.0;  // sup over Q_r(X0) of |u - u(X0) - grad u(X0).(x-x0)| / r^2
};

struct GrowthReport {
    std::vector<GrowthRow> rows;
    double c_bar = 0.0;             // max of s over the requested radii
    double sup_second_order = 0.0;  // sup of |(D^2 u, du/dt)| over Q_1/2(X0)
    std::size_t second_order_nodes = 0;
    std::size_t band_skipped = 0;  // nodes dropped within two steps of a mask flip
};

/// Quadratic growth table around a node: the centered deviation scaled by
/// r^2 per radius, plus the measured space-time second-order bound away
/// from the interface band.
GrowthReport quadratic_growth(const Field& u, const Mask& omega, const double* x0, double t0,
                              const std::vector<double>& rs);

struct DecayRow {
    double d = 0.0;       // inner edge of the dyadic distance band [d, 2d)
    double sup_ut = 0.0;  // sup of |du/dt| over omega nodes in the band
    std::size_t nodes = 0;
};

struct DecayTable {
    std::vector<DecayRow> rows;
    bool boundary_empty = false;  // omega or its complement has no nodes
};

/// Sup of the time derivative over dyadic bands of spatial distance to the
/// interface, starting at 2h. Distance is measured per time level to the
/// nearest complement node; levels without complement nodes contribute
/// nothing.
DecayTable time_decay(const Field& u, const Mask& omega, par::Mode mode = par::default_mode());

struct MonotonicityCheck {
    double m1 = 0.0;         // min of c0 du/de - u over Q_1
    double m2 = 0.0;         // min over Q_1/2
    double threshold = 0.0;  // 1 / (4 (2 n lambda1 + 1))
    bool hypothesis_holds = false;  // m1 >= -threshold
    bool conclusion_holds = false;  // m2 >= -10 h^2
};

/// Directional monotonicity indicator for a space-time unit direction e
/// (spatial components first, time last): when c0 du/de - u dips below
/// -threshold nowhere on Q_1, it should be nonnegative on Q_1/2 up to
/// discretization. Cylinders are anchored at the top center of the grid and
/// clipped to it.
MonotonicityCheck monotonicity_check(const Field& u, const double* e, double c0, double lambda1);

struct BlowupRow {
    double r = 0.0;
    double e[2] = {0.0, 0.0};  // fitted unit spatial direction
    double gamma = 0.0;        // fitted profile scale, positive
    double residual = 0.0;     // relative rms misfit against gamma ((y.e)_+)^2 / 2
    double m_hat = 0.0;  // sup |d/dtau| on Q_1/2, away from the interface band
};

struct BlowupFit {
    std::vector<BlowupRow> rows;  // one per requested radius, in given order
    double e[2] = {0.0, 0.0};     // direction at the smallest radius
    double gamma = 0.0;
    double gamma_reference = 0.0;  // profile scale solving the operator exactly
};

/// Least-squares fit of parabolic rescalings at an interface point against
/// half-space profiles over a direction net, per radius. An affine function
/// is fitted jointly and removed, so first-order data at the base point
/// never pollutes the profile; the residual is relative to the affine-free
/// part. Radii must decrease strictly and each must span at least eight
/// spatial steps.
BlowupFit blowup_fit(const Operator& op, const Field& u, const Mask& omega, const double* x0,
                     double t0, const std::vector<double>& rs,
                     par::Mode mode = par::default_mode());

/// Interface sample points of a mask: midpoints of the grid faces where the
/// mask flips, one (x, y, t) triple per face, y = 0 in one dimension.
/// Spatial faces sit on their own time level; time faces halfway between
/// consecutive levels.
std::vector<std::array<double, 3>> interface_points(const Mask& omega);

struct GraphRow {
    double r = 0.0;
    double s = 0.0;                 // minimal slab slope at this scale
    double e[2] = {0.0, 0.0};       // fitted unit spatial normal
    std::size_t points = 0;         // interface midpoints inside Q_r(X0)
    bool skipped = false;           // fewer than four points
};

struct GraphReport {
    std::vector<GraphRow> rows;  // sorted by decreasing radius
    bool c1_monotone = false;    // slopes non-increasing within 2h/r slack
    double r0 = 0.0;             // largest radius opening the monotone run
};

/// Flatness of the detected interface around a point: per scale, the
/// smallest s such that every interface midpoint (x, t) in Q_r(X0) satisfies
/// |q.e| <= s |(q - (q.e) e, (t - t0)/r)| + 2h with q = x - x0, for some
/// spatial normal e from a fixed net. Time offsets join the tangential
/// coordinates at parabolic scale, so a slope shrinking with r indicates an
/// interface flattening toward a differentiable graph. Interface midpoints
/// sit halfway across grid faces where the mask flips.
GraphReport graph_fit(const Mask& omega, const double* x0, double t0,
                      const std::vector<double>& rs);

}  // namespace parafree

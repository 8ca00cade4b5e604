#pragma once

/// Closed-form reference fields and masks shared by tests, examples, and
/// solver fixtures.

#include "parafree/grid.hpp"
#include "parafree/operators.hpp"

namespace parafree {

/// u = gamma ((x.e)_+)^2 / 2 for unit e, constant in time, with the scale
/// gamma chosen so F(D^2 u) = 1 on the positive side.
Field make_halfspace_field(const Grid& g, const Operator& op, const double* e);

/// The positive side {x.e > 0} of the halfspace profile.
Mask make_halfspace_mask(const Grid& g, const double* e);

/// u = -2t - x^2/2 where x > 0 and u = -2t elsewhere. With unit trace
/// coefficients this solves H(u) = 1 on the positive side; on the complement
/// the space-time Hessian stays bounded by 2 while H(u) = 2, so only the
/// bound is meaningful there.
Field make_nonconvex_field(const Grid& g);
Mask make_nonconvex_mask(const Grid& g);

/// x^2 + 2t in one dimension, |x|^2 + 4t in two: caloric for unit trace
/// coefficients.
Field make_caloric_field(const Grid& g);

}  // namespace parafree

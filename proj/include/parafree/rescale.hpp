#pragma once

/// Parabolic rescalings u_r(y, tau) = u(x0 + r y, t0 + r^2 tau) / r^2 and
/// the gradient-corrected blowup variant, sampled onto a reference grid.

#include "parafree/grid.hpp"
#include "parafree/parallel.hpp"

namespace parafree {

/// Samples the rescaled field onto every node of the target grid; throws when
/// the pulled-back points leave the source grid.
Field rescale_field(const Field& u, const double* x0, double t0, double r, const Grid& target,
                    par::Mode mode = par::default_mode());

/// Rescaling of u - u(X0) - grad u(X0) . (x - x0), the quadratic part left
/// after removing the first-order data at the base point. The base point must
/// coincide with a space-interior node on a level above the first; the
/// gradient is the centered difference there.
Field blowup_field(const Field& u, const double* x0, double t0, double r, const Grid& target,
                   par::Mode mode = par::default_mode());

}  // namespace parafree

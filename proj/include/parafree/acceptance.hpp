#pragma once

/// Bundled verification suite: ten numbered checks tying the solver and the
/// estimator toolkit to closed-form fixtures. Every check reports the
/// measured quantities next to the bounds they must meet, so a failing line
/// names exactly what moved.

#include <string>
#include <vector>

#include "parafree/parallel.hpp"

namespace parafree {

struct CriterionResult {
    int index = 0;
    std::string name;  // short stable slug
    bool pass = false;
    std::string detail;  // measured values with their required bounds
};

struct AcceptanceOptions {
    // Coarsening factor on the default grids: 2 doubles every spatial step,
    // and the built-in refinement pairs shift down with it. Only 1 and 2 are
    // accepted; below that the smallest fitting radii stop resolving.
    int h_scale = 1;
    par::Mode mode = par::default_mode();
};

/// Runs all checks at the configured scale; results come back in criterion
/// order. Throws std::invalid_argument for an unsupported h_scale.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One line per criterion: index, pass/FAIL, name, measured vs required.
std::string format_criterion(const CriterionResult& r);

/// Runs the suite, prints one line per criterion plus a closing summary,
/// and returns 0 when every check passes, 3 otherwise.
int cmd_verify(const AcceptanceOptions& opts);

}  // namespace parafree

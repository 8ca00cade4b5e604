#pragma once

/// The verbs behind the parafree binary. Each command takes a validated
/// config, writes its artifacts into the configured output directory, prints
/// a short account on stdout, and returns the process exit code: 0 success,
/// 1 config problem, 2 solve that did not converge or verify.

#include <string>

#include "parafree/config.hpp"

namespace parafree {

/// Solves the configured problem; writes u.field, omega.field,
/// omega_rule.field (the mask rule re-applied to the solved field), and
/// solve_report.txt. 0 when the mask iteration converged and the solution
/// verifies, 2 otherwise — artifacts are written either way.
int cmd_solve(const RunConfig& cfg);

/// Runs the configured estimator tables against the data field and mask;
/// writes one CSV per estimator, the interface point cloud, and
/// analyze_report.txt. Per-row estimator failures are flagged in the CSVs
/// and never fail the run.
int cmd_analyze(const RunConfig& cfg);

/// Runs the quadratic approximation ladder and its derived tables; writes
/// ladder.csv, means.csv, and — when radii are configured — bmo.csv,
/// density.csv, decompose.csv, plus ladder_report.txt.
int cmd_ladder(const RunConfig& cfg);

/// Fits half-space profiles and interface cone slabs at the configured
/// points; writes blowup.csv, graph.csv, and blowup_report.txt.
int cmd_blowup(const RunConfig& cfg);

/// Samples the ellipticity checks of the configured operator and prints the
/// verdict; 0 when they all hold, 1 otherwise.
int cmd_validate_operator(const RunConfig& cfg, int samples, unsigned seed);

/// Binary entry for the config-driven verbs (solve, analyze, ladder,
/// blowup): load, validate, dispatch. Config problems print a diagnostic and
/// return 1; runtime failures print and return 2.
int run_verb(const std::string& verb, const std::string& config_path);

}  // namespace parafree

#pragma once

/// Run configuration: a sectioned key = value file describing one operator,
/// one grid, one problem, optional analysis inputs, and an output directory.
/// Parsing is strict so a run is reproducible from the file alone — unknown
/// sections or keys, duplicated keys, and out-of-range values are rejected
/// with a message naming the offending field.

#include <stdexcept>
#include <string>
#include <vector>

#include "parafree/free_boundary.hpp"
#include "parafree/grid.hpp"
#include "parafree/operators.hpp"

namespace parafree {

/// Anything wrong with a configuration; the message names the section and
/// key involved. Commands map it to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // [operator]
    std::string op_kind = "pucci_plus";  // linear | bellman | pucci_plus | pucci_minus
    double lambda_lo = 1.0;
    double lambda_hi = 1.0;
    std::string sense = "max";                // bellman selection
    std::vector<std::vector<double>> family;  // linear: one row; bellman: one per policy

    // [grid]
    int n = 1;
    int nx = 129;
    double L = 1.0;
    double t0 = -1.0;
    double t1 = 0.0;

    // [problem]
    std::string mode = "value";      // mask rule: value | gradient
    std::string data = "halfspace";  // fixture name or field file path
    std::string mask_file;           // optional mask file paired with a field file
    std::vector<double> direction;   // halfspace fixture direction; empty = +x
    double K = 10.0;
    double field_scale = 1.0;
    int max_mask_iters = 50;
    int net_points = 5;
    double tol = 1e-10;
    int max_sweeps = 50000;

    // [analysis]
    bool has_analysis = false;
    std::vector<std::string> estimators;      // empty = every analyze table
    std::vector<std::vector<double>> points;  // base points, n+1 coordinates each
    std::vector<double> radii;
    double rho = 0.5;
    double p = 2.0;
    double c0 = 1.0;
    std::vector<double> e;  // monotonicity direction, n spatial + 1 time entries
    double epsilon = 0.0;   // thickness level the summary reports against
    int k_max = 4;
    int nx_ref = 0;  // ladder unit-scale resolution; 0 = automatic

    // [output]
    std::string out_dir = "out";
};

/// Parses and validates one config file.
RunConfig load_config(const std::string& path);

/// The grid-independent checks behind load_config, usable on hand-built
/// configs.
void validate_config(const RunConfig& cfg);

Operator operator_from_config(const RunConfig& cfg);

Grid grid_from_config(const RunConfig& cfg);

FreeBoundaryParams params_from_config(const RunConfig& cfg);

/// True when the data key names a fixture rather than a field file.
bool data_is_fixture(const RunConfig& cfg);

/// Input field: the named fixture (halfspace, nonconvex, caloric) evaluated
/// on the [grid] block's grid, or the contents of a field file — whose
/// stored grid then overrides the [grid] block.
Field data_from_config(const RunConfig& cfg, const Operator& op);

/// Mask paired with the data: the mask file when given, the fixture's own
/// positivity set for closed forms, the problem's mask rule otherwise.
Mask mask_from_config(const RunConfig& cfg, const Field& u);

/// Rejects base points outside the box and radii that cannot fit; called by
/// commands once the working grid is known.
void validate_points(const RunConfig& cfg, const Grid& g);

}  // namespace parafree

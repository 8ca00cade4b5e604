#pragma once

/// Uniformly elliptic operators F acting on symmetric matrices, and the
/// parabolic combination H(u) = F(D^2 u) - du/dt evaluated on pointwise jets.

#include <string>
#include <vector>

#include "parafree/sym_matrix.hpp"

namespace parafree {

enum class OperatorKind { Linear, Bellman, PucciPlus, PucciMinus };

/// Direction of the policy selection in a Bellman operator.
enum class PolicySense { Max, Min };

struct Operator {
    OperatorKind kind = OperatorKind::Linear;
    int n = 1;
    double lambda_lo = 1.0;  // uniform ellipticity bounds
    double lambda_hi = 1.0;
    PolicySense sense = PolicySense::Max;
    std::vector<SymMat> coeff;  // Linear: one entry; Bellman: the policy family

    std::string describe() const;
};

/// trace(A M) for a fixed positive definite A. Ellipticity bounds are the
/// eigenvalue range of A.
Operator make_linear(const SymMat& a);

/// max_j trace(A_j M) (or min_j, per sense) over a finite policy family.
/// Ellipticity bounds are the eigenvalue range across the family.
Operator make_bellman(int n, std::vector<SymMat> family, PolicySense sense = PolicySense::Max);

Operator make_pucci_plus(int n, double lambda_lo, double lambda_hi);
Operator make_pucci_minus(int n, double lambda_lo, double lambda_hi);

/// Extremal values of trace(A M) over all symmetric lambda_lo <= A <= lambda_hi,
/// from the eigenvalue closed form.
double pucci_plus(const SymMat& m, double lambda_lo, double lambda_hi);
double pucci_minus(const SymMat& m, double lambda_lo, double lambda_hi);

double eval_f(const Operator& op, const SymMat& m);

/// H(u) = F(D^2 u) - du/dt on one jet.
double eval_h(const Operator& op, const SymMat& m, double ut);

/// Bellman family of diagonal policies diag(s_1..s_n) with each s_i running
/// over a points-per-axis linspace of [lambda_lo, lambda_hi]. Evaluates the
/// extremal operator exactly on diagonal arguments and bounds it from inside
/// otherwise. The net inherits the selection sense of its extremal operator,
/// which makes it usable as a solvable stand-in for either Pucci kind.
Operator pucci_net(const Operator& pucci, int points_per_axis);

/// Scale gamma > 0 solving F(gamma e@e) = 1 for a unit direction e, by
/// bisection on [1/(2 lambda_hi), 2/lambda_lo] to an interval width of 1e-12.
double halfspace_gamma(const Operator& op, const double* e);

struct OperatorCheck {
    bool zero_at_zero = false;
    bool sandwiched = false;
    bool convex = false;
    bool concave = false;
    double worst_upper_gap = 0.0;  // largest excess of F(M)-F(N) over P+(M-N)
    double worst_lower_gap = 0.0;  // largest shortfall of F(M)-F(N) under P-(M-N)
    int samples = 0;

    /// Degenerate ellipticity plus one-sided curvature: everything the rest
    /// of the toolkit assumes about an operator.
    bool elliptic() const { return zero_at_zero && sandwiched && (convex || concave); }

    std::string describe() const;
};

/// Samples random matrix pairs to check F(0) = 0, the extremal-operator
/// sandwich P-(M-N) <= F(M) - F(N) <= P+(M-N), and midpoint convexity /
/// concavity. Deterministic for a fixed seed.
OperatorCheck validate(const Operator& op, int samples, unsigned seed);

}  // namespace parafree

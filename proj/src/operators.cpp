#include "parafree/operators.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace parafree {

namespace {

void eigen_range(const std::vector<SymMat>& family, double* lo, double* hi) {
    *lo = std::numeric_limits<double>::infinity();
    *hi = -std::numeric_limits<double>::infinity();
    for (const SymMat& a : family) {
        *lo = std::min(*lo, a.min_eigenvalue());
        *hi = std::max(*hi, a.max_eigenvalue());
    }
}

double fold_policies(const Operator& op, const SymMat& m) {
    double best = dot(op.coeff.front(), m);
    for (std::size_t j = 1; j < op.coeff.size(); ++j) {
        const double v = dot(op.coeff[j], m);
        best = op.sense == PolicySense::Max ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

SymMat random_sym(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    if (n == 1) return SymMat::make(1, dist(rng), 0.0, 0.0);
    return SymMat::make(2, dist(rng), dist(rng), dist(rng));
}

}  // namespace

std::string Operator::describe() const {
    std::ostringstream out;
    switch (kind) {
        case OperatorKind::Linear:
            out << "linear(n=" << n << ", A=" << coeff.front().describe() << ")";
            break;
        case OperatorKind::Bellman:
            out << "bellman(n=" << n << ", " << coeff.size() << " policies, "
                << (sense == PolicySense::Max ? "max" : "min") << ")";
            break;
        case OperatorKind::PucciPlus:
            out << "pucci+(n=" << n << ")";
            break;
        case OperatorKind::PucciMinus:
            out << "pucci-(n=" << n << ")";
            break;
    }
    out << " with " << lambda_lo << " <= lambda <= " << lambda_hi;
    return out.str();
}

Operator make_linear(const SymMat& a) {
    Operator op;
    op.kind = OperatorKind::Linear;
    op.n = a.n;
    op.coeff = {a};
    eigen_range(op.coeff, &op.lambda_lo, &op.lambda_hi);
    if (op.lambda_lo <= 0.0) {
        throw std::invalid_argument("linear operator needs a positive definite coefficient, got " +
                                    a.describe());
    }
    return op;
}

Operator make_bellman(int n, std::vector<SymMat> family, PolicySense sense) {
    if (family.empty()) throw std::invalid_argument("bellman operator needs a nonempty family");
    for (const SymMat& a : family) {
        if (a.n != n) {
            throw std::invalid_argument("bellman family entry " + a.describe() +
                                        " does not match dimension " + std::to_string(n));
        }
    }
    Operator op;
    op.kind = OperatorKind::Bellman;
    op.n = n;
    op.sense = sense;
    op.coeff = std::move(family);
    eigen_range(op.coeff, &op.lambda_lo, &op.lambda_hi);
    if (op.lambda_lo <= 0.0) {
        throw std::invalid_argument(
            "bellman family must be uniformly positive definite; smallest eigenvalue is " +
            std::to_string(op.lambda_lo));
    }
    return op;
}

namespace {

Operator make_pucci(OperatorKind kind, int n, double lambda_lo, double lambda_hi) {
    if (n != 1 && n != 2) {
        throw std::invalid_argument("operator dimension must be 1 or 2, got " + std::to_string(n));
    }
    if (!(0.0 < lambda_lo && lambda_lo <= lambda_hi)) {
        throw std::invalid_argument("ellipticity bounds need 0 < lambda_lo <= lambda_hi, got [" +
                                    std::to_string(lambda_lo) + ", " + std::to_string(lambda_hi) +
                                    "]");
    }
    Operator op;
    op.kind = kind;
    op.n = n;
    op.lambda_lo = lambda_lo;
    op.lambda_hi = lambda_hi;
    op.sense = kind == OperatorKind::PucciPlus ? PolicySense::Max : PolicySense::Min;
    return op;
}

}  // namespace

Operator make_pucci_plus(int n, double lambda_lo, double lambda_hi) {
    return make_pucci(OperatorKind::PucciPlus, n, lambda_lo, lambda_hi);
}

Operator make_pucci_minus(int n, double lambda_lo, double lambda_hi) {
    return make_pucci(OperatorKind::PucciMinus, n, lambda_lo, lambda_hi);
}

namespace {

double pucci_fold(const SymMat& m, double coeff_pos, double coeff_neg) {
    double lo = 0.0, hi = 0.0;
    m.eigenvalues(&lo, &hi);
    const auto one = [&](double e) { return e > 0.0 ? coeff_pos * e : coeff_neg * e; };
    return m.n == 1 ? one(lo) : one(lo) + one(hi);
}

}  // namespace

double pucci_plus(const SymMat& m, double lambda_lo, double lambda_hi) {
    return pucci_fold(m, lambda_hi, lambda_lo);
}

double pucci_minus(const SymMat& m, double lambda_lo, double lambda_hi) {
    return pucci_fold(m, lambda_lo, lambda_hi);
}

double eval_f(const Operator& op, const SymMat& m) {
    if (m.n != op.n) {
        throw std::invalid_argument("matrix dimension " + std::to_string(m.n) +
                                    " does not match operator dimension " + std::to_string(op.n));
    }
    switch (op.kind) {
        case OperatorKind::Linear:
            return dot(op.coeff.front(), m);
        case OperatorKind::Bellman:
            return fold_policies(op, m);
        case OperatorKind::PucciPlus:
            return pucci_plus(m, op.lambda_lo, op.lambda_hi);
        case OperatorKind::PucciMinus:
            return pucci_minus(m, op.lambda_lo, op.lambda_hi);
    }
    throw std::logic_error("unhandled operator kind");
}

double eval_h(const Operator& op, const SymMat& m, double ut) { return eval_f(op, m) - ut; }

Operator pucci_net(const Operator& pucci, int points_per_axis) {
    if (pucci.kind != OperatorKind::PucciPlus && pucci.kind != OperatorKind::PucciMinus) {
        throw std::invalid_argument("pucci_net needs an extremal operator, got " +
                                    pucci.describe());
    }
    if (points_per_axis < 2) {
        throw std::invalid_argument("pucci_net needs at least 2 points per axis, got " +
                                    std::to_string(points_per_axis));
    }
    std::vector<double> levels(points_per_axis);
    const double step = (pucci.lambda_hi - pucci.lambda_lo) / (points_per_axis - 1);
    for (int i = 0; i < points_per_axis; ++i) levels[i] = pucci.lambda_lo + i * step;
    levels.back() = pucci.lambda_hi;  // exact endpoint regardless of roundoff

    std::vector<SymMat> family;
    if (pucci.n == 1) {
        for (const double s : levels) family.push_back(SymMat::diag(1, s));
    } else {
        for (const double s1 : levels) {
            for (const double s2 : levels) family.push_back(SymMat::diag(2, s1, s2));
        }
    }
    return make_bellman(pucci.n, std::move(family), pucci.sense);
}

double halfspace_gamma(const Operator& op, const double* e) {
    double norm2 = e[0] * e[0];
    if (op.n == 2) norm2 += e[1] * e[1];
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw std::invalid_argument("halfspace direction must be a unit vector");
    }
    const SymMat profile = SymMat::outer(op.n, e);
    double lo = 1.0 / (2.0 * op.lambda_hi);
    double hi = 2.0 / op.lambda_lo;
    if (eval_f(op, lo * profile) > 1.0 || eval_f(op, hi * profile) < 1.0) {
        throw std::logic_error("halfspace bracket failed for " + op.describe());
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (eval_f(op, mid * profile) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::string OperatorCheck::describe() const {
    std::ostringstream out;
    const auto flag = [](bool b) { return b ? "ok" : "FAIL"; };
    out << "zero at zero: " << flag(zero_at_zero) << "\n";
    out << "extremal sandwich: " << flag(sandwiched) << " (worst upper gap " << worst_upper_gap
        << ", worst lower gap " << worst_lower_gap << ")\n";
    out << "curvature: " << (convex ? "convex" : "not convex") << ", "
        << (concave ? "concave" : "not concave") << "\n";
    out << "elliptic over " << samples << " samples: " << flag(elliptic());
    return out.str();
}

OperatorCheck validate(const Operator& op, int samples, unsigned seed) {
    OperatorCheck check;
    check.samples = samples;
    check.zero_at_zero = std::abs(eval_f(op, SymMat::zero(op.n))) <= 1e-12;
    check.convex = true;
    check.concave = true;

    const double tol = 1e-9;
    std::mt19937_64 rng(seed);
    double worst_upper = -std::numeric_limits<double>::infinity();
    double worst_lower = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const SymMat m = random_sym(op.n, rng);
        const SymMat nmat = random_sym(op.n, rng);
        const double fm = eval_f(op, m);
        const double fn = eval_f(op, nmat);
        const double diff = fm - fn;
        worst_upper = std::max(worst_upper, diff - pucci_plus(m - nmat, op.lambda_lo, op.lambda_hi));
        worst_lower = std::max(worst_lower, pucci_minus(m - nmat, op.lambda_lo, op.lambda_hi) - diff);

        const double fmid = eval_f(op, 0.5 * (m + nmat));
        if (fmid > 0.5 * (fm + fn) + tol) check.convex = false;
        if (fmid < 0.5 * (fm + fn) - tol) check.concave = false;
    }
    check.worst_upper_gap = samples > 0 ? worst_upper : 0.0;
    check.worst_lower_gap = samples > 0 ? worst_lower : 0.0;
    check.sandwiched = check.worst_upper_gap <= tol && check.worst_lower_gap <= tol;
    return check;
}

}  // namespace parafree

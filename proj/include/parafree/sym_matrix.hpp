#pragma once

/// Small symmetric spatial matrices for one and two dimensions. Inactive
/// entries stay at zero so the same value type flows through both dimensions.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace parafree {

struct SymMat {
    int n = 1;
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    static SymMat zero(int n) { return make(n, 0.0, 0.0, 0.0); }

    static SymMat identity(int n) { return make(n, 1.0, 0.0, n == 2 ? 1.0 : 0.0); }

    static SymMat diag(int n, double d1, double d2 = 0.0) {
        return make(n, d1, 0.0, n == 2 ? d2 : 0.0);
    }

    /// e ⊗ e for a spatial vector e (not necessarily unit length).
    static SymMat outer(int n, const double* e) {
        if (n == 1) return make(1, e[0] * e[0], 0.0, 0.0);
        return make(2, e[0] * e[0], e[0] * e[1], e[1] * e[1]);
    }

    static SymMat make(int n, double xx, double xy, double yy) {
        if (n != 1 && n != 2) {
            throw std::invalid_argument("symmetric matrix dimension must be 1 or 2, got " +
                                        std::to_string(n));
        }
        SymMat m;
        m.n = n;
        m.xx = xx;
        m.xy = n == 2 ? xy : 0.0;
        m.yy = n == 2 ? yy : 0.0;
        return m;
    }

    double trace() const { return xx + yy; }

    /// Closed-form eigenvalues, ascending. Both equal xx when n == 1.
    void eigenvalues(double* lo, double* hi) const {
        if (n == 1) {
            *lo = xx;
            *hi = xx;
            return;
        }
        const double mean = 0.5 * (xx + yy);
        const double radius = std::hypot(0.5 * (xx - yy), xy);
        *lo = mean - radius;
        *hi = mean + radius;
    }

    double min_eigenvalue() const {
        double lo = 0.0, hi = 0.0;
        eigenvalues(&lo, &hi);
        return lo;
    }

    double max_eigenvalue() const {
        double lo = 0.0, hi = 0.0;
        eigenvalues(&lo, &hi);
        return hi;
    }

    double max_abs_entry() const {
        return std::max({std::abs(xx), std::abs(xy), std::abs(yy)});
    }

    std::string describe() const {
        if (n == 1) return "[" + std::to_string(xx) + "]";
        return "[" + std::to_string(xx) + ", " + std::to_string(xy) + "; " +
               std::to_string(xy) + ", " + std::to_string(yy) + "]";
    }
};

inline SymMat operator+(const SymMat& a, const SymMat& b) {
    if (a.n != b.n) throw std::invalid_argument("symmetric matrix dimension mismatch in +");
    return SymMat::make(a.n, a.xx + b.xx, a.xy + b.xy, a.yy + b.yy);
}

inline SymMat operator-(const SymMat& a, const SymMat& b) {
    if (a.n != b.n) throw std::invalid_argument("symmetric matrix dimension mismatch in -");
    return SymMat::make(a.n, a.xx - b.xx, a.xy - b.xy, a.yy - b.yy);
}

inline SymMat operator*(double s, const SymMat& m) {
    return SymMat::make(m.n, s * m.xx, s * m.xy, s * m.yy);
}

/// Frobenius pairing trace(A M) for symmetric A and M.
inline double dot(const SymMat& a, const SymMat& m) {
    if (a.n != m.n) throw std::invalid_argument("symmetric matrix dimension mismatch in dot");
    return a.xx * m.xx + a.yy * m.yy + 2.0 * a.xy * m.xy;
}

/// Euclidean norm of the space-time second-order data (M, c), with the
/// off-diagonal entry counted once per matrix position.
inline double tilde_norm(const SymMat& m, double c) {
    double s = m.xx * m.xx + c * c;
    if (m.n == 2) s += 2.0 * m.xy * m.xy + m.yy * m.yy;
    return std::sqrt(s);
}

}  // namespace parafree

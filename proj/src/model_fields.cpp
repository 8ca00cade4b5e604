#include "parafree/model_fields.hpp"

namespace parafree {

Field make_halfspace_field(const Grid& g, const Operator& op, const double* e) {
    const double gamma = halfspace_gamma(op, e);
    Field u = make_field(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < u.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        const double s = x * e[0] + (g.n == 2 ? y * e[1] : 0.0);
        u.data[p] = s > 0.0 ? 0.5 * gamma * s * s : 0.0;
    }
    return u;
}

Mask make_halfspace_mask(const Grid& g, const double* e) {
    Mask m = make_mask(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < m.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        const double s = x * e[0] + (g.n == 2 ? y * e[1] : 0.0);
        m.data[p] = s > 1e-12 ? 1 : 0;
    }
    return m;
}

Field make_nonconvex_field(const Grid& g) {
    Field u = make_field(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < u.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        u.data[p] = -2.0 * t - (x > 0.0 ? 0.5 * x * x : 0.0);
    }
    return u;
}

Mask make_nonconvex_mask(const Grid& g) {
    Mask m = make_mask(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < m.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        m.data[p] = x > 1e-12 ? 1 : 0;
    }
    return m;
}

Field make_caloric_field(const Grid& g) {
    Field u = make_field(g);
    double x = 0.0, y = 0.0, t = 0.0;
    for (std::size_t p = 0; p < u.data.size(); ++p) {
        g.node_point(p, &x, &y, &t);
        u.data[p] = g.n == 1 ? x * x + 2.0 * t : x * x + y * y + 4.0 * t;
    }
    return u;
}

}  // namespace parafree

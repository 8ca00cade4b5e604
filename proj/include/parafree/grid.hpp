#pragma once

/// Uniform space-time grids over [-L, L]^n x [t0, t1], and the scalar fields
/// and 0/1 masks living on their nodes. Data is stored t-major, then
/// row-major within a time slice with x fastest.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace parafree {

struct Grid {
    int n = 1;   // spatial dimension, 1 or 2
    int nx = 0;  // nodes per spatial axis, odd so the origin is a node
    int nt = 0;  // time levels including both endpoints
    double L = 1.0;
    double t0 = -1.0;
    double t1 = 0.0;
    double h = 0.0;   // 2 L / (nx - 1)
    double dt = 0.0;  // (t1 - t0) / (nt - 1), uniform

    std::size_t slice_size() const {
        return n == 1 ? static_cast<std::size_t>(nx)
                      : static_cast<std::size_t>(nx) * static_cast<std::size_t>(nx);
    }
    std::size_t size() const { return static_cast<std::size_t>(nt) * slice_size(); }

    double x_of(int i) const { return -L + i * h; }
    double t_of(int k) const { return t0 + k * dt; }

    std::size_t flat(int i, int k) const {
        return static_cast<std::size_t>(k) * slice_size() + static_cast<std::size_t>(i);
    }
    std::size_t flat(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(nx) +
                static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(i);
    }

    /// Inverse of flat(); j comes back 0 when n == 1.
    void node_coords(std::size_t flat, int* i, int* j, int* k) const {
        const std::size_t slice = slice_size();
        *k = static_cast<int>(flat / slice);
        const std::size_t rest = flat % slice;
        if (n == 1) {
            *j = 0;
            *i = static_cast<int>(rest);
        } else {
            *j = static_cast<int>(rest / static_cast<std::size_t>(nx));
            *i = static_cast<int>(rest % static_cast<std::size_t>(nx));
        }
    }

    /// Spatial coordinates of a node; y comes back 0 when n == 1.
    void node_point(std::size_t flat, double* x, double* y, double* t) const {
        int i = 0, j = 0, k = 0;
        node_coords(flat, &i, &j, &k);
        *x = x_of(i);
        *y = n == 2 ? x_of(j) : 0.0;
        *t = t_of(k);
    }

    bool same_layout(const Grid& other) const;
};

/// Grid with spatial step h = 2L/(nx-1) and the largest uniform time step
/// dt <= kappa h^2 that divides [t0, t1] evenly.
Grid make_grid(int n, int nx, double L, double t0, double t1, double kappa = 0.25);

/// Grid reconstructed from stored header data: dt comes straight from the
/// stored level count instead of a step-size bound.
Grid grid_from_header(int n, int nx, int nt, double L, double t0, double t1);

struct Field {
    Grid grid;
    std::vector<double> data;

    double& operator[](std::size_t flat) { return data[flat]; }
    double operator[](std::size_t flat) const { return data[flat]; }
    double& at(int i, int k) { return data[grid.flat(i, k)]; }
    double at(int i, int k) const { return data[grid.flat(i, k)]; }
    double& at(int i, int j, int k) { return data[grid.flat(i, j, k)]; }
    double at(int i, int j, int k) const { return data[grid.flat(i, j, k)]; }
};

Field make_field(const Grid& grid, double fill = 0.0);

struct Mask {
    Grid grid;
    std::vector<std::uint8_t> data;

    bool operator[](std::size_t flat) const { return data[flat] != 0; }
    void set(std::size_t flat, bool value) { data[flat] = value ? 1 : 0; }
    bool at(int i, int k) const { return data[grid.flat(i, k)] != 0; }
    bool at(int i, int j, int k) const { return data[grid.flat(i, j, k)] != 0; }
};

Mask make_mask(const Grid& grid, bool fill = false);

std::size_t count_true(const Mask& mask);

/// Nodes where the masks disagree.
std::size_t count_mismatch(const Mask& a, const Mask& b);

/// True when the mask changes value within `steps` spatial steps of the node
/// on its own time level (a Chebyshev window in two dimensions).
bool mask_flip_near(const Mask& mask, std::size_t flat, int steps);

/// Multilinear interpolation in space and time. Coordinates may overshoot the
/// box by a relative 1e-9 (clamped); anything farther throws.
double sample(const Field& f, const double* x, double t);

/// Samples a field onto another grid node by node; exact at coinciding nodes.
Field resample(const Field& f, const Grid& target);

}  // namespace parafree

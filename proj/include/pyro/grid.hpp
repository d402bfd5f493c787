#pragma once

#include "pyro/errors.hpp"

#include <cmath>
#include <vector>

namespace pyro {

/// Cell-centered uniform grid. Cell i sits at (i + 0.5) * dx; lx = nx * dx.
struct Grid {
    int dim = 1;
    int nx = 0;
    int ny = 1;
    double dx = 0.0;
    double dy = 0.0;
    double lx = 0.0;
    double ly = 0.0;
    double dt = 0.0;
    double t_final = 0.0;

    static Grid make_1d(int nx, double dx, double dt, double t_final) {
        Grid g;
        g.dim = 1;
        g.nx = nx;
        g.ny = 1;
        g.dx = dx;
        g.dy = 0.0;
        g.lx = nx * dx;
        g.ly = 0.0;
        g.dt = dt;
        g.t_final = t_final;
        g.validate();
        return g;
    }

    static Grid make_2d(int nx, int ny, double dx, double dy, double dt, double t_final) {
        Grid g;
        g.dim = 2;
        g.nx = nx;
        g.ny = ny;
        g.dx = dx;
        g.dy = dy;
        g.lx = nx * dx;
        g.ly = ny * dy;
        g.dt = dt;
        g.t_final = t_final;
        g.validate();
        return g;
    }

    int size() const { return nx * ny; }
    double x(int ix) const { return (ix + 0.5) * dx; }
    double y(int iy) const { return (iy + 0.5) * dy; }

    bool same_layout(const Grid& o) const {
        return dim == o.dim && nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw Error(ErrorCode::Config, "grid: dim must be 1 or 2");
        if (nx < 1) throw Error(ErrorCode::Config, "grid: nx must be >= 1");
        if (dx <= 0.0) throw Error(ErrorCode::Config, "grid: dx must be > 0");
        if (dt <= 0.0) throw Error(ErrorCode::Config, "grid: dt must be > 0");
        if (t_final <= 0.0) throw Error(ErrorCode::Config, "grid: t_final must be > 0");
        if (std::abs(nx * dx - lx) > 1e-9 * std::max(1.0, lx))
            throw Error(ErrorCode::Config, "grid: lx must equal nx*dx");
        if (dim == 1) {
            if (ny != 1) throw Error(ErrorCode::Config, "grid: ny must be 1 when dim=1");
        } else {
            if (ny < 1) throw Error(ErrorCode::Config, "grid: ny must be >= 1");
            if (dy <= 0.0) throw Error(ErrorCode::Config, "grid: dy must be > 0 when dim=2");
            if (std::abs(ny * dy - ly) > 1e-9 * std::max(1.0, ly))
                throw Error(ErrorCode::Config, "grid: ly must equal ny*dy");
        }
    }
};

/// Scalar field on a grid, row-major with x fastest: v[iy*nx + ix].
struct Field {
    int nx = 0;
    int ny = 1;
    std::vector<double> v;

    Field() = default;
    Field(int nx_, int ny_, double fill = 0.0) : nx(nx_), ny(ny_), v(size_t(nx_) * ny_, fill) {}
    explicit Field(const Grid& g, double fill = 0.0) : Field(g.nx, g.ny, fill) {}

    int size() const { return nx * ny; }
    double& at(int ix, int iy) { return v[size_t(iy) * nx + ix]; }
    double at(int ix, int iy) const { return v[size_t(iy) * nx + ix]; }
    double& operator[](size_t i) { return v[i]; }
    double operator[](size_t i) const { return v[i]; }

    bool same_shape(const Field& o) const { return nx == o.nx && ny == o.ny; }

    double min() const {
        double m = v.empty() ? 0.0 : v[0];
        for (double x : v) m = std::min(m, x);
        return m;
    }
    double max() const {
        double m = v.empty() ? 0.0 : v[0];
        for (double x : v) m = std::max(m, x);
        return m;
    }
};

inline double l2_norm(const Field& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s);
}

inline double l2_diff(const Field& a, const Field& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) {
        const double d = a.v[i] - b.v[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace pyro

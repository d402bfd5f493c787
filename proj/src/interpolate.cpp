#include "pyro/interpolate.hpp"

#include <algorithm>
#include <cmath>

namespace pyro {

namespace {

// Index/weight pair for linear interpolation along one axis of cell centers.
// Clamps to the outer centers, which realizes constant extrapolation.
inline void axis_weights(double coord, double spacing, int n, int& i0, double& w1) {
    const double s = coord / spacing - 0.5;
    if (s <= 0.0) {
        i0 = 0;
        w1 = 0.0;
        return;
    }
    if (s >= n - 1) {
        i0 = n - 2 >= 0 ? n - 2 : 0;
        w1 = n >= 2 ? 1.0 : 0.0;
        return;
    }
    i0 = int(std::floor(s));
    w1 = s - i0;
}

}  // namespace

double sample_linear(const Field& f, const Grid& g, double x) {
    if (g.nx == 1) return f[0];
    int i0;
    double w;
    axis_weights(x, g.dx, g.nx, i0, w);
    return (1.0 - w) * f[i0] + w * f[i0 + 1];
}

double sample_bilinear(const Field& f, const Grid& g, double x, double y) {
    if (g.ny == 1) return sample_linear(f, g, x);
    int i0, j0;
    double wx, wy;
    axis_weights(x, g.dx, g.nx, i0, wx);
    axis_weights(y, g.dy, g.ny, j0, wy);
    const int i1 = g.nx == 1 ? i0 : i0 + 1;
    const int j1 = j0 + 1;
    const double f00 = f.at(i0, j0), f10 = f.at(i1, j0);
    const double f01 = f.at(i0, j1), f11 = f.at(i1, j1);
    return (1.0 - wy) * ((1.0 - wx) * f00 + wx * f10) + wy * ((1.0 - wx) * f01 + wx * f11);
}

Field resample(const Field& f, const Grid& src, const Grid& dst) {
    Field out(dst);
    if (dst.dim == 1) {
        for (int i = 0; i < dst.nx; ++i) out[i] = sample_linear(f, src, dst.x(i));
        return out;
    }
    for (int j = 0; j < dst.ny; ++j)
        for (int i = 0; i < dst.nx; ++i) out.at(i, j) = sample_bilinear(f, src, dst.x(i), dst.y(j));
    return out;
}

}  // namespace pyro

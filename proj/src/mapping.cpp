#include "pyro/mapping.hpp"

#include "pyro/interpolate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace pyro {

namespace {

constexpr double kMinWidthCells = 2.0;  // width clamp, in cells, against kappa blowup

bool field_constant(const Field& f) {
    for (double x : f.v)
        if (x != f.v[0]) return false;
    return true;
}

// Compensated sum so a constant band averages to exactly its value; the
// mid-level set is then well defined for plateau-exact profiles.
double band_mean(const Field& S, int begin, int end) {
    double s = 0.0, c = 0.0;
    for (int i = begin; i < end; ++i) {
        const double y = S[i] - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s / std::max(1, end - begin);
}

// Forward 1D fuel transform: reference coordinate -> physical coordinate.
inline double fuel_pullback(double x, double x_ref, double s, double kappa) {
    return x_ref + (x - x_ref - s) / kappa;
}

// Inverse: physical coordinate -> reference coordinate.
inline double fuel_pushforward(double x, double x_ref, double s, double kappa) {
    return x_ref + s + kappa * (x - x_ref);
}

// Shift fixing the mapped left crossing at the reference left edge
// X_L = x_ref - w_ref/2.
inline double fuel_shift(double x_left, double x_ref, double w_ref, double kappa) {
    return -0.5 * w_ref - kappa * (x_left - x_ref);
}

struct FuelTransform {
    double s = 0.0;
    double kappa = 1.0;
    bool degenerate = false;
};

FuelTransform fuel_transform(const Field& S, const Grid& g, double x_ref, double w_ref,
                             double edge_band) {
    const FrontAnchors a = front_anchors_1d(S, g, edge_band);
    FuelTransform t;
    t.degenerate = a.degenerate;
    t.kappa = a.degenerate ? 1.0 : w_ref / a.width;
    t.s = fuel_shift(a.x_left, x_ref, w_ref, t.kappa);
    return t;
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

double peak_shift_1d(const Field& T, const Grid& g, double x_ref) {
    for (double x : T.v)
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidState, "peak_shift_1d: field is not finite");
    if (field_constant(T))
        throw Error(ErrorCode::DegenerateFront, "peak_shift_1d: constant field has no peak");
    int best = 0;
    for (int i = 1; i < T.size(); ++i)
        if (T[i] > T[best]) best = i;  // strict: ties keep the lowest index
    return x_ref - g.x(best);
}

FrontAnchors front_anchors_1d(const Field& S, const Grid& g, double edge_band) {
    const int n = g.nx;
    const int band = std::max(1, int(std::floor(edge_band * n)));
    const double y_l = band_mean(S, 0, band);
    const double y_r = band_mean(S, n - band, n);
    const double y_mid = 0.5 * (y_l + y_r);

    FrontAnchors a;
    a.fallback_left = true;
    a.fallback_right = true;
    for (int i = 0; i + 1 < n; ++i) {
        if (a.fallback_left && S[i] >= y_mid && S[i + 1] < y_mid) {
            a.x_left = g.x(i) + g.dx * (S[i] - y_mid) / (S[i] - S[i + 1]);
            a.fallback_left = false;
        }
        if (S[i] < y_mid && S[i + 1] >= y_mid) {
            a.x_right = g.x(i) + g.dx * (y_mid - S[i]) / (S[i + 1] - S[i]);
            a.fallback_right = false;  // keep the last rising crossing
        }
    }
    if (a.fallback_left) a.x_left = 0.0;
    if (a.fallback_right) a.x_right = g.lx;
    if (a.fallback_left && a.fallback_right) a.degenerate = true;
    if (a.x_left >= a.x_right) {
        a.x_left = 0.0;
        a.x_right = g.lx;
        a.degenerate = true;
    }
    a.width = std::max(a.x_right - a.x_left, kMinWidthCells * g.dx);
    return a;
}

std::pair<Snapshot, GeomDescriptors1D> map_1d(const Snapshot& v, const ReferenceConfig& ref) {
    if (v.grid.dim != 1) throw Error(ErrorCode::InvalidArgument, "map_1d: snapshot is not 1D");

    GeomDescriptors1D d;
    d.s_T = peak_shift_1d(v.T, v.grid, ref.x_ref);
    const FuelTransform te = fuel_transform(v.S_e, v.grid, ref.x_ref, ref.w_ref_Se, ref.edge_band);
    const FuelTransform tx = fuel_transform(v.S_x, v.grid, ref.x_ref, ref.w_ref_Sx, ref.edge_band);
    d.s_Se = te.s;
    d.kappa_Se = te.kappa;
    d.degenerate_Se = te.degenerate;
    d.s_Sx = tx.s;
    d.kappa_Sx = tx.kappa;
    d.degenerate_Sx = tx.degenerate;

    Snapshot out(ref.ref_grid, v.fidelity);
    out.z = v.z;
    out.scale = v.scale;
    for (int i = 0; i < ref.ref_grid.nx; ++i) {
        const double x = ref.ref_grid.x(i);
        out.T[i] = sample_linear(v.T, v.grid, x - d.s_T);
        out.S_e[i] = sample_linear(v.S_e, v.grid, fuel_pullback(x, ref.x_ref, d.s_Se, d.kappa_Se));
        out.S_x[i] = sample_linear(v.S_x, v.grid, fuel_pullback(x, ref.x_ref, d.s_Sx, d.kappa_Sx));
    }
    return {std::move(out), d};
}

Snapshot unmap_1d(const Snapshot& v_ref, const GeomDescriptors1D& d, const ReferenceConfig& ref,
                  const Grid& target) {
    if (!(d.kappa_Se > 0.0) || !(d.kappa_Sx > 0.0) || !std::isfinite(d.kappa_Se) ||
        !std::isfinite(d.kappa_Sx))
        throw Error(ErrorCode::InvalidDescriptor, "unmap_1d: stretch factors must be positive");

    Snapshot out(target, v_ref.fidelity);
    out.z = v_ref.z;
    out.scale = v_ref.scale;
    for (int i = 0; i < target.nx; ++i) {
        const double x = target.x(i);
        out.T[i] = sample_linear(v_ref.T, v_ref.grid, x + d.s_T);
        out.S_e[i] = sample_linear(v_ref.S_e, v_ref.grid,
                                   fuel_pushforward(x, ref.x_ref, d.s_Se, d.kappa_Se));
        out.S_x[i] = sample_linear(v_ref.S_x, v_ref.grid,
                                   fuel_pushforward(x, ref.x_ref, d.s_Sx, d.kappa_Sx));
    }
    return out;
}

Indicator activity_indicator(const Snapshot& v, const IndicatorParams& ip) {
    ip.validate();
    if (v.scale != FieldScale::Unit)
        throw Error(ErrorCode::InvalidArgument, "activity_indicator expects a unit-scaled snapshot");

    Indicator out;
    out.J = Field(v.grid);
    const double cell = v.grid.dim == 2 ? v.grid.dx * v.grid.dy : v.grid.dx;
    for (int i = 0; i < v.T.size(); ++i) {
        // Negative excursions of reconstructed fields carry no activity.
        const double heat = std::max(v.T[i], 0.0);
        const double burned = std::max(1.0 - v.S_x[i], 0.0);
        const double j = ip.omega * std::pow(heat, ip.p) + (1.0 - ip.omega) * std::pow(burned, ip.q);
        out.J[i] = j;
        out.total_mass += j * cell;
    }
    out.degenerate = !(out.total_mass > 0.0);
    return out;
}

GeomDescriptors2D moments_2d(const Field& J, const Grid& g) {
    const double cell = g.dim == 2 ? g.dx * g.dy : g.dx;
    double mass = 0.0;
    for (double j : J.v) mass += j * cell;
    if (!(mass > 0.0))
        throw Error(ErrorCode::DegenerateFront, "moments_2d: indicator has zero mass");

    GeomDescriptors2D d;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double w = J.at(i, j) * cell;
            d.mu_x += g.x(i) * w;
            d.mu_y += g.y(j) * w;
        }
    d.mu_x /= mass;
    d.mu_y /= mass;

    double vx = 0.0, vy = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double w = J.at(i, j) * cell;
            vx += (g.x(i) - d.mu_x) * (g.x(i) - d.mu_x) * w;
            vy += (g.y(j) - d.mu_y) * (g.y(j) - d.mu_y) * w;
        }
    // Sub-cell spreads clamp to a quarter cell so the affine map stays
    // invertible for near-point indicators.
    d.sigma_x = std::max(std::sqrt(vx / mass), 0.25 * g.dx);
    d.sigma_y = std::max(std::sqrt(vy / mass), 0.25 * (g.dim == 2 ? g.dy : g.dx));
    return d;
}

std::pair<Snapshot, GeomDescriptors2D> map_2d(const Snapshot& v, const ReferenceConfig& ref) {
    if (v.grid.dim != 2) throw Error(ErrorCode::InvalidArgument, "map_2d: snapshot is not 2D");

    const Indicator ind = activity_indicator(v, ref.indicator);
    if (ind.degenerate)
        throw Error(ErrorCode::DegenerateFront, "map_2d: degenerate activity indicator");
    const GeomDescriptors2D d = moments_2d(ind.J, v.grid);

    // One affine transform, shared by all three fields.
    const double ax = d.sigma_x / ref.sigma_x_ref;
    const double ay = d.sigma_y / ref.sigma_y_ref;
    const double bx = d.mu_x - ax * ref.mu_x_ref;
    const double by = d.mu_y - ay * ref.mu_y_ref;

    Snapshot out(ref.ref_grid, v.fidelity);
    out.z = v.z;
    out.scale = v.scale;
    for (int j = 0; j < ref.ref_grid.ny; ++j) {
        const double eta = ref.ref_grid.y(j);
        for (int i = 0; i < ref.ref_grid.nx; ++i) {
            const double xi = ref.ref_grid.x(i);
            const double px = ax * xi + bx;
            const double py = ay * eta + by;
            out.T.at(i, j) = sample_bilinear(v.T, v.grid, px, py);
            out.S_e.at(i, j) = sample_bilinear(v.S_e, v.grid, px, py);
            out.S_x.at(i, j) = sample_bilinear(v.S_x, v.grid, px, py);
        }
    }
    return {std::move(out), d};
}

Snapshot unmap_2d(const Snapshot& v_ref, const GeomDescriptors2D& d, const ReferenceConfig& ref,
                  const Grid& target) {
    if (!(d.sigma_x > 0.0) || !(d.sigma_y > 0.0))
        throw Error(ErrorCode::InvalidDescriptor, "unmap_2d: spreads must be positive");

    const double ax = d.sigma_x / ref.sigma_x_ref;
    const double ay = d.sigma_y / ref.sigma_y_ref;
    const double bx = d.mu_x - ax * ref.mu_x_ref;
    const double by = d.mu_y - ay * ref.mu_y_ref;

    Snapshot out(target, v_ref.fidelity);
    out.z = v_ref.z;
    out.scale = v_ref.scale;
    for (int j = 0; j < target.ny; ++j) {
        const double y = target.y(j);
        for (int i = 0; i < target.nx; ++i) {
            const double x = target.x(i);
            const double xi = (x - bx) / ax;
            const double eta = (y - by) / ay;
            out.T.at(i, j) = sample_bilinear(v_ref.T, v_ref.grid, xi, eta);
            out.S_e.at(i, j) = sample_bilinear(v_ref.S_e, v_ref.grid, xi, eta);
            out.S_x.at(i, j) = sample_bilinear(v_ref.S_x, v_ref.grid, xi, eta);
        }
    }
    return out;
}

double PolyFit::eval(double x) const {
    double arg = x;
    if (log_space) {
        if (!(x > 0.0))
            throw Error(ErrorCode::InvalidDescriptor, "log-space regression needs positive input");
        arg = std::log(x);
    }
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * arg + coeffs[k];
    if (log_space) acc = std::exp(acc);
    return clamp(acc, clamp_lo, clamp_hi);
}

PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y, int degree,
                 bool log_space, std::string* warning) {
    if (x.size() != y.size() || x.empty())
        throw Error(ErrorCode::InvalidArgument, "fit_poly: empty or mismatched samples");

    PolyFit fit;
    fit.log_space = log_space;
    fit.clamp_lo = *std::min_element(y.begin(), y.end());
    fit.clamp_hi = *std::max_element(y.begin(), y.end());

    const int n = int(x.size());
    int deg = degree;
    if (n < deg + 1) {
        deg = n - 1;
        fit.degree_reduced = true;
        if (warning)
            *warning = "regression degree reduced to " + std::to_string(deg) + " (" +
                       std::to_string(n) + " points)";
    }

    std::vector<double> xs(x), ys(y);
    if (log_space) {
        for (auto& v : xs) {
            if (!(v > 0.0))
                throw Error(ErrorCode::InvalidArgument, "fit_poly: log-space needs positive x");
            v = std::log(v);
        }
        for (auto& v : ys) {
            if (!(v > 0.0))
                throw Error(ErrorCode::InvalidArgument, "fit_poly: log-space needs positive y");
            v = std::log(v);
        }
    }

    Eigen::MatrixXd V(n, deg + 1);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        double p = 1.0;
        for (int k = 0; k <= deg; ++k) {
            V(i, k) = p;
            p *= xs[i];
        }
        rhs(i) = ys[i];
    }
    const Eigen::VectorXd c = V.colPivHouseholderQr().solve(rhs);
    fit.coeffs.assign(c.data(), c.data() + c.size());
    return fit;
}

namespace {

// Quadratic transfer for shifts, linear for stretches; flagged training pairs
// drop out of the fuel-descriptor fits when enough clean pairs remain.
PolyFit fit_descriptor(const std::vector<double>& lf, const std::vector<double>& hf,
                       const std::vector<bool>& flagged, int degree, bool log_space) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < lf.size(); ++i) {
        if (!flagged.empty() && flagged[i]) continue;
        xs.push_back(lf[i]);
        ys.push_back(hf[i]);
    }
    if (xs.size() < 2) {
        xs.assign(lf.begin(), lf.end());
        ys.assign(hf.begin(), hf.end());
    }
    return fit_poly(xs, ys, degree, log_space);
}

}  // namespace

DescriptorRegression fit_descriptor_regression_1d(const std::vector<GeomDescriptors1D>& lf,
                                                  const std::vector<GeomDescriptors1D>& hf) {
    if (lf.size() != hf.size() || lf.empty())
        throw Error(ErrorCode::InvalidArgument, "descriptor regression: mismatched training pairs");

    const size_t n = lf.size();
    std::vector<bool> none;
    std::vector<bool> flag_se(n), flag_sx(n);
    std::vector<double> lf_st(n), hf_st(n), lf_sse(n), hf_sse(n), lf_ssx(n), hf_ssx(n);
    std::vector<double> lf_ke(n), hf_ke(n), lf_kx(n), hf_kx(n);
    for (size_t i = 0; i < n; ++i) {
        lf_st[i] = lf[i].s_T;
        hf_st[i] = hf[i].s_T;
        lf_sse[i] = lf[i].s_Se;
        hf_sse[i] = hf[i].s_Se;
        lf_ssx[i] = lf[i].s_Sx;
        hf_ssx[i] = hf[i].s_Sx;
        lf_ke[i] = lf[i].kappa_Se;
        hf_ke[i] = hf[i].kappa_Se;
        lf_kx[i] = lf[i].kappa_Sx;
        hf_kx[i] = hf[i].kappa_Sx;
        flag_se[i] = lf[i].degenerate_Se || hf[i].degenerate_Se;
        flag_sx[i] = lf[i].degenerate_Sx || hf[i].degenerate_Sx;
    }

    DescriptorRegression r;
    r.dim = 1;
    r.names = GeomDescriptors1D::names();
    r.fits.push_back(fit_descriptor(lf_st, hf_st, none, 2, false));
    r.fits.push_back(fit_descriptor(lf_sse, hf_sse, flag_se, 2, false));
    r.fits.push_back(fit_descriptor(lf_ssx, hf_ssx, flag_sx, 2, false));
    r.fits.push_back(fit_descriptor(lf_ke, hf_ke, flag_se, 1, false));
    r.fits.push_back(fit_descriptor(lf_kx, hf_kx, flag_sx, 1, false));
    return r;
}

DescriptorRegression fit_descriptor_regression_2d(const std::vector<GeomDescriptors2D>& lf,
                                                  const std::vector<GeomDescriptors2D>& hf) {
    if (lf.size() != hf.size() || lf.empty())
        throw Error(ErrorCode::InvalidArgument, "descriptor regression: mismatched training pairs");

    const size_t n = lf.size();
    std::vector<bool> none;
    std::vector<double> lf_mx(n), hf_mx(n), lf_my(n), hf_my(n);
    std::vector<double> lf_sx(n), hf_sx(n), lf_sy(n), hf_sy(n);
    for (size_t i = 0; i < n; ++i) {
        lf_mx[i] = lf[i].mu_x;
        hf_mx[i] = hf[i].mu_x;
        lf_my[i] = lf[i].mu_y;
        hf_my[i] = hf[i].mu_y;
        lf_sx[i] = lf[i].sigma_x;
        hf_sx[i] = hf[i].sigma_x;
        lf_sy[i] = lf[i].sigma_y;
        hf_sy[i] = hf[i].sigma_y;
    }

    DescriptorRegression r;
    r.dim = 2;
    r.names = GeomDescriptors2D::names();
    r.fits.push_back(fit_descriptor(lf_mx, hf_mx, none, 1, false));
    r.fits.push_back(fit_descriptor(lf_my, hf_my, none, 1, false));
    r.fits.push_back(fit_descriptor(lf_sx, hf_sx, none, 1, true));
    r.fits.push_back(fit_descriptor(lf_sy, hf_sy, none, 1, true));
    return r;
}

GeomDescriptors1D predict_hf_descriptors_1d(const DescriptorRegression& r,
                                            const GeomDescriptors1D& lf) {
    if (r.dim != 1 || r.fits.size() != 5)
        throw Error(ErrorCode::InvalidState, "descriptor regression not fitted for 1D");
    GeomDescriptors1D out;
    out.s_T = r.fits[0].eval(lf.s_T);
    out.s_Se = r.fits[1].eval(lf.s_Se);
    out.s_Sx = r.fits[2].eval(lf.s_Sx);
    out.kappa_Se = r.fits[3].eval(lf.kappa_Se);
    out.kappa_Sx = r.fits[4].eval(lf.kappa_Sx);
    return out;
}

GeomDescriptors2D predict_hf_descriptors_2d(const DescriptorRegression& r,
                                            const GeomDescriptors2D& lf) {
    if (r.dim != 2 || r.fits.size() != 4)
        throw Error(ErrorCode::InvalidState, "descriptor regression not fitted for 2D");
    GeomDescriptors2D out;
    out.mu_x = r.fits[0].eval(lf.mu_x);
    out.mu_y = r.fits[1].eval(lf.mu_y);
    out.sigma_x = r.fits[2].eval(lf.sigma_x);
    out.sigma_y = r.fits[3].eval(lf.sigma_y);
    return out;
}

}  // namespace pyro

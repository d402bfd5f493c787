#pragma once

#include "pyro/snapshot.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pyro {

/// Per-variable front geometry of a 1D snapshot: temperature peak shift plus
/// shift/stretch pairs for the two fuel fields.
struct GeomDescriptors1D {
    double s_T = 0.0;
    double s_Se = 0.0;
    double s_Sx = 0.0;
    double kappa_Se = 1.0;
    double kappa_Sx = 1.0;
    // Set when every mid-level crossing of the corresponding fuel field was
    // missing and its anchors degraded to the domain edges.
    bool degenerate_Se = false;
    bool degenerate_Sx = false;

    std::vector<double> flat() const { return {s_T, s_Se, s_Sx, kappa_Se, kappa_Sx}; }
    static std::vector<std::string> names() {
        return {"s_T", "s_Se", "s_Sx", "kappa_Se", "kappa_Sx"};
    }
};

/// Centroid and directional spread of the 2D activity indicator.
struct GeomDescriptors2D {
    double mu_x = 0.0;
    double mu_y = 0.0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;

    std::vector<double> flat() const { return {mu_x, mu_y, sigma_x, sigma_y}; }
    static std::vector<std::string> names() { return {"mu_x", "mu_y", "sigma_x", "sigma_y"}; }
};

struct IndicatorParams {
    double omega = 0.85;
    double p = 2.0;
    double q = 1.0;

    void validate() const {
        if (!(omega > 0.0 && omega < 1.0))
            throw Error(ErrorCode::Config, "indicator: omega must lie in (0,1)");
        if (!(p > 0.0) || !(q > 0.0))
            throw Error(ErrorCode::Config, "indicator: p and q must be > 0");
    }
};

/// Frozen reference frame shared by every mapped snapshot. The reference
/// widths / moments are medians over the LF training ensemble; mapped fields
/// are sampled on the HF grid.
struct ReferenceConfig {
    int dim = 1;
    Grid ref_grid;
    // 1D
    double x_ref = 0.0;
    double w_ref_Se = 0.0;
    double w_ref_Sx = 0.0;
    double edge_band = 0.05;  // fraction of cells averaged per side for y_L, y_R
    // 2D
    double mu_x_ref = 0.0;
    double mu_y_ref = 0.0;
    double sigma_x_ref = 0.0;
    double sigma_y_ref = 0.0;
    IndicatorParams indicator;
};

struct FrontAnchors {
    double x_left = 0.0;
    double x_right = 0.0;
    double width = 0.0;
    bool fallback_left = false;
    bool fallback_right = false;
    /// True when no crossing exists at all (flat or fully consumed field).
    bool degenerate = false;
};

/// Shift that moves the temperature peak to x_ref. Ties pick the lowest index.
double peak_shift_1d(const Field& T, const Grid& g, double x_ref);

/// Mid-level front anchors of a fuel field: edge-band levels define
/// y_mid = (y_L + y_R)/2; x_left is the first falling crossing, x_right the
/// last rising crossing, each replaced by the domain edge when missing.
FrontAnchors front_anchors_1d(const Field& S, const Grid& g, double edge_band);

std::pair<Snapshot, GeomDescriptors1D> map_1d(const Snapshot& v, const ReferenceConfig& ref);
Snapshot unmap_1d(const Snapshot& v_ref, const GeomDescriptors1D& d, const ReferenceConfig& ref,
                  const Grid& target);

struct Indicator {
    Field J;
    double total_mass = 0.0;  // midpoint-rule integral of J
    bool degenerate = false;
};

/// Non-negative activity indicator blending normalized excess temperature and
/// burned fraction. Expects a unit-scaled snapshot.
Indicator activity_indicator(const Snapshot& v, const IndicatorParams& ip);

/// Midpoint-rule centroid and spread of a non-negative field.
GeomDescriptors2D moments_2d(const Field& J, const Grid& g);

std::pair<Snapshot, GeomDescriptors2D> map_2d(const Snapshot& v, const ReferenceConfig& ref);
Snapshot unmap_2d(const Snapshot& v_ref, const GeomDescriptors2D& d, const ReferenceConfig& ref,
                  const Grid& target);

/// One scalar-to-scalar polynomial fit, optionally in log space, with
/// predictions clamped to the observed output extrema.
struct PolyFit {
    std::vector<double> coeffs;  // ascending degree
    bool log_space = false;
    double clamp_lo = 0.0;
    double clamp_hi = 0.0;
    bool degree_reduced = false;

    double eval(double x) const;
};

/// Per-descriptor LF -> HF transfer: quadratic for 1D shifts, linear for 1D
/// stretches, linear for 2D centroids, log-space linear for 2D spreads.
struct DescriptorRegression {
    int dim = 1;
    std::vector<std::string> names;
    std::vector<PolyFit> fits;

    bool fitted() const { return !fits.empty(); }
};

DescriptorRegression fit_descriptor_regression_1d(const std::vector<GeomDescriptors1D>& lf,
                                                  const std::vector<GeomDescriptors1D>& hf);
DescriptorRegression fit_descriptor_regression_2d(const std::vector<GeomDescriptors2D>& lf,
                                                  const std::vector<GeomDescriptors2D>& hf);

GeomDescriptors1D predict_hf_descriptors_1d(const DescriptorRegression& r,
                                            const GeomDescriptors1D& lf);
GeomDescriptors2D predict_hf_descriptors_2d(const DescriptorRegression& r,
                                            const GeomDescriptors2D& lf);

/// Least-squares polynomial fit y ~ poly(x) of the requested degree; the
/// degree drops (with a note in *warning) when there are too few points.
PolyFit fit_poly(const std::vector<double>& x, const std::vector<double>& y, int degree,
                 bool log_space, std::string* warning = nullptr);

}  // namespace pyro

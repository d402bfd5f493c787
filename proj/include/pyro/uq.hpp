#pragma once

#include "pyro/bifidelity.hpp"
#include "pyro/snapshot.hpp"

#include <map>
#include <string>
#include <vector>

namespace pyro {

/// Relative L2 error with v_ref in the denominator; intentionally asymmetric.
double relative_error(const Field& v_ref, const Field& v_test);

struct QoiSample {
    double t_max = 0.0;  // K
    double em = 0.0;     // m (1D) or m^2 (2D)
    double ba = 0.0;     // m or m^2
    ParamVector z;
    std::string tier;
    bool failed = false;
    std::string failure;
};

/// Maximum temperature plus midpoint-rule integrals of evaporated moisture
/// and burned fraction.
QoiSample compute_qois(const Snapshot& v, double s_e0, double s_x0);

struct DensityEstimate {
    std::vector<double> samples;
    double bandwidth = 0.0;
    std::vector<double> grid;
    std::vector<double> density;
};

/// Silverman's rule with a floor of 1e-6 of the sample range (tiny absolute
/// floor when all samples coincide), so the estimate is total.
double silverman_bandwidth(const std::vector<double>& samples);

/// Gaussian KDE evaluated on the given grid.
DensityEstimate gaussian_kde(const std::vector<double>& samples, const std::vector<double>& grid);

/// KDE on an automatic grid spanning [min - 6h, max + 6h] with n points.
DensityEstimate gaussian_kde_auto(const std::vector<double>& samples, int n = 512);

double trapezoid_integral(const std::vector<double>& x, const std::vector<double>& y);

/// L1 distance between two densities tabulated on the same grid.
double l1_density_distance(const DensityEstimate& a, const DensityEstimate& b);

struct TierQois {
    std::map<std::string, std::vector<QoiSample>> by_tier;  // tier -> rows (sample order)
    // (qoi name, tier) -> density on the per-qoi common grid
    std::map<std::pair<std::string, std::string>, DensityEstimate> densities;
    SampleSet test_set;
    std::map<std::string, double> tier_seconds;  // accumulated evaluation cost
};

/// Evaluate one realization across tiers; HF gated by with_hf.
std::map<std::string, QoiSample> evaluate_tiers(const BiFiModel& model, const ParamVector& z,
                                                bool with_hf);

/// Monte-Carlo propagation: an LHS test set of size N, per-tier QoI tables,
/// and per-QoI densities on a grid shared across tiers. Per-sample failures
/// are recorded in the table rather than aborting the study.
TierQois propagate(const BiFiModel& model, const ParamBox& box, int count, uint64_t seed,
                   bool with_hf, int parallelism);

}  // namespace pyro

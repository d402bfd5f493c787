#include "pyro/uq.hpp"

#include "pyro/parallel.hpp"
#include "pyro/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>

namespace pyro {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double quantile(std::vector<double> sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * double(n - 1);
    const size_t lo = size_t(std::floor(pos));
    const size_t hi = std::min(lo + 1, n - 1);
    const double w = pos - double(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

}  // namespace

double relative_error(const Field& v_ref, const Field& v_test) {
    if (!v_ref.same_shape(v_test))
        throw Error(ErrorCode::InvalidArgument, "relative_error: shape mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < v_ref.v.size(); ++i) {
        const double d = v_ref.v[i] - v_test.v[i];
        num += d * d;
        den += v_ref.v[i] * v_ref.v[i];
    }
    if (!(den > 0.0))
        throw Error(ErrorCode::UndefinedMetric, "relative_error: reference norm is zero");
    return std::sqrt(num / den);
}

QoiSample compute_qois(const Snapshot& v, double s_e0, double s_x0) {
    for (double t : v.T.v)
        if (!std::isfinite(t))
            throw Error(ErrorCode::InvalidState, "compute_qois: non-finite temperature");

    QoiSample q;
    q.z = v.z;
    q.t_max = v.T.max();
    const double cell = v.grid.dim == 2 ? v.grid.dx * v.grid.dy : v.grid.dx;
    for (int i = 0; i < v.S_e.size(); ++i) {
        q.em += (s_e0 - v.S_e[i]) * cell;
        q.ba += (1.0 - v.S_x[i] / s_x0) * cell;
    }
    return q;
}

double silverman_bandwidth(const std::vector<double>& samples) {
    const size_t n = samples.size();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "bandwidth of empty sample set");

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double range = sorted.back() - sorted.front();

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= double(n);
    double var = 0.0;
    for (double x : samples) var += (x - mean) * (x - mean);
    const double sd = n > 1 ? std::sqrt(var / double(n - 1)) : 0.0;

    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    double scale = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;

    double h = 0.9 * scale * std::pow(double(n), -0.2);
    h = std::max(h, 1e-6 * range);
    if (!(h > 0.0)) {
        // All samples coincide; fall back to a tiny absolute width.
        h = std::max(1e-6 * std::abs(sorted.front()), 1e-12);
    }
    return h;
}

DensityEstimate gaussian_kde(const std::vector<double>& samples, const std::vector<double>& grid) {
    DensityEstimate est;
    est.samples = samples;
    est.bandwidth = silverman_bandwidth(samples);
    est.grid = grid;
    est.density.resize(grid.size(), 0.0);
    const double inv_nh = 1.0 / (double(samples.size()) * est.bandwidth);
    for (size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (double x : samples) {
            const double u = (grid[g] - x) / est.bandwidth;
            acc += std::exp(-0.5 * u * u) * kInvSqrt2Pi;
        }
        est.density[g] = acc * inv_nh;
    }
    return est;
}

DensityEstimate gaussian_kde_auto(const std::vector<double>& samples, int n) {
    const double h = silverman_bandwidth(samples);
    const double lo = *std::min_element(samples.begin(), samples.end()) - 6.0 * h;
    const double hi = *std::max_element(samples.begin(), samples.end()) + 6.0 * h;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return gaussian_kde(samples, grid);
}

double trapezoid_integral(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i)
        acc += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return acc;
}

double l1_density_distance(const DensityEstimate& a, const DensityEstimate& b) {
    if (a.grid != b.grid)
        throw Error(ErrorCode::InvalidArgument, "l1 distance needs a common grid");
    std::vector<double> diff(a.grid.size());
    for (size_t i = 0; i < diff.size(); ++i) diff[i] = std::abs(a.density[i] - b.density[i]);
    return trapezoid_integral(a.grid, diff);
}

std::map<std::string, QoiSample> evaluate_tiers(const BiFiModel& model, const ParamVector& z,
                                                bool with_hf) {
    std::map<std::string, QoiSample> out;
    const double s_e0 = z.get("S_e0");
    const double s_x0 = model.norm.s_x0;

    // The LF tier is the same run both surrogates start from; run it once.
    Snapshot lf_snap = simulate(model.config.lf.grid, model.config.lf.phys, z, model.config.ignition);
    {
        QoiSample q = compute_qois(lf_snap, s_e0, s_x0);
        q.tier = "lf";
        out["lf"] = std::move(q);
    }

    const Snapshot lf_unit = normalize(lf_snap, model.norm);
    {
        QoiSample q;
        try {
            const Prediction pred = online_predict_from(model, lf_unit, z);
            q = compute_qois(pred.snapshot, s_e0, s_x0);
        } catch (const Error& e) {
            q.failed = true;
            q.failure = e.what();
            q.z = z;
        }
        q.tier = "mf";
        out["mf"] = std::move(q);
    }
    {
        QoiSample q;
        try {
            const Prediction pred = conventional_predict_from(model, lf_unit, z);
            q = compute_qois(pred.snapshot, s_e0, s_x0);
        } catch (const Error& e) {
            q.failed = true;
            q.failure = e.what();
            q.z = z;
        }
        q.tier = "cf";
        out["cf"] = std::move(q);
    }

    if (with_hf) {
        QoiSample q;
        try {
            Snapshot hf_snap =
                simulate(model.config.hf.grid, model.config.hf.phys, z, model.config.ignition);
            q = compute_qois(hf_snap, s_e0, s_x0);
        } catch (const Error& e) {
            q.failed = true;
            q.failure = e.what();
            q.z = z;
        }
        q.tier = "hf";
        out["hf"] = std::move(q);
    }
    return out;
}

TierQois propagate(const BiFiModel& model, const ParamBox& box, int count, uint64_t seed,
                   bool with_hf, int parallelism) {
    if (count < 2) throw Error(ErrorCode::InvalidArgument, "propagate: need at least 2 samples");

    TierQois out;
    out.test_set = lhs_sample(box, count, seed);

    std::vector<std::string> tiers = {"lf", "cf", "mf"};
    if (with_hf) tiers.push_back("hf");
    for (const auto& t : tiers) out.by_tier[t].resize(count);

    std::mutex time_mutex;
    parallel_for(count, parallelism, [&](int i) {
        const ParamVector z = out.test_set.row(i);
        const auto t0 = std::chrono::steady_clock::now();
        auto rows = evaluate_tiers(model, z, with_hf);
        const double sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& [tier, q] : rows) out.by_tier[tier][i] = std::move(q);
        std::lock_guard<std::mutex> lock(time_mutex);
        out.tier_seconds["all"] += sec;
    });

    // Densities per QoI on a grid shared across tiers, so density distances
    // are directly comparable.
    const std::vector<std::string> qoi_names = {"t_max", "em", "ba"};
    for (const auto& qoi : qoi_names) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double h_max = 0.0;
        std::map<std::string, std::vector<double>> values;
        for (const auto& tier : tiers) {
            std::vector<double> v;
            for (const auto& q : out.by_tier[tier]) {
                if (q.failed) continue;
                if (qoi == "t_max") v.push_back(q.t_max);
                else if (qoi == "em") v.push_back(q.em);
                else v.push_back(q.ba);
            }
            if (v.size() < 1) continue;
            lo = std::min(lo, *std::min_element(v.begin(), v.end()));
            hi = std::max(hi, *std::max_element(v.begin(), v.end()));
            h_max = std::max(h_max, silverman_bandwidth(v));
            values[tier] = std::move(v);
        }
        if (values.empty()) continue;
        const int n_grid = 512;
        std::vector<double> grid(n_grid);
        const double a = lo - 6.0 * h_max, b = hi + 6.0 * h_max;
        for (int i = 0; i < n_grid; ++i) grid[i] = a + (b - a) * double(i) / double(n_grid - 1);
        for (auto& [tier, v] : values)
            out.densities[{qoi, tier}] = gaussian_kde(v, grid);
    }
    return out;
}

}  // namespace pyro

#include "pyro/bifidelity.hpp"

#include "pyro/interpolate.hpp"
#include "pyro/parallel.hpp"
#include "pyro/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>

namespace pyro {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty set");
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Eigen::VectorXd flatten(const Snapshot& s) {
    const int n = s.grid.size();
    Eigen::VectorXd out(3 * n);
    for (int i = 0; i < n; ++i) out(i) = s.T[i];
    for (int i = 0; i < n; ++i) out(n + i) = s.S_e[i];
    for (int i = 0; i < n; ++i) out(2 * n + i) = s.S_x[i];
    return out;
}

// Identity "mapping": unit-scaled snapshot resampled onto the reference grid.
Snapshot to_reference_grid(const Snapshot& s, const Grid& ref_grid) {
    if (s.grid.same_layout(ref_grid)) {
        Snapshot out = s;
        out.grid = ref_grid;
        return out;
    }
    Snapshot out(ref_grid, s.fidelity);
    out.z = s.z;
    out.scale = s.scale;
    out.T = resample(s.T, s.grid, ref_grid);
    out.S_e = resample(s.S_e, s.grid, ref_grid);
    out.S_x = resample(s.S_x, s.grid, ref_grid);
    return out;
}

struct VariableBlocks {
    Eigen::MatrixXd T, Se, Sx;
};

VariableBlocks split_columns(const Eigen::MatrixXd& V, int n, const std::vector<int>& cols) {
    VariableBlocks b;
    const int m = int(cols.size());
    b.T.resize(n, m);
    b.Se.resize(n, m);
    b.Sx.resize(n, m);
    for (int k = 0; k < m; ++k) {
        b.T.col(k) = V.col(cols[k]).segment(0, n);
        b.Se.col(k) = V.col(cols[k]).segment(n, n);
        b.Sx.col(k) = V.col(cols[k]).segment(2 * n, n);
    }
    return b;
}

void log_line(const TrainHooks& hooks, const std::string& msg) {
    if (hooks.log) hooks.log(msg);
}

}  // namespace

Snapshot normalize(const Snapshot& v, const NormConsts& c, long* clamped_count) {
    c.validate();
    if (v.scale != FieldScale::Physical)
        throw Error(ErrorCode::InvalidArgument, "normalize expects a physical-scale snapshot");
    Snapshot out = v;
    out.scale = FieldScale::Unit;
    const double t_span = c.t_scale - c.t_ambient;
    long clamped = 0;
    for (int i = 0; i < v.T.size(); ++i) {
        double t = (v.T[i] - c.t_ambient) / t_span;
        if (t > 1.0) {
            t = 1.0;
            ++clamped;
        }
        out.T[i] = t;
        out.S_e[i] = v.S_e[i] / c.s_e0_max;
        out.S_x[i] = v.S_x[i] / c.s_x0;
    }
    if (clamped_count) *clamped_count += clamped;
    return out;
}

Snapshot denormalize(const Snapshot& v, const NormConsts& c) {
    c.validate();
    if (v.scale != FieldScale::Unit)
        throw Error(ErrorCode::InvalidArgument, "denormalize expects a unit-scale snapshot");
    Snapshot out = v;
    out.scale = FieldScale::Physical;
    const double t_span = c.t_scale - c.t_ambient;
    for (int i = 0; i < v.T.size(); ++i) {
        out.T[i] = c.t_ambient + v.T[i] * t_span;
        out.S_e[i] = v.S_e[i] * c.s_e0_max;
        out.S_x[i] = v.S_x[i] * c.s_x0;
    }
    return out;
}

Eigen::MatrixXd gramian(const Eigen::MatrixXd& A) {
    if (!A.allFinite()) throw Error(ErrorCode::InvalidState, "gramian: non-finite entries");
    return A.transpose() * A;
}

SelectionResult select_nodes(const Eigen::MatrixXd& G, int m) {
    const int M = int(G.rows());
    if (G.cols() != M) throw Error(ErrorCode::InvalidArgument, "select_nodes: G must be square");
    if (m < 1 || m > M)
        throw Error(ErrorCode::InvalidArgument, "select_nodes: need 1 <= m <= M");

    Eigen::VectorXd d = G.diagonal();
    const double floor = 1e-12 * d.maxCoeff();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(M, m);
    std::vector<bool> picked(M, false);

    SelectionResult res;
    for (int k = 0; k < m; ++k) {
        int pivot = -1;
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < M; ++i) {
            if (picked[i]) continue;
            if (d(i) > best) {  // strict comparison: ties keep the lowest index
                best = d(i);
                pivot = i;
            }
        }
        if (pivot < 0 || best <= floor)
            throw RankDeficiencyError(
                "select_nodes: residual diagonal exhausted after " + std::to_string(k) +
                    " pivots (requested " + std::to_string(m) + ")",
                k);

        res.indices.push_back(pivot);
        res.pivot_gains.push_back(best);

        const double sq = std::sqrt(best);
        for (int i = 0; i < M; ++i) {
            double acc = G(i, pivot);
            for (int t = 0; t < k; ++t) acc -= L(i, t) * L(pivot, t);
            L(i, k) = acc / sq;
        }
        picked[pivot] = true;
        for (int i = 0; i < M; ++i) {
            if (picked[i]) continue;
            d(i) = std::max(0.0, d(i) - L(i, k) * L(i, k));
        }
    }

    // Condition number of the selected Gram block, with the guard thresholds.
    Eigen::MatrixXd Gs(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) Gs(a, b) = G(res.indices[a], res.indices[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Gs);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    res.condition_number = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (res.condition_number > 1e12)
        throw Error(ErrorCode::IllConditioned,
                    "select_nodes: selected Gram block condition number " +
                        std::to_string(res.condition_number) + " exceeds 1e12");
    if (res.condition_number > 1e8)
        res.warnings.push_back("selected Gram block condition number " +
                               std::to_string(res.condition_number) + " exceeds 1e8");
    return res;
}

Eigen::VectorXd project_coefficients(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                                     double lambda) {
    if (basis.cols() == 0) throw Error(ErrorCode::InvalidArgument, "project: empty basis");
    if (basis.rows() != target.size())
        throw Error(ErrorCode::InvalidArgument, "project: basis/target size mismatch");
    if (lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "project: lambda must be >= 0");

    const int k = int(basis.cols());
    Eigen::MatrixXd A = basis.transpose() * basis;
    A.diagonal().array() += lambda;
    const Eigen::VectorXd b = basis.transpose() * target;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (lambda == 0.0) {
        const Eigen::VectorXd dv = ldlt.vectorD().cwiseAbs();
        if (ldlt.info() != Eigen::Success || dv.minCoeff() <= 1e-14 * dv.maxCoeff())
            throw Error(ErrorCode::IllConditioned,
                        "project: normal equations singular at lambda=0; use lambda > 0");
    }
    Eigen::VectorXd c = ldlt.solve(b);
    if (c.size() != k || !c.allFinite())
        throw Error(ErrorCode::IllConditioned, "project: solve produced non-finite coefficients");
    return c;
}

namespace {

struct MappedEnsemble {
    Eigen::MatrixXd V;  // 3*n_ref x M, mapped unit-scale columns
    std::vector<GeomDescriptors1D> desc1;
    std::vector<GeomDescriptors2D> desc2;
};

ReferenceConfig build_reference(const RunConfig& cfg, const std::vector<Snapshot>& lf_unit) {
    ReferenceConfig ref;
    ref.dim = cfg.dim;
    ref.ref_grid = cfg.hf.grid;
    ref.indicator = cfg.indicator;

    if (cfg.dim == 1) {
        ref.x_ref = 0.5 * cfg.hf.grid.lx;
        std::vector<double> w_se, w_sx, w_se_all, w_sx_all;
        for (const auto& s : lf_unit) {
            const FrontAnchors ae = front_anchors_1d(s.S_e, s.grid, ref.edge_band);
            const FrontAnchors ax = front_anchors_1d(s.S_x, s.grid, ref.edge_band);
            w_se_all.push_back(ae.width);
            w_sx_all.push_back(ax.width);
            if (!ae.degenerate) w_se.push_back(ae.width);
            if (!ax.degenerate) w_sx.push_back(ax.width);
        }
        // Medians over the non-degenerate training fronts; degenerate widths
        // only count when nothing else is available.
        ref.w_ref_Se = median(w_se.empty() ? w_se_all : w_se);
        ref.w_ref_Sx = median(w_sx.empty() ? w_sx_all : w_sx);
    } else {
        std::vector<double> mx, my, sx, sy;
        for (const auto& s : lf_unit) {
            const Indicator ind = activity_indicator(s, cfg.indicator);
            if (ind.degenerate)
                throw Error(ErrorCode::DegenerateFront,
                            "training snapshot has a degenerate activity indicator");
            const GeomDescriptors2D d = moments_2d(ind.J, s.grid);
            mx.push_back(d.mu_x);
            my.push_back(d.mu_y);
            sx.push_back(d.sigma_x);
            sy.push_back(d.sigma_y);
        }
        ref.mu_x_ref = median(mx);
        ref.mu_y_ref = median(my);
        ref.sigma_x_ref = median(sx);
        ref.sigma_y_ref = median(sy);
    }
    return ref;
}

MappedEnsemble map_ensemble(const std::vector<Snapshot>& unit, const ReferenceConfig& ref) {
    MappedEnsemble out;
    const int n = ref.ref_grid.size();
    out.V.resize(3 * n, Eigen::Index(unit.size()));
    for (size_t i = 0; i < unit.size(); ++i) {
        if (ref.dim == 1) {
            auto [snap, d] = map_1d(unit[i], ref);
            out.V.col(Eigen::Index(i)) = flatten(snap);
            out.desc1.push_back(d);
        } else {
            auto [snap, d] = map_2d(unit[i], ref);
            out.V.col(Eigen::Index(i)) = flatten(snap);
            out.desc2.push_back(d);
        }
    }
    return out;
}

// Descriptor block of the augmented matrix: standardized per descriptor over
// the ensemble, then scaled by beta so beta = 1 puts the block on equal
// footing with the unit-scaled fields.
Eigen::MatrixXd descriptor_block(const MappedEnsemble& me, double beta,
                                 std::vector<std::string>* log) {
    const int M = int(me.V.cols());
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    if (!me.desc1.empty()) {
        names = GeomDescriptors1D::names();
        rows.resize(names.size());
        for (const auto& d : me.desc1) {
            const auto f = d.flat();
            for (size_t r = 0; r < f.size(); ++r) rows[r].push_back(f[r]);
        }
    } else {
        names = GeomDescriptors2D::names();
        rows.resize(names.size());
        for (const auto& d : me.desc2) {
            const auto f = d.flat();
            for (size_t r = 0; r < f.size(); ++r) rows[r].push_back(f[r]);
        }
    }

    Eigen::MatrixXd D(rows.size(), M);
    for (size_t r = 0; r < rows.size(); ++r) {
        double mean = 0.0;
        for (double x : rows[r]) mean += x;
        mean /= M;
        double var = 0.0;
        for (double x : rows[r]) var += (x - mean) * (x - mean);
        const double sd = std::sqrt(var / M);
        if (sd < 1e-15 * (std::abs(mean) + 1.0)) {
            // Constant descriptor carries no selection information.
            for (int c = 0; c < M; ++c) D(Eigen::Index(r), c) = 0.0;
            if (log) log->push_back("descriptor '" + names[r] + "' is constant; dropped from augmentation");
        } else {
            for (int c = 0; c < M; ++c) D(Eigen::Index(r), c) = beta * (rows[r][c] - mean) / sd;
        }
    }
    return D;
}

}  // namespace

BiFiModel offline_train(const RunConfig& cfg, const TrainHooks& hooks) {
    cfg.validate();

    BiFiModel model;
    model.config = cfg;
    model.norm.t_ambient = cfg.hf.phys.t_ambient;
    model.norm.t_scale = cfg.t_scale;
    model.norm.s_x0 = cfg.hf.phys.s_x0;
    for (const auto& d : cfg.box.dims)
        if (d.name == "S_e0") model.norm.s_e0_max = d.upper;
    model.norm.validate();

    model.training = lhs_sample(cfg.box, cfg.sample_count, cfg.seed);
    const int M = cfg.sample_count;
    const int m = cfg.node_count;

    // LF ensemble (possibly resumed from persisted snapshots).
    log_line(hooks, "running " + std::to_string(M) + " LF simulations");
    std::vector<Snapshot> lf_unit(M);
    std::atomic<long> clamped{0};
    parallel_for(M, cfg.parallelism, [&](int i) {
        std::optional<Snapshot> snap;
        if (hooks.load_snapshot) snap = hooks.load_snapshot(Fidelity::LF, i);
        if (!snap) {
            snap = simulate(cfg.lf.grid, cfg.lf.phys, model.training.row(i), cfg.ignition);
            snap->fidelity = Fidelity::LF;
            if (hooks.store_snapshot) hooks.store_snapshot(Fidelity::LF, i, *snap);
        }
        long local = 0;
        lf_unit[i] = normalize(*snap, model.norm, &local);
        clamped += local;
    });
    model.clamped_cells = clamped.load();
    if (model.clamped_cells > 0)
        model.condition_log.push_back(std::to_string(model.clamped_cells) +
                                      " cells clamped at t_scale during normalization");

    // Reference frame from the LF training ensemble, then the mapped matrix.
    model.ref = build_reference(cfg, lf_unit);
    log_line(hooks, "mapping LF ensemble to the reference domain");
    const int n_ref = cfg.hf.grid.size();

    std::vector<int> gamma_union;
    {
        MappedEnsemble mapped = map_ensemble(lf_unit, model.ref);
        Eigen::MatrixXd D = descriptor_block(mapped, cfg.beta, &model.condition_log);
        Eigen::MatrixXd A(mapped.V.rows() + D.rows(), M);
        A.topRows(mapped.V.rows()) = mapped.V;
        A.bottomRows(D.rows()) = D;

        log_line(hooks, "selecting mapped collocation nodes");
        const SelectionResult sel = select_nodes(gramian(A), m);
        model.mapped.gamma = sel.indices;
        model.mapped.condition_number = sel.condition_number;
        model.condition_log.push_back("mapped Gram block condition number " +
                                      std::to_string(sel.condition_number));
        for (const auto& w : sel.warnings) model.condition_log.push_back(w);

        const VariableBlocks lf_blocks = split_columns(mapped.V, n_ref, sel.indices);
        model.mapped.lf_T = lf_blocks.T;
        model.mapped.lf_Se = lf_blocks.Se;
        model.mapped.lf_Sx = lf_blocks.Sx;
        if (cfg.dim == 1)
            for (int idx : sel.indices) model.lf_desc_1d.push_back(mapped.desc1[idx]);
        else
            for (int idx : sel.indices) model.lf_desc_2d.push_back(mapped.desc2[idx]);
    }

    {
        // Conventional baseline: identical machinery on unmapped snapshots.
        Eigen::MatrixXd Vc(3 * n_ref, M);
        for (int i = 0; i < M; ++i)
            Vc.col(i) = flatten(to_reference_grid(lf_unit[i], cfg.hf.grid));

        log_line(hooks, "selecting conventional collocation nodes");
        const SelectionResult sel = select_nodes(gramian(Vc), m);
        model.conventional.gamma = sel.indices;
        model.conventional.condition_number = sel.condition_number;
        model.condition_log.push_back("conventional Gram block condition number " +
                                      std::to_string(sel.condition_number));
        for (const auto& w : sel.warnings) model.condition_log.push_back(w);

        const VariableBlocks lf_blocks = split_columns(Vc, n_ref, sel.indices);
        model.conventional.lf_T = lf_blocks.T;
        model.conventional.lf_Se = lf_blocks.Se;
        model.conventional.lf_Sx = lf_blocks.Sx;
    }

    // HF runs at the union of both node sets, each snapshot keyed by its
    // training index so reruns can resume.
    gamma_union = model.mapped.gamma;
    for (int idx : model.conventional.gamma)
        if (std::find(gamma_union.begin(), gamma_union.end(), idx) == gamma_union.end())
            gamma_union.push_back(idx);
    std::sort(gamma_union.begin(), gamma_union.end());

    log_line(hooks, "running " + std::to_string(gamma_union.size()) + " HF simulations");
    std::vector<Snapshot> hf_unit(gamma_union.size());
    parallel_for(int(gamma_union.size()), cfg.parallelism, [&](int k) {
        const int idx = gamma_union[k];
        std::optional<Snapshot> snap;
        if (hooks.load_snapshot) snap = hooks.load_snapshot(Fidelity::HF, idx);
        if (!snap) {
            snap = simulate(cfg.hf.grid, cfg.hf.phys, model.training.row(idx), cfg.ignition);
            snap->fidelity = Fidelity::HF;
            if (hooks.store_snapshot) hooks.store_snapshot(Fidelity::HF, idx, *snap);
        }
        hf_unit[k] = normalize(*snap, model.norm);
    });
    auto hf_at = [&](int training_idx) -> const Snapshot& {
        const auto it = std::lower_bound(gamma_union.begin(), gamma_union.end(), training_idx);
        return hf_unit[size_t(it - gamma_union.begin())];
    };

    // Mapped HF bases + descriptor pairs, then the LF -> HF transfer fits.
    {
        const int mm = int(model.mapped.gamma.size());
        model.mapped.hf_T.resize(n_ref, mm);
        model.mapped.hf_Se.resize(n_ref, mm);
        model.mapped.hf_Sx.resize(n_ref, mm);
        for (int k = 0; k < mm; ++k) {
            const Snapshot& s = hf_at(model.mapped.gamma[k]);
            if (cfg.dim == 1) {
                auto [snap, d] = map_1d(s, model.ref);
                const Eigen::VectorXd col = flatten(snap);
                model.mapped.hf_T.col(k) = col.segment(0, n_ref);
                model.mapped.hf_Se.col(k) = col.segment(n_ref, n_ref);
                model.mapped.hf_Sx.col(k) = col.segment(2 * n_ref, n_ref);
                model.hf_desc_1d.push_back(d);
            } else {
                auto [snap, d] = map_2d(s, model.ref);
                const Eigen::VectorXd col = flatten(snap);
                model.mapped.hf_T.col(k) = col.segment(0, n_ref);
                model.mapped.hf_Se.col(k) = col.segment(n_ref, n_ref);
                model.mapped.hf_Sx.col(k) = col.segment(2 * n_ref, n_ref);
                model.hf_desc_2d.push_back(d);
            }
        }
        model.regression = cfg.dim == 1
                               ? fit_descriptor_regression_1d(model.lf_desc_1d, model.hf_desc_1d)
                               : fit_descriptor_regression_2d(model.lf_desc_2d, model.hf_desc_2d);
    }

    {
        const int mc = int(model.conventional.gamma.size());
        model.conventional.hf_T.resize(n_ref, mc);
        model.conventional.hf_Se.resize(n_ref, mc);
        model.conventional.hf_Sx.resize(n_ref, mc);
        for (int k = 0; k < mc; ++k) {
            const Eigen::VectorXd col =
                flatten(to_reference_grid(hf_at(model.conventional.gamma[k]), cfg.hf.grid));
            model.conventional.hf_T.col(k) = col.segment(0, n_ref);
            model.conventional.hf_Se.col(k) = col.segment(n_ref, n_ref);
            model.conventional.hf_Sx.col(k) = col.segment(2 * n_ref, n_ref);
        }
    }

    log_line(hooks, "offline training complete");
    return model;
}

namespace {

Eigen::VectorXd field_vector(const Field& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.v.data(), Eigen::Index(f.v.size()));
}

Field vector_field(const Eigen::VectorXd& v, const Grid& g) {
    Field f(g);
    for (int i = 0; i < g.size(); ++i) f[i] = v(i);
    return f;
}

// Project per variable onto the LF basis and rebuild with the HF basis.
Snapshot reconstruct(const MethodBases& b, const Snapshot& unit_ref, double lambda,
                     const Grid& ref_grid, const ParamVector& z) {
    const Eigen::VectorXd c_t = project_coefficients(b.lf_T, field_vector(unit_ref.T), lambda);
    const Eigen::VectorXd c_se = project_coefficients(b.lf_Se, field_vector(unit_ref.S_e), lambda);
    const Eigen::VectorXd c_sx = project_coefficients(b.lf_Sx, field_vector(unit_ref.S_x), lambda);

    Snapshot out(ref_grid, Fidelity::HF);
    out.z = z;
    out.scale = FieldScale::Unit;
    out.T = vector_field(b.hf_T * c_t, ref_grid);
    out.S_e = vector_field(b.hf_Se * c_se, ref_grid);
    out.S_x = vector_field(b.hf_Sx * c_sx, ref_grid);
    return out;
}

Prediction conventional_from_unit(const BiFiModel& model, const Snapshot& lf_unit_snap,
                                  const ParamVector& z) {
    Prediction pred;
    const Snapshot unit_ref = to_reference_grid(lf_unit_snap, model.config.hf.grid);
    Snapshot recon = reconstruct(model.conventional, unit_ref, model.config.lambda,
                                 model.config.hf.grid, z);
    pred.snapshot = denormalize(recon, model.norm);
    pred.snapshot.fidelity = Fidelity::HF;
    return pred;
}

}  // namespace

Prediction lf_predict(const BiFiModel& model, const ParamVector& z) {
    Prediction pred;
    const auto t0 = Clock::now();
    pred.snapshot = simulate(model.config.lf.grid, model.config.lf.phys, z, model.config.ignition);
    pred.lf_seconds = seconds_since(t0);
    pred.online_seconds = pred.lf_seconds;
    pred.out_of_box = !model.config.box.contains(z);
    return pred;
}

Prediction conventional_predict_from(const BiFiModel& model, const Snapshot& lf_unit,
                                     const ParamVector& z) {
    const auto t0 = Clock::now();
    Prediction pred = conventional_from_unit(model, lf_unit, z);
    pred.online_seconds = seconds_since(t0);
    pred.out_of_box = !model.config.box.contains(z);
    return pred;
}

Prediction conventional_predict(const BiFiModel& model, const ParamVector& z) {
    const auto t0 = Clock::now();
    Snapshot lf_snap = simulate(model.config.lf.grid, model.config.lf.phys, z, model.config.ignition);
    const double lf_seconds = seconds_since(t0);

    Prediction pred = conventional_from_unit(model, normalize(lf_snap, model.norm), z);
    pred.lf_seconds = lf_seconds;
    pred.online_seconds = seconds_since(t0);
    pred.out_of_box = !model.config.box.contains(z);
    return pred;
}

Prediction online_predict_from(const BiFiModel& model, const Snapshot& lf_unit,
                               const ParamVector& z) {
    const auto t0 = Clock::now();
    Prediction pred;
    try {
        if (model.config.dim == 1) {
            auto [unit_ref, lf_desc] = map_1d(lf_unit, model.ref);
            Snapshot recon = reconstruct(model.mapped, unit_ref, model.config.lambda,
                                         model.config.hf.grid, z);
            const GeomDescriptors1D hf_desc = predict_hf_descriptors_1d(model.regression, lf_desc);
            Snapshot phys_unit = unmap_1d(recon, hf_desc, model.ref, model.config.hf.grid);
            pred.snapshot = denormalize(phys_unit, model.norm);
        } else {
            auto [unit_ref, lf_desc] = map_2d(lf_unit, model.ref);
            Snapshot recon = reconstruct(model.mapped, unit_ref, model.config.lambda,
                                         model.config.hf.grid, z);
            const GeomDescriptors2D hf_desc = predict_hf_descriptors_2d(model.regression, lf_desc);
            Snapshot phys_unit = unmap_2d(recon, hf_desc, model.ref, model.config.hf.grid);
            pred.snapshot = denormalize(phys_unit, model.norm);
        }
        pred.snapshot.fidelity = Fidelity::HF;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateFront) throw;
        pred = conventional_from_unit(model, lf_unit, z);
        pred.mapping_fallback = true;
    }
    pred.online_seconds = seconds_since(t0);
    pred.out_of_box = !model.config.box.contains(z);
    return pred;
}

Prediction online_predict(const BiFiModel& model, const ParamVector& z) {
    const auto t0 = Clock::now();
    Snapshot lf_snap = simulate(model.config.lf.grid, model.config.lf.phys, z, model.config.ignition);
    const double lf_seconds = seconds_since(t0);

    Prediction pred = online_predict_from(model, normalize(lf_snap, model.norm), z);
    pred.lf_seconds = lf_seconds;
    pred.online_seconds = seconds_since(t0);
    return pred;
}

}  // namespace pyro

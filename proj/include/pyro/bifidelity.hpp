#pragma once

#include "pyro/config.hpp"
#include "pyro/mapping.hpp"
#include "pyro/sampling.hpp"
#include "pyro/snapshot.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pyro {

/// Affine unit scaling: temperature by (T - T_a)/(T_scale - T_a), moisture by
/// the box maximum of S_e0, combustibles by S_x0.
struct NormConsts {
    double t_ambient = 300.0;
    double t_scale = 1500.0;
    double s_e0_max = 1.0;
    double s_x0 = 1.0;

    void validate() const {
        if (!(t_scale > t_ambient))
            throw Error(ErrorCode::Config, "normalization: t_scale must exceed t_ambient");
        if (!(s_e0_max > 0.0) || !(s_x0 > 0.0))
            throw Error(ErrorCode::Config, "normalization: fuel scales must be > 0");
    }
};

/// Unit-scale a physical snapshot. Temperatures above t_scale clamp to 1;
/// *clamped_count reports how many cells clamped.
Snapshot normalize(const Snapshot& v, const NormConsts& c, long* clamped_count = nullptr);
Snapshot denormalize(const Snapshot& v, const NormConsts& c);

/// Gramian of the columns of A under the plain Euclidean inner product.
Eigen::MatrixXd gramian(const Eigen::MatrixXd& A);

struct SelectionResult {
    std::vector<int> indices;
    /// Residual diagonal value at each pivot (squared projection distances).
    std::vector<double> pivot_gains;
    /// Condition number of the selected m x m Gram block.
    double condition_number = 0.0;
    std::vector<std::string> warnings;
};

/// First m pivots of the diagonally pivoted Cholesky factorization of G,
/// equivalent to greedy largest-projection-residual selection. Ties pick the
/// lowest index.
SelectionResult select_nodes(const Eigen::MatrixXd& G, int m);

/// Ridge-regularized least squares: (B^T B + lambda I) C = B^T t via LDLT.
Eigen::VectorXd project_coefficients(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                                     double lambda);

/// Per-variable bases at the selected nodes for one surrogate flavor.
struct MethodBases {
    std::vector<int> gamma;  // indices into the training sample set
    Eigen::MatrixXd lf_T, lf_Se, lf_Sx;  // n_ref x m
    Eigen::MatrixXd hf_T, hf_Se, hf_Sx;
    double condition_number = 0.0;
};

/// Offline artifact. "mapped" carries the geometry-aligned surrogate,
/// "conventional" the unaligned baseline used for comparisons.
struct BiFiModel {
    RunConfig config;
    SampleSet training;
    NormConsts norm;
    ReferenceConfig ref;
    MethodBases mapped;
    MethodBases conventional;
    DescriptorRegression regression;
    // LF/HF descriptor pairs at the mapped nodes (diagnostics + persistence).
    std::vector<GeomDescriptors1D> lf_desc_1d, hf_desc_1d;
    std::vector<GeomDescriptors2D> lf_desc_2d, hf_desc_2d;
    std::vector<std::string> condition_log;
    long clamped_cells = 0;
};

struct TrainHooks {
    std::function<void(const std::string&)> log;
    /// Load a previously persisted snapshot, or nullopt to (re)simulate.
    std::function<std::optional<Snapshot>(Fidelity, int)> load_snapshot;
    /// Persist a freshly simulated snapshot.
    std::function<void(Fidelity, int, const Snapshot&)> store_snapshot;
};

/// Offline phase: LF ensemble, reference frame, augmented Gramian selection,
/// HF runs at the selected nodes, per-variable bases, descriptor regression.
BiFiModel offline_train(const RunConfig& cfg, const TrainHooks& hooks = {});

enum class PredictMethod { MF, CF, LF };

struct Prediction {
    Snapshot snapshot;          // physical scale, HF grid (LF method: LF grid)
    bool mapping_fallback = false;
    bool out_of_box = false;
    double lf_seconds = 0.0;    // cost of the single LF run
    double online_seconds = 0.0;  // LF run + mapping + projection + unmapping
};

/// Online phase: one LF run, projection in the reference domain onto the LF
/// basis, coefficient reuse on the HF basis, inverse mapping with regressed
/// descriptors. A degenerate LF front falls back to the conventional path.
Prediction online_predict(const BiFiModel& model, const ParamVector& z);

/// Baseline with the mapping replaced by identity.
Prediction conventional_predict(const BiFiModel& model, const ParamVector& z);

/// Plain LF evaluation (native LF grid).
Prediction lf_predict(const BiFiModel& model, const ParamVector& z);

/// Variants that reuse an already-computed unit-scaled LF snapshot, so one LF
/// run can feed several tiers.
Prediction online_predict_from(const BiFiModel& model, const Snapshot& lf_unit,
                               const ParamVector& z);
Prediction conventional_predict_from(const BiFiModel& model, const Snapshot& lf_unit,
                                     const ParamVector& z);

}  // namespace pyro

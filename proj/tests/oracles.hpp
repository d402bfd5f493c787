// Test-only oracles, independent of the library's implementation paths.
#pragma once

#include "pyro/grid.hpp"
#include "pyro/interpolate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace pyro::oracles {

// Greedy largest-projection-residual selection via explicit modified
// Gram-Schmidt on the raw columns (no Gramian, no Cholesky). Ties resolve to
// the lowest index.
inline std::vector<int> greedy_select(const Eigen::MatrixXd& A, int m) {
    const int M = int(A.cols());
    std::vector<Eigen::VectorXd> residuals;
    residuals.reserve(M);
    for (int j = 0; j < M; ++j) residuals.push_back(A.col(j));
    std::vector<bool> picked(M, false);
    std::vector<int> out;
    std::vector<Eigen::VectorXd> ortho;

    for (int k = 0; k < m; ++k) {
        int best = -1;
        double best_norm2 = -1.0;
        for (int j = 0; j < M; ++j) {
            if (picked[j]) continue;
            const double n2 = residuals[j].squaredNorm();
            if (n2 > best_norm2) {
                best_norm2 = n2;
                best = j;
            }
        }
        out.push_back(best);
        picked[best] = true;
        Eigen::VectorXd q = residuals[best];
        const double qn = q.norm();
        if (qn <= 0.0) break;
        q /= qn;
        ortho.push_back(q);
        for (int j = 0; j < M; ++j) {
            if (picked[j]) continue;
            residuals[j] -= q * q.dot(residuals[j]);
        }
    }
    return out;
}

// Dense solve of (B^T B + lambda I) C = B^T t by Gaussian elimination with
// partial pivoting, assembled with explicit loops.
inline std::vector<double> ridge_solve(const Eigen::MatrixXd& B, const Eigen::VectorXd& t,
                                       double lambda) {
    const int n = int(B.rows());
    const int k = int(B.cols());
    std::vector<std::vector<double>> A(k, std::vector<double>(k, 0.0));
    std::vector<double> b(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int r = 0; r < n; ++r) s += B(r, i) * B(r, j);
            A[i][j] = s;
        }
        A[i][i] += lambda;
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += B(r, i) * t(r);
        b[i] = s;
    }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < k; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < k; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(k, 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < k; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

// Exact advection solution on the same grid: the initial profile sampled at
// the foot of the characteristic, with periodic wrapping.
inline Field advect_exact_periodic(const Field& initial, const Grid& g, double u, double time) {
    Field out(g);
    for (int i = 0; i < g.nx; ++i) {
        double x = g.x(i) - u * time;
        x -= g.lx * std::floor(x / g.lx);
        out[i] = sample_linear(initial, g, x);
    }
    return out;
}

// Direct kernel-sum KDE evaluation.
inline double kde_direct(const std::vector<double>& samples, double h, double x) {
    double acc = 0.0;
    for (double s : samples) {
        const double u = (x - s) / h;
        acc += std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
    }
    return acc / (double(samples.size()) * h);
}

// Per-dimension stratum occupancy for LHS checks.
inline std::vector<int> stratum_histogram(const std::vector<double>& values, double lo, double hi,
                                          int strata) {
    std::vector<int> hist(strata, 0);
    for (double v : values) {
        int k = int(std::floor((v - lo) / (hi - lo) * strata));
        if (k == strata) k = strata - 1;  // exact upper edge
        if (k >= 0 && k < strata) ++hist[k];
    }
    return hist;
}

}  // namespace pyro::oracles

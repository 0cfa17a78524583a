#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace psc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Throws ValidationError unless every entry of m is finite and m is nonempty.
void check_data_matrix(const Matrix& m);

/// One cluster's fitted subspace: a mean, unit-norm loading columns and the
/// scores of the points the model was fitted on. Dense fits have mutually
/// orthonormal loadings; sparse fits only guarantee unit column norms.
struct SubspaceModel {
    RowVector mean;        // length P
    Matrix loadings;       // P x R
    Matrix scores;         // N_k x R, column r holds d_i = (x_i - mean) . v_r
    Vector score_norms;    // length R, entry r = scores.col(r).squaredNorm()
    int rank = 0;
    bool sparse = false;
    double gamma = 0.0;
};

/// Top-r singular triplets, singular values descending.
struct SvdTriplets {
    Matrix left;      // N x r
    Vector singular;  // r
    Matrix right;     // P x r
};

/// Column-center a matrix; returns the centered matrix and the column means.
std::pair<Matrix, RowVector> center(const Matrix& data);

/// Truncated SVD. Small problems use a dense decomposition; larger ones run a
/// blocked subspace iteration against the data matrix with a dense fallback.
SvdTriplets leading_svd(const Matrix& data, int r);

/// Dense PCA of rank r on (self-centered) data. Loading signs are fixed so
/// each column's largest-magnitude entry is positive.
SubspaceModel fit_pca(const Matrix& data, int r);

/// sgn(a) * max(|a| - gamma, 0).
double soft_threshold(double a, double gamma);

struct GammaForCardinality {
    double gamma = 0.0;
    bool exact = true;  // false when ties made the requested count unattainable
};

/// Penalty value that keeps exactly target_nonzeros coefficients of
/// sgn(X^T u)(|X^T u| - gamma)_+ alive: the (target+1)-th largest |X^T u|.
/// When ties make the exact count unattainable, returns the largest penalty
/// that keeps at least the requested number alive, flagged inexact.
GammaForCardinality gamma_for_cardinality(const Matrix& data, const Vector& component_u,
                                          int target_nonzeros);

/// Sparse PCA by iterative soft thresholding with rank-one deflation. Each
/// component starts from the leading singular triplet of the deflated matrix
/// (v scaled by sigma), alternates the threshold update of v with the
/// renormalisation of u until the change in v drops below tol, deflates by
/// the converged unnormalised rank-one term, and stores v at unit norm.
/// gamma = 0 reproduces fit_pca up to sign.
SubspaceModel fit_sparse_pca(const Matrix& data, int r, double gamma, double tol = 1e-7,
                             int max_iter = 500);

/// Same iteration, but each component derives its own penalty from the order
/// statistic of |X^T u| at its first iteration so that target_nonzeros
/// coefficients survive; the final loading is capped to that cardinality.
SubspaceModel fit_sparse_pca_target(const Matrix& data, int r, int target_nonzeros,
                                    double tol = 1e-7, int max_iter = 500);

/// Mean squared reconstruction error of data under the model's loadings,
/// (1/N) sum_i || x_i - x_i V V^T ||^2 with rows centered by model.mean.
double reconstruction_error(const Matrix& data, const SubspaceModel& model);

}  // namespace psc

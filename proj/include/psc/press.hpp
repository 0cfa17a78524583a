#pragma once

#include <vector>

#include "psc/pca.hpp"

namespace psc {

/// How leave-one-out weights treat leverages near 1. Strict evaluation raises
/// LeverageSingularityError once h >= 1 - 1e-12; the clustering loop instead
/// clamps h at 1 - 1e-8 and proceeds, since a lone point dominating a
/// component is a transient state there.
enum class LeveragePolicy { strict, clamp };

/// Closed-form leave-one-out report for one model over one data matrix.
struct PressReport {
    std::vector<Matrix> residuals;  // per component r: N x P rows e_i = x_i - (x_i.v_r) v_r^T
    Matrix leverages;               // N x R
    Matrix loo_errors;              // N x P rows e_{-i}
    double press = 0.0;             // (1/N) sum_i ||loo_errors.row(i)||^2
};

/// Predictive influence of one observation under one model.
struct InfluenceVector {
    RowVector values;       // length P
    double magnitude = 0.0; // squared norm of values
};

/// In-sample leverages h_i = d_i^2 / (d^T d) per component, from the model's
/// stored scores.
Matrix leverages(const SubspaceModel& model);

/// Approximated PCA PRESS: every row is evaluated against the model through
/// the per-component recursion e_{-i} = sum_r e_i^(r)/(1-h_i^(r)) - (R-1) x_i
/// on data centered by the model's mean. `data` may be the fitted matrix or
/// held-out rows; leverages always come from the row's own score against the
/// model's stored score norms.
PressReport press_closed_form(const Matrix& data, const SubspaceModel& model,
                              LeveragePolicy policy = LeveragePolicy::strict);

/// PRESS value only, without materialising the per-point report.
double press_value(const Matrix& data, const SubspaceModel& model,
                   LeveragePolicy policy = LeveragePolicy::strict);

/// Exact leave-one-out PRESS: refits a rank-r PCA on the other N-1 rows
/// (recentering every time) and averages the squared reconstruction error of
/// the held-out row. This is the oracle the closed form approximates.
double press_brute_force(const Matrix& data, int r);

/// Gradient of half the squared leave-one-out error with respect to each
/// observation, with the model parameters (loadings, score norms, leverages)
/// held fixed: pi_i = e_{-i} (sum_r (I - v_r v_r^T)/(1-h_i^(r)) - (R-1) I).
std::vector<InfluenceVector> predictive_influence(const Matrix& data, const SubspaceModel& model,
                                                  LeveragePolicy policy = LeveragePolicy::strict);

/// Squared influence magnitudes for every row; the quantity the clustering
/// assignment ranks.
Vector influence_magnitudes(const Matrix& data, const SubspaceModel& model,
                            LeveragePolicy policy = LeveragePolicy::strict);

/// The leverage-weighted operator X^T Xi^{-2} X of the single-component
/// eigenproblem, with Xi_i = (1 - h_i)^2 and X centered by the model's mean.
Matrix weighted_eigen_operator(const Matrix& data, const SubspaceModel& model);

}  // namespace psc

#pragma once

#include <utility>
#include <vector>

#include "psc/cluster.hpp"

namespace psc {

/// Model-selection curves over candidate cluster counts K = 1..k_max.
struct SelectionReport {
    std::vector<int> candidate_ks;
    std::vector<double> press_by_k;  // per-point normalised total PRESS
    std::vector<double> wk_by_k;     // within-cluster residual W_K
    std::vector<double> sod_by_k;    // NaN outside the interior candidates
    std::vector<bool> degenerate;    // candidates whose run failed, skipped
    int chosen_k_press = 0;
    int chosen_k_sod = 0;
    std::vector<int> ranks_by_cluster;  // ranks of the PRESS-chosen K's run
};

/// W_K = (1/K) sum_k (1/N_k) sum_{i in C_k} ||x_i - x_i V_k V_k^T||^2 with
/// rows centered per cluster.
double within_cluster_residual(const Matrix& data, const Partition& partition,
                               const std::vector<SubspaceModel>& models);

/// Second-order differences of log W over candidates K = 1..k_max (NaN at
/// the exterior points; W floored at 1e-300 before the log) and the argmax
/// interior candidate, ties to the smaller K. Returns {curve, chosen_k}.
std::pair<std::vector<double>, int> sod_curve(const std::vector<double>& wk_by_k);

/// Runs the clustering for every K = 1..k_max (seed derived as seed + K) and
/// fills the full report: PRESS curve, W_K curve and second-order differences.
SelectionReport select_sweep(const Matrix& data, int k_max, const PscConfig& base_config);

/// Chooses K by the minimum of the PRESS curve (ties to the smaller K).
SelectionReport press_select_k(const Matrix& data, int k_max, const PscConfig& base_config);

/// Chooses K by the largest second-order difference of log W_K over the
/// interior candidates (ties to the smaller K).
SelectionReport sod_select(const Matrix& data, int k_max, const PscConfig& base_config);

/// Per-cluster subspace dimension scan: the PRESS-minimising rank in 1..r_max
/// for each cluster of a fixed partition (ties to the smaller rank; clusters
/// too small for r_max are capped at N_k - 2 and flagged).
std::vector<int> press_select_ranks(const Matrix& data, const Partition& partition, int r_max,
                                    const PscConfig& config, std::vector<bool>* capped = nullptr);

}  // namespace psc

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "psc/pca.hpp"
#include "psc/press.hpp"

namespace psc {

/// Hard assignment of each observation to one of K clusters, labels in 1..K.
struct Partition {
    std::vector<int> labels;  // length N
    std::vector<int> sizes;   // length K

    int k() const { return static_cast<int>(sizes.size()); }
};

Partition make_partition(std::vector<int> labels, int k);

struct PscConfig {
    int k = 1;
    std::vector<int> ranks;            // length k (a single entry is replicated)
    std::vector<double> gammas;        // length k; 0 = dense fit
    std::vector<int> target_nonzeros;  // empty, or length k; >0 selects by cardinality
    double tol = 0.0;                  // 0 picks 1e-6 * initial total PRESS
    int max_iter = 100;
    int restarts = 10;
    std::uint64_t seed = 0;
    bool clamp_leverage = true;
    bool rank_search = false;  // scan ranks 1..r_max inside every refit
    int r_max = 0;
    double sparse_tol = 1e-7;
    int sparse_max_iter = 500;
};

/// Validates and normalises a config against a data size (replicating
/// single-entry rank/gamma lists, defaulting empty ones).
PscConfig normalize_config(PscConfig config, Eigen::Index n, Eigen::Index p);

struct PscResult {
    Partition partition;
    std::vector<SubspaceModel> models;
    std::vector<double> objective_trace;  // total influence objective per iteration
    std::vector<double> press_trace;      // sum of per-cluster PRESS per iteration
    int iterations = 0;
    bool converged = false;
    int restart_index = 0;
    double objective = 0.0;
    double press = 0.0;
    // Monotonicity accounting for the convergence property suite.
    long assign_steps = 0;
    long assign_violations = 0;
    long full_steps = 0;
    long full_step_violations = 0;
};

/// One snapshot per completed iteration, for replaying a run in tests.
struct IterationRecord {
    Partition partition;
    std::vector<SubspaceModel> models;
    double objective = 0.0;
    double press = 0.0;
};

/// Assign every row to the model with the smallest squared predictive
/// influence; ties go to the smallest cluster index.
Partition assign(const Matrix& data, const std::vector<SubspaceModel>& models,
                 LeveragePolicy policy = LeveragePolicy::clamp);

/// Refit one model per cluster (dense or sparse per config). With rank_search
/// on, each cluster's rank is chosen by a PRESS scan over 1..r_max first.
std::vector<SubspaceModel> refit(const Matrix& data, const Partition& partition,
                                 const PscConfig& config);

/// Total squared predictive influence of each point under its own cluster's
/// model; the objective the algorithm descends.
double objective(const Matrix& data, const Partition& partition,
                 const std::vector<SubspaceModel>& models,
                 LeveragePolicy policy = LeveragePolicy::clamp);

/// Full multi-restart driver: random initial partitions, alternate
/// assignment and refitting until the total PRESS stabilises, keep the
/// restart with the smallest final objective.
PscResult run_psc(const Matrix& data, const PscConfig& config);

/// As run_psc but records one IterationRecord per iteration of the winning
/// restart.
PscResult run_psc_traced(const Matrix& data, const PscConfig& config,
                         std::vector<IterationRecord>* trace);

/// PRESS scan used by refit's rank search; exposed for model selection.
std::vector<int> select_ranks_by_press(const Matrix& data, const Partition& partition, int r_max,
                                       const PscConfig& config, std::vector<bool>* capped = nullptr);

}  // namespace psc

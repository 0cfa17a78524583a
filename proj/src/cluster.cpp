#include "psc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "psc/errors.hpp"
#include "psc/rng.hpp"

namespace psc {

namespace {

LeveragePolicy policy_of(const PscConfig& config) {
    return config.clamp_leverage ? LeveragePolicy::clamp : LeveragePolicy::strict;
}

int min_cluster_size(const PscConfig& config, int k) { return config.ranks[k] + 2; }

bool sizes_ok(const Partition& partition, const PscConfig& config) {
    for (int k = 0; k < config.k; ++k)
        if (partition.sizes[k] < min_cluster_size(config, k)) return false;
    return true;
}

Matrix cluster_rows(const Matrix& data, const Partition& partition, int cluster) {
    Matrix rows(partition.sizes[cluster], data.cols());
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < data.rows(); ++i)
        if (partition.labels[i] == cluster + 1) rows.row(at++) = data.row(i);
    return rows;
}

// N x K matrix of squared influence magnitudes of every point under every model.
Matrix influence_table(const Matrix& data, const std::vector<SubspaceModel>& models,
                       LeveragePolicy policy) {
    Matrix table(data.rows(), static_cast<Eigen::Index>(models.size()));
    for (std::size_t k = 0; k < models.size(); ++k)
        table.col(static_cast<Eigen::Index>(k)) = influence_magnitudes(data, models[k], policy);
    return table;
}

Partition argmin_partition(const Matrix& table) {
    const Eigen::Index n = table.rows();
    const int k = static_cast<int>(table.cols());
    std::vector<int> labels(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = -1;
        double best_val = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            const double v = table(i, c);
            if (std::isfinite(v) && v < best_val) {
                best_val = v;
                best = c;
            }
        }
        if (best < 0)
            throw AssignmentError("no finite influence for point " + std::to_string(i + 1));
        labels[i] = best + 1;
    }
    return make_partition(std::move(labels), k);
}

double table_objective(const Matrix& table, const Partition& partition) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        total += table(i, partition.labels[i] - 1);
    return total;
}

SubspaceModel fit_cluster(const Matrix& rows, int rank, int cluster, const PscConfig& config) {
    if (!config.target_nonzeros.empty() && config.target_nonzeros[cluster] > 0)
        return fit_sparse_pca_target(rows, rank, config.target_nonzeros[cluster],
                                     config.sparse_tol, config.sparse_max_iter);
    if (config.gammas[cluster] > 0.0)
        return fit_sparse_pca(rows, rank, config.gammas[cluster], config.sparse_tol,
                              config.sparse_max_iter);
    return fit_pca(rows, rank);
}

double total_press(const Matrix& data, const Partition& partition,
                   const std::vector<SubspaceModel>& models, LeveragePolicy policy) {
    double total = 0.0;
    for (int k = 0; k < partition.k(); ++k)
        total += press_value(cluster_rows(data, partition, k), models[k], policy);
    return total;
}

struct RestartOutcome {
    PscResult result;
    bool valid = false;
};

RestartOutcome run_single_restart(const Matrix& data, const PscConfig& config, int restart_index,
                                  std::vector<IterationRecord>* trace) {
    const LeveragePolicy policy = policy_of(config);
    const Eigen::Index n = data.rows();
    Rng rng(config.seed + static_cast<std::uint64_t>(restart_index));

    // Uniform random initial partition, redrawn until every cluster is viable.
    Partition partition;
    {
        bool ok = false;
        for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
            std::vector<int> labels(n);
            for (Eigen::Index i = 0; i < n; ++i)
                labels[i] = 1 + static_cast<int>(rng.integer(static_cast<std::uint64_t>(config.k)));
            partition = make_partition(std::move(labels), config.k);
            ok = sizes_ok(partition, config);
        }
        if (!ok) return {};
    }

    RestartOutcome outcome;
    PscResult& res = outcome.result;
    res.restart_index = restart_index;

    std::vector<SubspaceModel> models = refit(data, partition, config);
    Matrix table = influence_table(data, models, policy);
    double obj = table_objective(table, partition);
    double press = total_press(data, partition, models, policy);
    res.objective_trace.push_back(obj);
    res.press_trace.push_back(press);
    if (trace) trace->push_back({partition, models, obj, press});

    const double tol = config.tol > 0.0 ? config.tol : 1e-6 * press;
    int consecutive_repairs = 0;

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        res.iterations = iter;

        Partition next = argmin_partition(table);
        const double obj_before = table_objective(table, partition);
        const double obj_after = table_objective(table, next);
        res.assign_steps += 1;
        if (obj_after > obj_before) res.assign_violations += 1;

        const bool unchanged = next.labels == partition.labels;
        if (unchanged) {
            res.converged = true;
            break;
        }

        if (!sizes_ok(next, config)) {
            consecutive_repairs += 1;
            if (consecutive_repairs >= 2) return {};
            // Reseed every deficient cluster with the points carrying the
            // largest influence under their currently best model.
            const int quota = static_cast<int>(
                std::ceil(static_cast<double>(n) / (10.0 * config.k)));
            std::vector<Eigen::Index> order(n);
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            std::vector<double> best_influence(n);
            for (Eigen::Index i = 0; i < n; ++i) best_influence[i] = table(i, next.labels[i] - 1);
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return best_influence[a] > best_influence[b];
            });
            std::vector<bool> moved(n, false);
            for (int k = 0; k < config.k; ++k) {
                if (next.sizes[k] >= min_cluster_size(config, k)) continue;
                int taken = 0;
                for (Eigen::Index idx : order) {
                    if (taken >= quota) break;
                    if (moved[idx] || next.labels[idx] == k + 1) continue;
                    moved[idx] = true;
                    next.labels[idx] = k + 1;
                    ++taken;
                }
            }
            next = make_partition(std::move(next.labels), config.k);
            if (!sizes_ok(next, config)) return {};
        } else {
            consecutive_repairs = 0;
        }

        partition = std::move(next);
        models = refit(data, partition, config);
        table = influence_table(data, models, policy);
        obj = table_objective(table, partition);
        const double new_press = total_press(data, partition, models, policy);

        res.full_steps += 1;
        if (obj > res.objective_trace.back() * (1.0 + 1e-8) + 1e-300)
            res.full_step_violations += 1;
        res.objective_trace.push_back(obj);
        res.press_trace.push_back(new_press);
        if (trace) trace->push_back({partition, models, obj, new_press});

        if (std::abs(new_press - press) < tol) {
            press = new_press;
            res.converged = true;
            break;
        }
        press = new_press;
    }

    res.partition = std::move(partition);
    res.models = std::move(models);
    res.objective = res.objective_trace.back();
    res.press = res.press_trace.back();
    outcome.valid = true;
    return outcome;
}

}  // namespace

Partition make_partition(std::vector<int> labels, int k) {
    if (k < 1) throw ValidationError("partition needs at least one cluster");
    std::vector<int> sizes(k, 0);
    for (int label : labels) {
        if (label < 1 || label > k)
            throw ValidationError("partition label " + std::to_string(label) + " outside 1.." +
                                  std::to_string(k));
        sizes[label - 1] += 1;
    }
    Partition p;
    p.labels = std::move(labels);
    p.sizes = std::move(sizes);
    return p;
}

PscConfig normalize_config(PscConfig config, Eigen::Index n, Eigen::Index p) {
    if (config.k < 1) throw ValidationError("k must be positive");
    if (config.restarts < 1) throw ValidationError("restarts must be positive");
    if (config.max_iter < 1) throw ValidationError("max_iter must be positive");

    auto replicate = [&](auto& values, auto fallback, const char* what) {
        if (values.empty()) values.assign(config.k, fallback);
        else if (values.size() == 1) values.assign(config.k, values[0]);
        else if (static_cast<int>(values.size()) != config.k)
            throw ValidationError(std::string(what) + " list does not match k");
    };
    replicate(config.ranks, 1, "ranks");
    replicate(config.gammas, 0.0, "gammas");
    if (!config.target_nonzeros.empty()) replicate(config.target_nonzeros, 0, "target_nonzeros");

    for (int k = 0; k < config.k; ++k) {
        if (config.ranks[k] < 1) throw ValidationError("ranks must be positive");
        if (config.gammas[k] < 0.0) throw ValidationError("gammas must be nonnegative");
        if (!config.target_nonzeros.empty() &&
            (config.target_nonzeros[k] < 0 || config.target_nonzeros[k] > p))
            throw ValidationError("target variable count out of range");
    }
    if (config.rank_search) {
        if (config.r_max < 1) throw ValidationError("rank search needs r_max >= 1");
    }
    Eigen::Index needed = 0;
    for (int k = 0; k < config.k; ++k) needed += min_cluster_size(config, k);
    if (n < needed)
        throw ValidationError("not enough observations for the requested clusters");
    return config;
}

Partition assign(const Matrix& data, const std::vector<SubspaceModel>& models,
                 LeveragePolicy policy) {
    if (models.empty()) throw ValidationError("assign needs at least one model");
    return argmin_partition(influence_table(data, models, policy));
}

std::vector<SubspaceModel> refit(const Matrix& data, const Partition& partition,
                                 const PscConfig& raw) {
    PscConfig config = normalize_config(raw, data.rows(), data.cols());
    if (static_cast<Eigen::Index>(partition.labels.size()) != data.rows())
        throw ValidationError("partition length does not match data");
    if (partition.k() != config.k) throw ValidationError("partition does not match config.k");

    std::vector<int> ranks = config.ranks;
    if (config.rank_search)
        ranks = select_ranks_by_press(data, partition, config.r_max, config);

    std::vector<SubspaceModel> models;
    models.reserve(config.k);
    for (int k = 0; k < config.k; ++k) {
        Matrix rows = cluster_rows(data, partition, k);
        if (rows.rows() < ranks[k] + 2)
            throw ClusteringError("cluster " + std::to_string(k + 1) + " has too few points");
        models.push_back(fit_cluster(rows, ranks[k], k, config));
    }
    return models;
}

double objective(const Matrix& data, const Partition& partition,
                 const std::vector<SubspaceModel>& models, LeveragePolicy policy) {
    if (partition.k() != static_cast<int>(models.size()))
        throw ValidationError("objective: partition and model counts differ");
    Matrix table = influence_table(data, models, policy);
    return table_objective(table, partition);
}

std::vector<int> select_ranks_by_press(const Matrix& data, const Partition& partition, int r_max,
                                       const PscConfig& raw, std::vector<bool>* capped) {
    if (r_max < 1) throw ValidationError("r_max must be positive");
    PscConfig config = raw;
    config.k = partition.k();
    config.rank_search = false;  // the scan itself fixes candidate ranks
    config = normalize_config(config, data.rows(), data.cols());
    const LeveragePolicy policy = policy_of(config);
    std::vector<int> ranks(partition.k(), 1);
    if (capped) capped->assign(partition.k(), false);
    for (int k = 0; k < partition.k(); ++k) {
        Matrix rows = cluster_rows(data, partition, k);
        if (rows.rows() < 3)
            throw ClusteringError("cluster " + std::to_string(k + 1) +
                                  " too small for a rank scan");
        int limit = std::min<int>(r_max, static_cast<int>(std::min<Eigen::Index>(
                                             rows.rows() - 2, rows.cols())));
        if (capped && limit < r_max) (*capped)[k] = true;
        int best_rank = 1;
        double best_press = std::numeric_limits<double>::infinity();
        for (int r = 1; r <= limit; ++r) {
            double value;
            try {
                SubspaceModel model = fit_cluster(rows, r, k, config);
                value = press_value(rows, model, policy);
            } catch (const NumericalError&) {
                continue;  // degenerate candidate rank; skip it
            }
            if (value < best_press) {
                best_press = value;
                best_rank = r;
            }
        }
        ranks[k] = best_rank;
    }
    return ranks;
}

PscResult run_psc(const Matrix& data, const PscConfig& config) {
    return run_psc_traced(data, config, nullptr);
}

PscResult run_psc_traced(const Matrix& data, const PscConfig& raw,
                         std::vector<IterationRecord>* trace) {
    check_data_matrix(data);
    PscConfig config = normalize_config(raw, data.rows(), data.cols());

    std::optional<PscResult> best;
    std::vector<IterationRecord> best_trace;
    for (int restart = 0; restart < config.restarts; ++restart) {
        std::vector<IterationRecord> local_trace;
        RestartOutcome outcome;
        try {
            outcome = run_single_restart(data, config, restart, trace ? &local_trace : nullptr);
        } catch (const NumericalError&) {
            continue;  // a collapsed restart; others may still succeed
        }
        if (!outcome.valid) continue;
        if (!best || outcome.result.objective < best->objective) {
            best = std::move(outcome.result);
            if (trace) best_trace = std::move(local_trace);
        }
    }
    if (!best) throw ClusteringError("every restart failed to maintain viable clusters");
    if (trace) *trace = std::move(best_trace);
    return *best;
}

}  // namespace psc

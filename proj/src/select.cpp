#include "psc/select.hpp"

#include <cmath>
#include <limits>

#include "psc/errors.hpp"

namespace psc {

namespace {

constexpr double kLogFloor = 1e-300;

double normalized_press(const Matrix& data, const PscResult& result, LeveragePolicy policy) {
    // (sum_k N_k J_k) / N: every point weighs equally regardless of cluster size.
    double total = 0.0;
    for (int k = 0; k < result.partition.k(); ++k) {
        const int nk = result.partition.sizes[k];
        Matrix rows(nk, data.cols());
        Eigen::Index at = 0;
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            if (result.partition.labels[i] == k + 1) rows.row(at++) = data.row(i);
        total += nk * press_value(rows, result.models[k], policy);
    }
    return total / static_cast<double>(data.rows());
}

}  // namespace

double within_cluster_residual(const Matrix& data, const Partition& partition,
                               const std::vector<SubspaceModel>& models) {
    if (partition.k() != static_cast<int>(models.size()))
        throw ValidationError("within_cluster_residual: partition and model counts differ");
    const int k = partition.k();
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        if (partition.sizes[c] == 0) throw ValidationError("empty cluster in W_K");
        Matrix rows(partition.sizes[c], data.cols());
        Eigen::Index at = 0;
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            if (partition.labels[i] == c + 1) rows.row(at++) = data.row(i);
        total += reconstruction_error(rows, models[c]);
    }
    return total / static_cast<double>(k);
}

std::pair<std::vector<double>, int> sod_curve(const std::vector<double>& wk_by_k) {
    const std::size_t n = wk_by_k.size();
    std::vector<double> curve(n, std::numeric_limits<double>::quiet_NaN());
    auto log_w = [&](std::size_t j) { return std::log(std::max(wk_by_k[j], kLogFloor)); };
    int chosen = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::isnan(wk_by_k[i - 1]) || std::isnan(wk_by_k[i]) || std::isnan(wk_by_k[i + 1]))
            continue;
        curve[i] = log_w(i - 1) + log_w(i + 1) - 2.0 * log_w(i);
        if (curve[i] > best) {
            best = curve[i];
            chosen = static_cast<int>(i) + 1;  // candidates are K = 1..k_max
        }
    }
    return {curve, chosen};
}

SelectionReport select_sweep(const Matrix& data, int k_max, const PscConfig& base_config) {
    check_data_matrix(data);
    if (k_max < 1) throw ValidationError("k_max must be positive");
    const LeveragePolicy policy =
        base_config.clamp_leverage ? LeveragePolicy::clamp : LeveragePolicy::strict;

    SelectionReport report;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<int>> ranks_by_candidate(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        report.candidate_ks.push_back(k);
        PscConfig config = base_config;
        config.k = k;
        config.seed = base_config.seed + static_cast<std::uint64_t>(k);
        // Sweeps use a common per-cluster setting; collapse K-specific lists.
        if (config.ranks.size() > 1) config.ranks.assign(1, config.ranks[0]);
        if (config.gammas.size() > 1) config.gammas.assign(1, config.gammas[0]);
        if (config.target_nonzeros.size() > 1)
            config.target_nonzeros.assign(1, config.target_nonzeros[0]);
        try {
            PscResult result = run_psc(data, config);
            report.press_by_k.push_back(normalized_press(data, result, policy));
            report.wk_by_k.push_back(
                within_cluster_residual(data, result.partition, result.models));
            report.degenerate.push_back(false);
            for (const auto& model : result.models)
                ranks_by_candidate[static_cast<std::size_t>(k - 1)].push_back(model.rank);
        } catch (const std::runtime_error&) {
            report.press_by_k.push_back(nan);
            report.wk_by_k.push_back(nan);
            report.degenerate.push_back(true);
        }
    }

    auto [sod, chosen_sod] = sod_curve(report.wk_by_k);
    report.sod_by_k = std::move(sod);
    report.chosen_k_sod = chosen_sod;

    double best_press = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.candidate_ks.size(); ++i) {
        if (report.degenerate[i]) continue;
        if (report.press_by_k[i] < best_press) {
            best_press = report.press_by_k[i];
            report.chosen_k_press = report.candidate_ks[i];
        }
    }

    if (report.chosen_k_press > 0)
        report.ranks_by_cluster = ranks_by_candidate[static_cast<std::size_t>(
            report.chosen_k_press - 1)];
    return report;
}

SelectionReport press_select_k(const Matrix& data, int k_max, const PscConfig& base_config) {
    if (k_max < 2) throw ValidationError("press_select_k needs k_max >= 2");
    return select_sweep(data, k_max, base_config);
}

SelectionReport sod_select(const Matrix& data, int k_max, const PscConfig& base_config) {
    if (k_max < 3) throw ValidationError("sod_select needs k_max >= 3 for interior candidates");
    return select_sweep(data, k_max, base_config);
}

std::vector<int> press_select_ranks(const Matrix& data, const Partition& partition, int r_max,
                                    const PscConfig& config, std::vector<bool>* capped) {
    return select_ranks_by_press(data, partition, r_max, config, capped);
}

}  // namespace psc

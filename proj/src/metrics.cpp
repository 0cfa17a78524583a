#include "psc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "psc/errors.hpp"

namespace psc {

namespace {

std::vector<int> dense_relabel(const std::vector<int>& labels, int& k_out) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    k_out = static_cast<int>(remap.size());
    return out;
}

// Min-cost assignment with potentials on an n x m cost matrix, n <= m.
// Returns the column matched to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = static_cast<int>(cost[0].size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<int> max_assignment(const std::vector<std::vector<double>>& scores) {
    if (scores.empty() || scores[0].empty()) throw ValidationError("empty score matrix");
    const int rows = static_cast<int>(scores.size());
    const int cols = static_cast<int>(scores[0].size());
    double top = 0.0;
    for (const auto& row : scores) {
        if (static_cast<int>(row.size()) != cols)
            throw ValidationError("ragged score matrix");
        for (double s : row) top = std::max(top, s);
    }
    if (rows <= cols) {
        std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) cost[i][j] = top - scores[i][j];
        return min_cost_assignment(cost);
    }
    std::vector<std::vector<double>> cost(cols, std::vector<double>(rows));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cost[j][i] = top - scores[i][j];
    std::vector<int> col_to_row = min_cost_assignment(cost);
    std::vector<int> row_to_col(rows, -1);
    for (int j = 0; j < cols; ++j)
        if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = j;
    return row_to_col;
}

double accuracy(const std::vector<int>& true_labels, const std::vector<int>& pred_labels) {
    if (true_labels.size() != pred_labels.size())
        throw ValidationError("accuracy: label vectors differ in length");
    if (true_labels.empty()) throw ValidationError("accuracy: empty labels");

    int kt = 0, kp = 0;
    std::vector<int> t = dense_relabel(true_labels, kt);
    std::vector<int> q = dense_relabel(pred_labels, kp);
    std::vector<std::vector<double>> counts(kt, std::vector<double>(kp, 0.0));
    for (std::size_t i = 0; i < t.size(); ++i) counts[t[i]][q[i]] += 1.0;

    std::vector<int> matched = max_assignment(counts);
    double agree = 0.0;
    for (int i = 0; i < kt; ++i)
        if (matched[i] >= 0) agree += counts[i][matched[i]];
    return agree / static_cast<double>(t.size());
}

double ari(const std::vector<int>& true_labels, const std::vector<int>& pred_labels) {
    if (true_labels.size() != pred_labels.size())
        throw ValidationError("ari: label vectors differ in length");
    const std::size_t n = true_labels.size();
    if (n < 2) throw ValidationError("ari: need at least two observations");

    int kt = 0, kp = 0;
    std::vector<int> t = dense_relabel(true_labels, kt);
    std::vector<int> q = dense_relabel(pred_labels, kp);
    std::vector<std::vector<long long>> counts(kt, std::vector<long long>(kp, 0));
    std::vector<long long> row(kt, 0), col(kp, 0);
    for (std::size_t i = 0; i < n; ++i) {
        counts[t[i]][q[i]] += 1;
        row[t[i]] += 1;
        col[q[i]] += 1;
    }

    auto choose2 = [](long long x) { return x * (x - 1) / 2; };
    long long sum_ij = 0, sum_a = 0, sum_b = 0;
    for (int i = 0; i < kt; ++i)
        for (int j = 0; j < kp; ++j) sum_ij += choose2(counts[i][j]);
    for (int i = 0; i < kt; ++i) sum_a += choose2(row[i]);
    for (int j = 0; j < kp; ++j) sum_b += choose2(col[j]);
    const long long total = choose2(static_cast<long long>(n));

    // Integer numerator/denominator keep small instances exact.
    const __int128 num = static_cast<__int128>(total) * sum_ij * 2 -
                         static_cast<__int128>(sum_a) * sum_b * 2;
    const __int128 den = static_cast<__int128>(total) * (sum_a + sum_b) -
                         static_cast<__int128>(sum_a) * sum_b * 2;
    if (den == 0) return 1.0;  // both partitions are all-singletons or one block
    return static_cast<double>(num) / static_cast<double>(den);
}

std::pair<double, double> monte_carlo(const std::vector<double>& scores) {
    if (scores.size() < 2) throw ValidationError("monte_carlo: need at least two runs");
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    return {mean, std::sqrt(ss / static_cast<double>(scores.size() - 1))};
}

}  // namespace psc

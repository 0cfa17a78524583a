#include "psc/kmeans.hpp"

#include <limits>
#include <numeric>
#include <vector>

#include "psc/errors.hpp"
#include "psc/rng.hpp"

namespace psc {

namespace {

double assign_to_centroids(const Matrix& data, const Matrix& centroids, std::vector<int>& labels) {
    const Eigen::Index n = data.rows();
    const int k = static_cast<int>(centroids.rows());
    double wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (data.row(i) - centroids.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double d = (data.row(i) - centroids.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best + 1;
        wcss += best_d;
    }
    return wcss;
}

}  // namespace

Partition kmeans_baseline(const Matrix& data, int k, int restarts, std::uint64_t seed,
                          int max_iter) {
    check_data_matrix(data);
    const Eigen::Index n = data.rows();
    if (k < 1 || k > n) throw ValidationError("kmeans: k must be in 1..N");
    if (restarts < 1) throw ValidationError("kmeans: restarts must be positive");

    std::vector<int> best_labels;
    double best_wcss = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < restarts; ++restart) {
        Rng rng(seed + static_cast<std::uint64_t>(restart));
        // Initial centroids: k distinct rows.
        std::vector<Eigen::Index> pool(n);
        std::iota(pool.begin(), pool.end(), Eigen::Index{0});
        for (int i = 0; i < k; ++i) {
            const Eigen::Index j =
                i + static_cast<Eigen::Index>(rng.integer(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        Matrix centroids(k, data.cols());
        for (int c = 0; c < k; ++c) centroids.row(c) = data.row(pool[c]);

        std::vector<int> labels(n, 1);
        double wcss = assign_to_centroids(data, centroids, labels);
        for (int iter = 0; iter < max_iter; ++iter) {
            // Means per cluster.
            Matrix sums = Matrix::Zero(k, data.cols());
            std::vector<int> counts(k, 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(labels[i] - 1) += data.row(i);
                counts[labels[i] - 1] += 1;
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) {
                    centroids.row(c) = sums.row(c) / counts[c];
                } else {
                    // Reseed an empty cluster with the farthest point.
                    Eigen::Index far = 0;
                    double far_d = -1.0;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const double d =
                            (data.row(i) - centroids.row(labels[i] - 1)).squaredNorm();
                        if (d > far_d) {
                            far_d = d;
                            far = i;
                        }
                    }
                    centroids.row(c) = data.row(far);
                }
            }
            std::vector<int> next(n);
            const double next_wcss = assign_to_centroids(data, centroids, next);
            const bool unchanged = next == labels;
            labels = std::move(next);
            wcss = next_wcss;
            if (unchanged) break;
        }
        if (wcss < best_wcss) {
            best_wcss = wcss;
            best_labels = labels;
        }
    }
    return make_partition(std::move(best_labels), k);
}

}  // namespace psc

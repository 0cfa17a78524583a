#pragma once

#include <cstdint>

#include "psc/cluster.hpp"

namespace psc {

/// Plain Lloyd K-means benchmark: Euclidean distance, multi-restart with the
/// lowest within-cluster sum of squares winning, deterministic per seed.
/// Empty clusters are reseeded with the point farthest from its centroid.
Partition kmeans_baseline(const Matrix& data, int k, int restarts, std::uint64_t seed,
                          int max_iter = 200);

}  // namespace psc

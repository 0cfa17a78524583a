#pragma once

#include <string>
#include <vector>

#include "psc/pca.hpp"
#include "psc/rng.hpp"

namespace psc {

/// The simulation scenarios: (a) two lines; (b) a line and a plane; (c) two
/// planes; (d) a line, a plane and a sphere surface; (e) a 5-D hyperplane, a
/// 4-D hypersphere surface and two lines in 200 dimensions. The sparse_*
/// variants embed the same shapes through loadings with a fixed number of
/// nonzero coefficients.
enum class Scenario {
    a, b, c, d, e,
    sparse_a, sparse_b, sparse_c, sparse_d, sparse_e,
};

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);
bool is_sparse_scenario(Scenario scenario);

/// Subspace dimensions per cluster for a scenario.
std::vector<int> scenario_ranks(Scenario scenario);

/// Ambient dimension default: 3 for scenarios a-d, 200 for e and the sparse
/// variants.
int scenario_default_p(Scenario scenario);

struct ScenarioSpec {
    Scenario scenario = Scenario::a;
    int points_per_cluster = 100;
    int p = 0;  // 0 means the scenario default
    double noise_sd = 0.0;
    int nonzeros = 10;  // sparse variants only
    std::uint64_t seed = 0;
};

struct SyntheticDataset {
    Matrix data;                                  // N x P
    std::vector<int> labels;                      // 1..K in generation order
    std::vector<Matrix> bases;                    // per cluster, P x R_k orthonormal
    std::vector<std::vector<std::vector<int>>> supports;  // cluster -> component -> indices
    std::vector<int> ranks;
};

/// Orthonormalised standard-normal matrix, deterministic per rng state.
Matrix random_orthonormal_basis(int p, int r, Rng& rng);

/// Draws a dataset: per cluster, uniform [-1,1]^R coordinates (unit-sphere
/// coordinates for sphere clusters) pushed through an orthonormal basis, plus
/// isotropic Gaussian noise in all P coordinates.
SyntheticDataset generate(const ScenarioSpec& spec);

}  // namespace psc

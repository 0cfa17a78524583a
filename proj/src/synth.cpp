#include "psc/synth.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "psc/errors.hpp"

namespace psc {

namespace {

// Index of the sphere-surface cluster within a scenario, or -1.
int sphere_cluster(Scenario scenario) {
    switch (scenario) {
        case Scenario::d:
        case Scenario::sparse_d:
            return 2;
        case Scenario::e:
        case Scenario::sparse_e:
            return 1;
        default:
            return -1;
    }
}

// Orthonormal columns with disjoint random supports of the requested size;
// disjointness keeps sparse columns exactly orthogonal.
Matrix sparse_basis(int p, int r, int nonzeros, Rng& rng,
                    std::vector<std::vector<int>>& supports_out) {
    if (nonzeros * r > p)
        throw ValidationError("sparse basis needs nonzeros * rank <= p");
    std::vector<int> pool(p);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates: the first nonzeros*r entries become the supports.
    for (int i = 0; i < nonzeros * r; ++i) {
        const int j = i + static_cast<int>(rng.integer(static_cast<std::uint64_t>(p - i)));
        std::swap(pool[i], pool[j]);
    }
    Matrix basis = Matrix::Zero(p, r);
    supports_out.assign(r, {});
    // Equal-magnitude random-sign coefficients: every selected variable
    // carries the same signal, so support recovery is well posed.
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(nonzeros));
    for (int c = 0; c < r; ++c) {
        auto& support = supports_out[c];
        support.assign(pool.begin() + c * nonzeros, pool.begin() + (c + 1) * nonzeros);
        std::sort(support.begin(), support.end());
        for (int j = 0; j < nonzeros; ++j)
            basis(support[j], c) = rng.uniform() < 0.5 ? -magnitude : magnitude;
    }
    return basis;
}

}  // namespace

Scenario scenario_from_string(const std::string& name) {
    if (name == "a") return Scenario::a;
    if (name == "b") return Scenario::b;
    if (name == "c") return Scenario::c;
    if (name == "d") return Scenario::d;
    if (name == "e") return Scenario::e;
    if (name == "sparse_a" || name == "sparse-a") return Scenario::sparse_a;
    if (name == "sparse_b" || name == "sparse-b") return Scenario::sparse_b;
    if (name == "sparse_c" || name == "sparse-c") return Scenario::sparse_c;
    if (name == "sparse_d" || name == "sparse-d") return Scenario::sparse_d;
    if (name == "sparse_e" || name == "sparse-e") return Scenario::sparse_e;
    throw ValidationError("unknown scenario '" + name + "'");
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::a: return "a";
        case Scenario::b: return "b";
        case Scenario::c: return "c";
        case Scenario::d: return "d";
        case Scenario::e: return "e";
        case Scenario::sparse_a: return "sparse_a";
        case Scenario::sparse_b: return "sparse_b";
        case Scenario::sparse_c: return "sparse_c";
        case Scenario::sparse_d: return "sparse_d";
        case Scenario::sparse_e: return "sparse_e";
    }
    return "?";
}

bool is_sparse_scenario(Scenario scenario) {
    switch (scenario) {
        case Scenario::sparse_a:
        case Scenario::sparse_b:
        case Scenario::sparse_c:
        case Scenario::sparse_d:
        case Scenario::sparse_e:
            return true;
        default:
            return false;
    }
}

std::vector<int> scenario_ranks(Scenario scenario) {
    switch (scenario) {
        case Scenario::a:
        case Scenario::sparse_a:
            return {1, 1};
        case Scenario::b:
        case Scenario::sparse_b:
            return {1, 2};
        case Scenario::c:
        case Scenario::sparse_c:
            return {2, 2};
        case Scenario::d:
        case Scenario::sparse_d:
            return {1, 2, 3};
        case Scenario::e:
        case Scenario::sparse_e:
            return {5, 4, 1, 1};
    }
    return {};
}

int scenario_default_p(Scenario scenario) {
    if (is_sparse_scenario(scenario)) return 200;
    return scenario == Scenario::e ? 200 : 3;
}

Matrix random_orthonormal_basis(int p, int r, Rng& rng) {
    if (p < 1 || r < 1 || r > p) throw ValidationError("random_orthonormal_basis: bad shape");
    Matrix g(p, r);
    for (int attempt = 0; attempt < 16; ++attempt) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < r; ++j) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ() * Matrix::Identity(p, r);
        if (((q.transpose() * q) - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10)
            return q;
    }
    throw NumericalError("random_orthonormal_basis: orthonormalisation failed");
}

SyntheticDataset generate(const ScenarioSpec& spec) {
    const std::vector<int> ranks = scenario_ranks(spec.scenario);
    const int k = static_cast<int>(ranks.size());
    const int p = spec.p > 0 ? spec.p : scenario_default_p(spec.scenario);
    const int per_cluster = spec.points_per_cluster;
    const bool sparse = is_sparse_scenario(spec.scenario);
    const int sphere = sphere_cluster(spec.scenario);

    if (per_cluster < 1) throw ValidationError("points_per_cluster must be positive");
    if (spec.noise_sd < 0.0) throw ValidationError("noise_sd must be nonnegative");
    const int max_rank = *std::max_element(ranks.begin(), ranks.end());
    if (p < max_rank) throw ValidationError("ambient dimension too small for scenario");
    if (sparse && (spec.nonzeros < 1 || spec.nonzeros > p))
        throw ValidationError("nonzeros out of range");

    Rng rng(spec.seed);
    SyntheticDataset out;
    out.ranks = ranks;
    out.data.resize(static_cast<Eigen::Index>(k) * per_cluster, p);
    out.labels.resize(static_cast<std::size_t>(k) * per_cluster);
    out.supports.resize(k);

    Eigen::Index row = 0;
    for (int c = 0; c < k; ++c) {
        const int r = ranks[c];
        Matrix basis;
        if (sparse) {
            basis = sparse_basis(p, r, spec.nonzeros, rng, out.supports[c]);
        } else {
            basis = random_orthonormal_basis(p, r, rng);
        }
        out.bases.push_back(basis);

        for (int i = 0; i < per_cluster; ++i, ++row) {
            Vector coords(r);
            if (c == sphere) {
                double norm2 = 0.0;
                do {
                    norm2 = 0.0;
                    for (int j = 0; j < r; ++j) {
                        coords[j] = rng.normal();
                        norm2 += coords[j] * coords[j];
                    }
                } while (norm2 == 0.0);
                coords /= std::sqrt(norm2);
            } else {
                for (int j = 0; j < r; ++j) coords[j] = rng.uniform(-1.0, 1.0);
            }
            out.data.row(row) = (basis * coords).transpose();
            if (spec.noise_sd > 0.0) {
                for (int j = 0; j < p; ++j)
                    out.data(row, j) += rng.normal(0.0, spec.noise_sd);
            }
            out.labels[static_cast<std::size_t>(row)] = c + 1;
        }
    }
    return out;
}

}  // namespace psc

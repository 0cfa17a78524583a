#include "psc/pca.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

#include "psc/errors.hpp"

namespace psc {

namespace {

constexpr int kDenseSvdLimit = 48;  // below this the dense path is cheap enough
constexpr int kLanczosCap = 180;    // Krylov dimension bound; flat spectra stop here
constexpr double kRitzResidualTol = 1e-10;

void fix_loading_signs(Matrix& loadings, Matrix* scores) {
    for (int c = 0; c < loadings.cols(); ++c) {
        int arg = 0;
        double best = -1.0;
        for (int j = 0; j < loadings.rows(); ++j) {
            const double a = std::abs(loadings(j, c));
            if (a > best) {
                best = a;
                arg = j;
            }
        }
        if (loadings(arg, c) < 0.0) {
            loadings.col(c) = -loadings.col(c);
            if (scores) scores->col(c) = -scores->col(c);
        }
    }
}

SvdTriplets dense_svd(const Matrix& data, int r) {
    Eigen::BDCSVD<Matrix> svd(data, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdTriplets out;
    out.left = svd.matrixU().leftCols(r);
    out.singular = svd.singularValues().head(r);
    out.right = svd.matrixV().leftCols(r);
    return out;
}

// Lanczos with full reorthogonalisation on the smaller Gram side of `data`.
// A deterministic start vector keeps results reproducible; clustered spectra
// stop at the Krylov cap and keep the best Ritz basis, and any numerical
// breakdown falls back to the dense path.
SvdTriplets iterative_svd(const Matrix& data, int r) {
    const Eigen::Index n = data.rows(), p = data.cols();
    const bool rows_small = n <= p;
    const Eigen::Index m = rows_small ? n : p;

    const double scale2 = data.squaredNorm();
    if (!(scale2 > 0.0)) {
        SvdTriplets out;
        out.left = Matrix::Identity(n, r);
        out.singular = Vector::Zero(r);
        out.right = Matrix::Identity(p, r);
        return out;
    }

    auto apply = [&](const Vector& q) -> Vector {
        if (rows_small) return data * (data.transpose() * q);
        return data.transpose() * (data * q);
    };

    const int cap = static_cast<int>(std::min<Eigen::Index>(m, kLanczosCap));
    Matrix basis(m, cap);  // Lanczos vectors, columns
    Vector alpha(cap), beta(cap);

    std::mt19937_64 engine(0x9e3779b97f4a7c15ULL);
    {
        Vector v0(m);
        for (Eigen::Index i = 0; i < m; ++i)
            v0[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
        basis.col(0) = v0 / v0.norm();
    }

    int built = 0;
    const int check_every = 8;
    int converged_rank = 0;
    Vector ritz_values;
    Matrix ritz_coeffs;

    auto extract = [&](int j) {
        // Tridiagonal Rayleigh-Ritz on the first j Lanczos vectors.
        Matrix t = Matrix::Zero(j, j);
        for (int i = 0; i < j; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < j) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(t);
        ritz_values.resize(r);
        ritz_coeffs.resize(j, r);
        converged_rank = 0;
        for (int c = 0; c < r && c < j; ++c) {
            ritz_values[c] = std::max(0.0, es.eigenvalues()[j - 1 - c]);
            ritz_coeffs.col(c) = es.eigenvectors().col(j - 1 - c);
            const double resid = (j < static_cast<int>(m))
                                     ? std::abs(beta[j - 1] * ritz_coeffs(j - 1, c))
                                     : 0.0;
            if (resid <= kRitzResidualTol * scale2 && converged_rank == c) converged_rank = c + 1;
        }
    };

    Vector w(m);
    for (int j = 0; j < cap; ++j) {
        w = apply(basis.col(j));
        alpha[j] = basis.col(j).dot(w);
        w -= alpha[j] * basis.col(j);
        if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
        // Full reorthogonalisation, twice for safety.
        for (int pass = 0; pass < 2; ++pass)
            w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
        beta[j] = w.norm();
        built = j + 1;
        if (built >= r && (built % check_every == 0 || built == cap || beta[j] <= 1e-14 * scale2)) {
            extract(built);
            if (converged_rank >= r) break;
        }
        if (beta[j] <= 1e-14 * scale2) {
            // Invariant subspace; restart direction from the deterministic stream.
            Vector fresh(m);
            for (Eigen::Index i = 0; i < m; ++i)
                fresh[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
            for (int pass = 0; pass < 2; ++pass)
                fresh -= basis.leftCols(built) * (basis.leftCols(built).transpose() * fresh);
            const double fn = fresh.norm();
            if (fn <= 1e-300) break;
            if (j + 1 < cap) basis.col(j + 1) = fresh / fn;
            beta[j] = 0.0;
        } else if (j + 1 < cap) {
            basis.col(j + 1) = w / beta[j];
        }
    }
    if (built < r) return dense_svd(data, r);
    if (ritz_values.size() != r || built % check_every != 0) extract(built);

    Matrix small_basis = basis.leftCols(built) * ritz_coeffs;  // m x r Ritz vectors
    SvdTriplets out;
    out.singular.resize(r);
    if (rows_small) {
        out.left = small_basis;
        out.right.resize(p, r);
        Matrix prod = data.transpose() * small_basis;
        for (int c = 0; c < r; ++c) {
            const double s = prod.col(c).norm();
            out.singular[c] = s;
            out.right.col(c) = s > 0.0 ? Vector(prod.col(c) / s) : Vector(Vector::Unit(p, c % p));
        }
    } else {
        out.right = small_basis;
        out.left.resize(n, r);
        Matrix prod = data * small_basis;
        for (int c = 0; c < r; ++c) {
            const double s = prod.col(c).norm();
            out.singular[c] = s;
            out.left.col(c) = s > 0.0 ? Vector(prod.col(c) / s) : Vector(Vector::Unit(n, c % n));
        }
    }
    if (!out.singular.allFinite() || !out.left.allFinite() || !out.right.allFinite())
        return dense_svd(data, r);
    for (int c = 1; c < r; ++c) {
        if (out.singular[c] > out.singular[c - 1]) {
            std::swap(out.singular[c], out.singular[c - 1]);
            out.left.col(c).swap(out.left.col(c - 1));
            out.right.col(c).swap(out.right.col(c - 1));
            c = std::max(0, c - 2);
        }
    }
    return out;
}

}  // namespace

void check_data_matrix(const Matrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw ValidationError("data matrix must be nonempty");
    if (!m.allFinite()) throw ValidationError("data matrix contains non-finite entries");
}

std::pair<Matrix, RowVector> center(const Matrix& data) {
    check_data_matrix(data);
    RowVector mean = data.colwise().mean();
    return {data.rowwise() - mean, mean};
}

SvdTriplets leading_svd(const Matrix& data, int r) {
    check_data_matrix(data);
    const int m = static_cast<int>(std::min(data.rows(), data.cols()));
    if (r < 1 || r > m) throw RankError("leading_svd: rank out of range");
    if (m <= kDenseSvdLimit || 2 * r >= m) return dense_svd(data, r);
    return iterative_svd(data, r);
}

SubspaceModel fit_pca(const Matrix& data, int r) {
    check_data_matrix(data);
    if (data.rows() < 2) throw RankError("fit_pca: need at least two observations");
    const int rmax = static_cast<int>(std::min(data.rows() - 1, data.cols()));
    if (r < 1 || r > rmax) throw RankError("fit_pca: rank out of range");

    auto [centered, mean] = center(data);
    SvdTriplets svd = leading_svd(centered, r);

    SubspaceModel model;
    model.mean = mean;
    model.loadings = svd.right;
    model.rank = r;
    model.scores = centered * model.loadings;
    fix_loading_signs(model.loadings, &model.scores);
    model.score_norms = model.scores.colwise().squaredNorm();
    return model;
}

double soft_threshold(double a, double gamma) {
    const double mag = std::abs(a) - gamma;
    if (mag <= 0.0) return 0.0;
    return a > 0.0 ? mag : -mag;
}

namespace {

GammaForCardinality gamma_from_magnitudes(const Vector& w, int target_nonzeros) {
    const int p = static_cast<int>(w.size());
    auto survivors = [&](double g) {
        int c = 0;
        for (int j = 0; j < p; ++j)
            if (w[j] > g) ++c;
        return c;
    };

    if (target_nonzeros == p) return {0.0, survivors(0.0) == p};

    std::vector<double> sorted(w.data(), w.data() + p);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double candidate = sorted[target_nonzeros];
    if (survivors(candidate) == target_nonzeros) return {candidate, true};

    // Ties straddle the cut. Keep the component alive: choose the largest
    // penalty that still lets at least the requested number survive.
    double best = 0.0;
    bool found = false;
    for (double g : sorted) {
        if (survivors(g) >= target_nonzeros) {
            best = std::max(best, g);
            found = true;
        }
    }
    return {found ? best : 0.0, false};
}

}  // namespace

GammaForCardinality gamma_for_cardinality(const Matrix& data, const Vector& component_u,
                                          int target_nonzeros) {
    check_data_matrix(data);
    if (component_u.size() != data.rows())
        throw ValidationError("gamma_for_cardinality: component length mismatch");
    const int p = static_cast<int>(data.cols());
    if (target_nonzeros < 1 || target_nonzeros > p)
        throw ValidationError("gamma_for_cardinality: target out of range");
    return gamma_from_magnitudes((data.transpose() * component_u).cwiseAbs(), target_nonzeros);
}

namespace {

SubspaceModel sparse_fit_impl(const Matrix& data, int r, std::optional<double> fixed_gamma,
                              int target_nonzeros, double tol, int max_iter) {
    check_data_matrix(data);
    if (data.rows() < 2) throw RankError("fit_sparse_pca: need at least two observations");
    const int rmax = static_cast<int>(std::min(data.rows() - 1, data.cols()));
    if (r < 1 || r > rmax) throw RankError("fit_sparse_pca: rank out of range");
    if (fixed_gamma && *fixed_gamma < 0.0)
        throw ValidationError("fit_sparse_pca: gamma must be nonnegative");
    if (tol <= 0.0 || max_iter < 1) throw ValidationError("fit_sparse_pca: bad tol/max_iter");

    auto [centered, mean] = center(data);
    Matrix work = centered;
    const Eigen::Index p = data.cols();

    SubspaceModel model;
    model.mean = mean;
    model.loadings.resize(p, r);
    model.rank = r;
    model.sparse = true;

    for (int comp = 0; comp < r; ++comp) {
        SvdTriplets svd = leading_svd(work, 1);
        Vector u = svd.left.col(0);
        Vector v = svd.singular[0] * svd.right.col(0);

        double gamma = fixed_gamma ? *fixed_gamma : 0.0;

        for (int it = 0; it < max_iter; ++it) {
            Vector w = work.transpose() * u;
            if (!fixed_gamma) {
                // Fixed-cardinality mode: the threshold tracks the current
                // order statistic. A penalty frozen at the first iterate
                // erodes the support as ||X^T u|| shrinks below sigma_1.
                gamma = gamma_from_magnitudes(w.cwiseAbs(), target_nonzeros).gamma;
            }
            if (comp == 0 && it == 0) model.gamma = gamma;
            Vector v_new(p);
            for (Eigen::Index j = 0; j < p; ++j) v_new[j] = soft_threshold(w[j], gamma);
            if (v_new.norm() == 0.0)
                throw SparsityError("fit_sparse_pca: penalty removed every coefficient of component " +
                                    std::to_string(comp + 1));
            Vector xv = work * v_new;
            const double xv_norm = xv.norm();
            if (xv_norm == 0.0)
                throw SparsityError("fit_sparse_pca: degenerate update in component " +
                                    std::to_string(comp + 1));
            u = xv / xv_norm;
            const double delta = (v_new - v).norm();
            v = v_new;
            if (delta < tol) break;
        }

        work.noalias() -= u * v.transpose();

        if (!fixed_gamma) {
            // The penalty was frozen at the first iterate, so the converged
            // support can drift past the target; trim back the smallest
            // coefficients.
            int nnz = 0;
            for (Eigen::Index j = 0; j < p; ++j)
                if (v[j] != 0.0) ++nnz;
            if (nnz > target_nonzeros) {
                std::vector<int> idx(p);
                for (Eigen::Index j = 0; j < p; ++j) idx[j] = static_cast<int>(j);
                std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
                    return std::abs(v[a]) > std::abs(v[b]);
                });
                for (int j = target_nonzeros; j < p; ++j) v[idx[j]] = 0.0;
            }
        }

        const double vnorm = v.norm();
        if (vnorm == 0.0)
            throw SparsityError("fit_sparse_pca: empty loading in component " +
                                std::to_string(comp + 1));
        model.loadings.col(comp) = v / vnorm;
    }

    fix_loading_signs(model.loadings, nullptr);
    model.scores = centered * model.loadings;
    model.score_norms = model.scores.colwise().squaredNorm();
    return model;
}

}  // namespace

SubspaceModel fit_sparse_pca(const Matrix& data, int r, double gamma, double tol, int max_iter) {
    return sparse_fit_impl(data, r, gamma, 0, tol, max_iter);
}

SubspaceModel fit_sparse_pca_target(const Matrix& data, int r, int target_nonzeros, double tol,
                                    int max_iter) {
    if (target_nonzeros < 1 || target_nonzeros > data.cols())
        throw ValidationError("fit_sparse_pca: target variable count out of range");
    return sparse_fit_impl(data, r, std::nullopt, target_nonzeros, tol, max_iter);
}

double reconstruction_error(const Matrix& data, const SubspaceModel& model) {
    check_data_matrix(data);
    if (data.cols() != model.loadings.rows())
        throw ValidationError("reconstruction_error: dimension mismatch");
    Matrix centered = data.rowwise() - model.mean;
    Matrix residual = centered - (centered * model.loadings) * model.loadings.transpose();
    return residual.squaredNorm() / static_cast<double>(data.rows());
}

}  // namespace psc

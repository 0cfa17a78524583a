#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "psc/errors.hpp"
#include "psc/pca.hpp"
#include "psc/rng.hpp"
#include "test_helpers.hpp"

using namespace psc;
using psc::test::gaussian_matrix;
using psc::test::random_unit_columns;

TEST_CASE("center removes column means") {
    Matrix x(2, 2);
    x << 1, 2, 3, 4;
    auto [c, mean] = center(x);
    CHECK(mean(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(mean(1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(c(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(c(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.colwise().mean().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("center of all-zero matrix is a no-op") {
    Matrix x = Matrix::Zero(3, 2);
    auto [c, mean] = center(x);
    CHECK(c.cwiseAbs().maxCoeff() == 0.0);
    CHECK(mean.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("center of a single row zeroes it") {
    Matrix x(1, 2);
    x << 5, 7;
    auto [c, mean] = center(x);
    CHECK(c.cwiseAbs().maxCoeff() == 0.0);
    CHECK(mean(0) == 5.0);
    CHECK(mean(1) == 7.0);
}

TEST_CASE("leading_svd of a diagonal matrix") {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 0) = 3.0;
    x(1, 1) = 1.0;
    SvdTriplets svd = leading_svd(x, 1);
    CHECK(svd.singular[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(svd.right(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(svd.right(1, 0)) < 1e-12);
}

TEST_CASE("leading_svd reconstructs a rank-one matrix exactly") {
    Rng rng(3);
    Vector a(7), b(5);
    for (int i = 0; i < 7; ++i) a[i] = rng.normal();
    for (int j = 0; j < 5; ++j) b[j] = rng.normal();
    Matrix x = a * b.transpose();
    SvdTriplets svd = leading_svd(x, 1);
    Matrix rec = svd.left * svd.singular.asDiagonal() * svd.right.transpose();
    CHECK((x - rec).norm() < 1e-8);
}

TEST_CASE("leading_svd singular values match an independent eigendecomposition") {
    Matrix x = gaussian_matrix(20, 5, 11);
    SvdTriplets svd = leading_svd(x, 3);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.transpose() * x);
    for (int c = 0; c < 3; ++c) {
        const double oracle = std::sqrt(std::max(0.0, es.eigenvalues()[4 - c]));
        CHECK(svd.singular[c] == doctest::Approx(oracle).epsilon(1e-8));
    }
    for (int c = 1; c < 3; ++c) CHECK(svd.singular[c] <= svd.singular[c - 1]);
}

TEST_CASE("leading_svd iterative path matches the dense decomposition") {
    // Large enough to take the Krylov route.
    Matrix x = gaussian_matrix(90, 70, 17);
    SvdTriplets svd = leading_svd(x, 3);
    Eigen::BDCSVD<Matrix> dense(x, Eigen::ComputeThinV);
    for (int c = 0; c < 3; ++c)
        CHECK(svd.singular[c] == doctest::Approx(dense.singularValues()[c]).epsilon(1e-8));
    CHECK((svd.left.transpose() * svd.left - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-8);
    CHECK((svd.right.transpose() * svd.right - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-8);
}

TEST_CASE("leading_svd validates its inputs") {
    Matrix x = gaussian_matrix(4, 3, 1);
    CHECK_THROWS_AS(leading_svd(x, 0), RankError);
    CHECK_THROWS_AS(leading_svd(x, 4), RankError);
    x(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(leading_svd(x, 1), ValidationError);
}

TEST_CASE("fit_pca recovers an exact line through the origin") {
    Rng rng(5);
    Vector dir(3);
    for (int j = 0; j < 3; ++j) dir[j] = rng.normal();
    dir.normalize();
    Matrix x(40, 3);
    for (int i = 0; i < 40; ++i) x.row(i) = rng.uniform(-2.0, 2.0) * dir.transpose();
    SubspaceModel m = fit_pca(x, 1);
    CHECK(reconstruction_error(x, m) < 1e-10);
}

TEST_CASE("fit_pca on one noiseless plane is exact at rank two") {
    Rng rng(8);
    Matrix basis = random_unit_columns(3, 2, rng);
    Matrix x(60, 3);
    for (int i = 0; i < 60; ++i) {
        Vector coords(2);
        coords << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        x.row(i) = (basis * coords).transpose();
    }
    SubspaceModel m = fit_pca(x, 2);
    CHECK(reconstruction_error(x, m) < 1e-10);
}

TEST_CASE("fit_pca residual equals the trailing spectrum") {
    Matrix x = gaussian_matrix(50, 10, 42);
    SubspaceModel m = fit_pca(x, 2);
    auto [xc, mean] = center(x);
    Eigen::BDCSVD<Matrix> svd(xc);
    double tail = 0.0;
    for (int j = 2; j < 10; ++j) tail += svd.singularValues()[j] * svd.singularValues()[j];
    CHECK(reconstruction_error(x, m) == doctest::Approx(tail / 50.0).epsilon(1e-8));
}

TEST_CASE("fit_pca loadings are orthonormal with positive peak entries") {
    Matrix x = gaussian_matrix(30, 8, 2);
    SubspaceModel m = fit_pca(x, 3);
    Matrix vtv = m.loadings.transpose() * m.loadings;
    CHECK((vtv - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
    for (int c = 0; c < 3; ++c) {
        Eigen::Index arg = 0;
        m.loadings.col(c).cwiseAbs().maxCoeff(&arg);
        CHECK(m.loadings(arg, c) > 0.0);
    }
    for (int c = 0; c < 3; ++c)
        CHECK(m.score_norms[c] ==
              doctest::Approx(m.scores.col(c).squaredNorm()).epsilon(1e-10));
}

TEST_CASE("fit_pca rejects impossible ranks") {
    Matrix x = gaussian_matrix(4, 6, 3);
    CHECK_THROWS_AS(fit_pca(x, 4), RankError);  // centering consumes one d.o.f.
    CHECK_THROWS_AS(fit_pca(x, 0), RankError);
    Matrix one_row = gaussian_matrix(1, 6, 3);
    CHECK_THROWS_AS(fit_pca(one_row, 1), RankError);
}

TEST_CASE("fitted loadings beat random orthonormal bases") {
    Matrix x = gaussian_matrix(40, 6, 77);
    SubspaceModel m = fit_pca(x, 2);
    const double fitted = reconstruction_error(x, m);
    Rng rng(78);
    for (int t = 0; t < 100; ++t) {
        SubspaceModel probe = m;
        probe.loadings = random_unit_columns(6, 2, rng);
        CHECK(fitted <= reconstruction_error(x, probe) + 1e-12);
    }
}

TEST_CASE("soft threshold follows its definition") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-2.0, 0.5) == -1.5);
    CHECK(soft_threshold(0.0, 0.0) == 0.0);
}

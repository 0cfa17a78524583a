#include "psc/press.hpp"

#include <cmath>
#include <string>

#include "psc/errors.hpp"

namespace psc {

namespace {

constexpr double kStrictLimit = 1.0 - 1e-12;
constexpr double kClampLimit = 1.0 - 1e-8;

void check_model_data(const Matrix& data, const SubspaceModel& model) {
    check_data_matrix(data);
    if (data.cols() != model.loadings.rows())
        throw ValidationError("model/data dimension mismatch");
    if (model.rank < 1 || model.loadings.cols() != model.rank)
        throw ValidationError("model has no fitted loadings");
    if (model.score_norms.size() != model.rank)
        throw ValidationError("model score norms not populated");
}

double leverage_of(double score, double score_norm, LeveragePolicy policy, Eigen::Index i, int r) {
    if (!(score_norm > 0.0)) {
        if (policy == LeveragePolicy::strict)
            throw DegenerateComponentError("component " + std::to_string(r + 1) +
                                           " has zero score norm");
        return kClampLimit;
    }
    double h = score * score / score_norm;
    if (h >= kStrictLimit) {
        if (policy == LeveragePolicy::strict)
            throw LeverageSingularityError("leverage at point " + std::to_string(i + 1) +
                                           ", component " + std::to_string(r + 1) +
                                           " reached 1");
        h = kClampLimit;
    } else if (policy == LeveragePolicy::clamp && h > kClampLimit) {
        h = kClampLimit;
    }
    return h;
}

}  // namespace

Matrix leverages(const SubspaceModel& model) {
    if (model.scores.rows() < 1 || model.score_norms.size() != model.rank)
        throw ValidationError("model scores not populated");
    const Eigen::Index n = model.scores.rows();
    Matrix h(n, model.rank);
    for (int r = 0; r < model.rank; ++r) {
        const double norm = model.score_norms[r];
        if (!(norm > 0.0))
            throw DegenerateComponentError("component " + std::to_string(r + 1) +
                                           " has zero score norm");
        h.col(r) = model.scores.col(r).array().square() / norm;
    }
    return h;
}

PressReport press_closed_form(const Matrix& data, const SubspaceModel& model,
                              LeveragePolicy policy) {
    check_model_data(data, model);
    const Eigen::Index n = data.rows(), p = data.cols();
    const int rr = model.rank;

    PressReport report;
    report.residuals.assign(rr, Matrix(n, p));
    report.leverages.resize(n, rr);
    report.loo_errors.resize(n, p);

    double total = 0.0;
    RowVector centered(p), loo(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered = data.row(i) - model.mean;
        loo = -(static_cast<double>(rr) - 1.0) * centered;
        for (int r = 0; r < rr; ++r) {
            const double d = centered.dot(model.loadings.col(r));
            const double h = leverage_of(d, model.score_norms[r], policy, i, r);
            report.leverages(i, r) = h;
            RowVector e = centered - d * model.loadings.col(r).transpose();
            report.residuals[r].row(i) = e;
            loo += e / (1.0 - h);
        }
        report.loo_errors.row(i) = loo;
        total += loo.squaredNorm();
    }
    report.press = total / static_cast<double>(n);
    return report;
}

double press_value(const Matrix& data, const SubspaceModel& model, LeveragePolicy policy) {
    check_model_data(data, model);
    const Eigen::Index n = data.rows(), p = data.cols();
    const int rr = model.rank;
    double total = 0.0;
    RowVector centered(p), loo(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered = data.row(i) - model.mean;
        loo = -(static_cast<double>(rr) - 1.0) * centered;
        for (int r = 0; r < rr; ++r) {
            const double d = centered.dot(model.loadings.col(r));
            const double h = leverage_of(d, model.score_norms[r], policy, i, r);
            loo += (centered - d * model.loadings.col(r).transpose()) / (1.0 - h);
        }
        total += loo.squaredNorm();
    }
    return total / static_cast<double>(n);
}

double press_brute_force(const Matrix& data, int r) {
    check_data_matrix(data);
    const Eigen::Index n = data.rows();
    if (n < r + 2) throw RankError("press_brute_force: need at least r + 2 observations");

    Matrix sub(n - 1, data.cols());
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        sub.topRows(i) = data.topRows(i);
        sub.bottomRows(n - 1 - i) = data.bottomRows(n - 1 - i);
        SubspaceModel fit = fit_pca(sub, r);
        RowVector held = data.row(i) - fit.mean;
        RowVector residual = held - (held * fit.loadings) * fit.loadings.transpose();
        total += residual.squaredNorm();
    }
    return total / static_cast<double>(n);
}

std::vector<InfluenceVector> predictive_influence(const Matrix& data, const SubspaceModel& model,
                                                  LeveragePolicy policy) {
    check_model_data(data, model);
    const Eigen::Index n = data.rows(), p = data.cols();
    const int rr = model.rank;

    std::vector<InfluenceVector> out(n);
    RowVector centered(p), loo(p), pi(p);
    Vector weights(rr);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered = data.row(i) - model.mean;
        loo = -(static_cast<double>(rr) - 1.0) * centered;
        for (int r = 0; r < rr; ++r) {
            const double d = centered.dot(model.loadings.col(r));
            const double h = leverage_of(d, model.score_norms[r], policy, i, r);
            weights[r] = 1.0 / (1.0 - h);
            loo += (centered - d * model.loadings.col(r).transpose()) * weights[r];
        }
        pi = -(static_cast<double>(rr) - 1.0) * loo;
        for (int r = 0; r < rr; ++r) {
            const double along = loo.dot(model.loadings.col(r));
            pi += (loo - along * model.loadings.col(r).transpose()) * weights[r];
        }
        out[i].values = pi;
        out[i].magnitude = pi.squaredNorm();
    }
    return out;
}

Vector influence_magnitudes(const Matrix& data, const SubspaceModel& model,
                            LeveragePolicy policy) {
    check_model_data(data, model);
    const Eigen::Index n = data.rows(), p = data.cols();
    const int rr = model.rank;
    Vector mags(n);
    RowVector centered(p), loo(p), pi(p);
    Vector weights(rr);
    for (Eigen::Index i = 0; i < n; ++i) {
        centered = data.row(i) - model.mean;
        loo = -(static_cast<double>(rr) - 1.0) * centered;
        for (int r = 0; r < rr; ++r) {
            const double d = centered.dot(model.loadings.col(r));
            const double h = leverage_of(d, model.score_norms[r], policy, i, r);
            weights[r] = 1.0 / (1.0 - h);
            loo += (centered - d * model.loadings.col(r).transpose()) * weights[r];
        }
        pi = -(static_cast<double>(rr) - 1.0) * loo;
        for (int r = 0; r < rr; ++r) {
            const double along = loo.dot(model.loadings.col(r));
            pi += (loo - along * model.loadings.col(r).transpose()) * weights[r];
        }
        mags[i] = pi.squaredNorm();
    }
    return mags;
}

Matrix weighted_eigen_operator(const Matrix& data, const SubspaceModel& model) {
    check_model_data(data, model);
    if (model.rank != 1)
        throw ValidationError("weighted_eigen_operator is defined for rank-1 models");
    const Eigen::Index n = data.rows(), p = data.cols();
    Matrix centered = data.rowwise() - model.mean;
    Matrix weighted(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = centered.row(i).dot(model.loadings.col(0));
        const double h = leverage_of(d, model.score_norms[0], LeveragePolicy::strict, i, 0);
        const double xi = (1.0 - h) * (1.0 - h);  // Xi_i, the operator carries Xi^{-2}
        weighted.row(i) = centered.row(i) / (xi * xi);
    }
    return centered.transpose() * weighted;
}

}  // namespace psc

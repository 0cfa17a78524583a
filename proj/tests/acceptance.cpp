// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line with the measured values. Returns the number of
// failed criteria. Run a subset with --criterion N (repeatable).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "psc/cluster.hpp"
#include "psc/errors.hpp"
#include "psc/kmeans.hpp"
#include "psc/metrics.hpp"
#include "psc/press.hpp"
#include "psc/rng.hpp"
#include "psc/select.hpp"
#include "psc/synth.hpp"

using namespace psc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Rank-one model with ambient noise, the data family used for the oracle
// comparisons: x_i = d_i v^T + eps, d ~ N(0, 10^2), eps ~ N(0, 1).
Matrix pca_model_data(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(p);
    for (int j = 0; j < p; ++j) v[j] = rng.normal();
    v.normalize();
    Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
        const double d = rng.normal(0.0, 10.0);
        for (int j = 0; j < p; ++j) x(i, j) = d * v[j] + rng.normal();
    }
    return x;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_press_oracle() {
    const int p = 500;
    const std::vector<int> ns = {25, 50, 100, 200, 400};
    std::vector<double> medians;
    std::string detail;
    for (int n : ns) {
        std::vector<double> rel;
        for (unsigned seed = 1; seed <= 20; ++seed) {
            Matrix x = pca_model_data(n, p, seed);
            SubspaceModel m = fit_pca(x, 1);
            const double closed = press_value(x, m);
            const double brute = press_brute_force(x, 1);
            rel.push_back(std::abs(closed - brute) / brute);
        }
        medians.push_back(median(rel));
    }
    bool pass = true;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double bound = 5.0 * std::sqrt(std::log(static_cast<double>(ns[i]))) / ns[i];
        if (medians[i] >= bound) pass = false;
        if (i > 0 && medians[i] >= medians[i - 1]) pass = false;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "N=%d med=%.3g bound=%.3g%s", ns[i], medians[i], bound,
                      i + 1 < ns.size() ? "; " : "");
        detail += buf;
    }
    return {pass, detail};
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_speed() {
    Matrix x = pca_model_data(400, 500, 3);
    // Warm cache.
    SubspaceModel warm = fit_pca(x, 1);
    (void)press_value(x, warm);

    auto t0 = std::chrono::steady_clock::now();
    const int closed_reps = 5;
    for (int i = 0; i < closed_reps; ++i) {
        SubspaceModel m = fit_pca(x, 1);
        (void)press_value(x, m);
    }
    const double closed_time = seconds_since(t0) / closed_reps;
    t0 = std::chrono::steady_clock::now();
    (void)press_brute_force(x, 1);
    const double brute_time = seconds_since(t0);

    const double ratio = brute_time / closed_time;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "closed=%.3fs brute=%.3fs ratio=%.0fx (need >= 20x)",
                  closed_time, brute_time, ratio);
    return {ratio >= 20.0, buf};
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_scenarios() {
    struct Row {
        Scenario scenario;
        double target;
        double mean = 0.0;
        int failures = 0;
    };
    std::vector<Row> rows = {{Scenario::a, 0.90},
                             {Scenario::b, 0.95},
                             {Scenario::c, 0.98},
                             {Scenario::d, 0.85}};
    const int reps = 25;
    for (auto& row : rows) {
        double total = 0.0;
        for (unsigned rep = 1; rep <= reps; ++rep) {
            ScenarioSpec spec;
            spec.scenario = row.scenario;
            spec.seed = rep;
            SyntheticDataset ds = generate(spec);
            PscConfig cfg;
            cfg.ranks = scenario_ranks(row.scenario);
            cfg.k = static_cast<int>(cfg.ranks.size());
            cfg.restarts = 25;
            cfg.max_iter = 60;
            cfg.seed = rep;
            try {
                PscResult res = run_psc(ds.data, cfg);
                total += accuracy(ds.labels, res.partition.labels);
            } catch (const NumericalError&) {
                row.failures += 1;  // counts as zero accuracy
            }
        }
        row.mean = total / reps;
    }

    // K-means baseline on scenario (a).
    double km_total = 0.0;
    for (unsigned rep = 1; rep <= reps; ++rep) {
        ScenarioSpec spec;
        spec.scenario = Scenario::a;
        spec.seed = rep;
        SyntheticDataset ds = generate(spec);
        Partition part = kmeans_baseline(ds.data, 2, 25, rep);
        km_total += accuracy(ds.labels, part.labels);
    }
    const double km_mean = km_total / reps;

    bool pass = km_mean <= 0.65;
    std::string detail;
    for (const auto& row : rows) {
        if (row.mean < row.target) pass = false;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%s=%.3f (need >=%.2f)", to_string(row.scenario).c_str(),
                      row.mean, row.target);
        detail += buf;
        if (row.failures > 0)
            detail += " [" + std::to_string(row.failures) + "/25 runs collapsed]";
        detail += "; ";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "kmeans(a)=%.3f (need <=0.65)", km_mean);
    detail += buf;
    return {pass, detail};
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_sparse_scenario() {
    const int reps = 25;
    double sparse_total = 0.0, dense_total = 0.0;
    int sparse_fail = 0, dense_fail = 0;
    for (unsigned rep = 1; rep <= reps; ++rep) {
        ScenarioSpec spec;
        spec.scenario = Scenario::sparse_c;
        spec.noise_sd = std::sqrt(0.5);
        spec.seed = rep;
        SyntheticDataset ds = generate(spec);
        PscConfig cfg;
        cfg.k = 2;
        cfg.ranks = {2, 2};
        cfg.restarts = 10;
        cfg.max_iter = 40;
        cfg.seed = rep;
        cfg.target_nonzeros = {10, 10};
        try {
            PscResult res = run_psc(ds.data, cfg);
            sparse_total += accuracy(ds.labels, res.partition.labels);
        } catch (const NumericalError&) {
            sparse_fail += 1;
        }
        PscConfig dense = cfg;
        dense.target_nonzeros.clear();
        try {
            PscResult res = run_psc(ds.data, dense);
            dense_total += accuracy(ds.labels, res.partition.labels);
        } catch (const NumericalError&) {
            dense_fail += 1;
        }
    }
    const double sparse_mean = sparse_total / reps;
    const double dense_mean = dense_total / reps;
    const bool pass = sparse_mean >= 0.85 && sparse_mean > dense_mean;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "penalised=%.3f (need >=0.85), unpenalised=%.3f (need strictly below), "
                  "failures=%d/%d",
                  sparse_mean, dense_mean, sparse_fail, dense_fail);
    return {pass, buf};
}

// ---------------------------------------------------------------- criterion 5
// The cluster-count experiments run on the high-dimensional sparse variants
// with ten selected variables and a common single-component fit; in three
// ambient dimensions the per-point model choice biases the PRESS downward in
// K and its minimum degenerates to the largest candidate.
Outcome criterion_model_selection() {
    auto sweep_hits = [&](Scenario sc, int reps) {
        int hits = 0;
        for (unsigned rep = 1; rep <= static_cast<unsigned>(reps); ++rep) {
            ScenarioSpec spec;
            spec.scenario = sc;
            spec.noise_sd = 0.4;
            spec.seed = rep;
            SyntheticDataset ds = generate(spec);
            PscConfig base;
            base.ranks = {1};
            base.target_nonzeros = {10};
            base.restarts = 8;
            base.max_iter = 40;
            base.seed = rep * 101;
            SelectionReport rep_out = press_select_k(ds.data, 5, base);
            if (rep_out.chosen_k_press == 2) ++hits;
        }
        return hits;
    };
    const int reps = 25;
    const int hits_b = sweep_hits(Scenario::sparse_b, reps);
    const int hits_a = sweep_hits(Scenario::sparse_a, reps);
    const bool pass = hits_b >= 20 && hits_a >= 18;  // 80% and 70% of 25
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "sparse b: %d/25 picked K=2 (need >=20); sparse a: %d/25 (need >=18)", hits_b,
                  hits_a);
    return {pass, buf};
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_convergence_suite() {
    struct Case {
        Scenario scenario;
        double noise;
        int runs;
    };
    const std::vector<Case> cases = {{Scenario::a, 0.0, 35}, {Scenario::a, 0.1, 35},
                                     {Scenario::b, 0.0, 30}, {Scenario::b, 0.1, 35},
                                     {Scenario::c, 0.0, 30}, {Scenario::c, 0.1, 35}};
    long assign_steps = 0, assign_violations = 0;
    long full_steps = 0, full_violations = 0;
    int runs = 0, nonterminating = 0;
    for (const auto& c : cases) {
        for (int rep = 1; rep <= c.runs; ++rep) {
            ScenarioSpec spec;
            spec.scenario = c.scenario;
            spec.noise_sd = c.noise;
            spec.seed = static_cast<std::uint64_t>(rep) * 977 + c.runs;
            SyntheticDataset ds = generate(spec);
            PscConfig cfg;
            cfg.ranks = scenario_ranks(c.scenario);
            cfg.k = static_cast<int>(cfg.ranks.size());
            cfg.restarts = 3;
            cfg.max_iter = 200;
            cfg.seed = spec.seed;
            PscResult res = run_psc(ds.data, cfg);
            assign_steps += res.assign_steps;
            assign_violations += res.assign_violations;
            full_steps += res.full_steps;
            full_violations += res.full_step_violations;
            if (!res.converged) ++nonterminating;
            ++runs;
        }
    }
    const double full_ok =
        full_steps == 0 ? 1.0 : 1.0 - static_cast<double>(full_violations) / full_steps;
    const bool pass = assign_violations == 0 && full_ok >= 0.99 && nonterminating == 0;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "%d runs: assignment decreases %ld/%ld exactly; full steps monotone %.2f%% "
                  "(need >=99%%); %d runs hit the iteration cap",
                  runs, assign_steps - assign_violations, assign_steps, 100.0 * full_ok,
                  nonterminating);
    return {pass, buf};
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_weighted_operator() {
    int ok = 0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        Matrix x = pca_model_data(30, 6, seed * 7);
        SubspaceModel m = fit_pca(x, 1);
        Matrix op = weighted_eigen_operator(x, m);
        Eigen::SelfAdjointEigenSolver<Matrix> es(op);
        Vector vstar = es.eigenvectors().col(op.cols() - 1);

        Matrix centered = x.rowwise() - m.mean;
        Matrix h = leverages(m);
        auto frozen = [&](const Vector& v) {
            double total = 0.0;
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                RowVector e = centered.row(i) - centered.row(i).dot(v) * v.transpose();
                total += e.squaredNorm() / std::pow(1.0 - h(i, 0), 4.0);
            }
            return total;
        };
        const double at_star = frozen(vstar);
        bool beats_all = true;
        Rng rng(seed * 13 + 1);
        for (int t = 0; t < 100; ++t) {
            Vector probe(x.cols());
            for (Eigen::Index j = 0; j < x.cols(); ++j) probe[j] = rng.normal();
            probe.normalize();
            if (at_star > frozen(probe) + 1e-12) {
                beats_all = false;
                break;
            }
        }
        if (beats_all) ++ok;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "leading eigenvector optimal on %d/20 datasets", ok);
    return {ok == 20, buf};
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_gradient() {
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        Matrix x = pca_model_data(24, 6, seed * 31);
        SubspaceModel m = fit_pca(x, 2);
        auto infl = predictive_influence(x, m);
        PressReport rep = press_closed_form(x, m);
        const double step = 1e-6;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            Vector h = rep.leverages.row(i);
            auto frozen_half = [&](const RowVector& row) {
                RowVector centered = row - m.mean;
                RowVector loo = -(static_cast<double>(m.rank) - 1.0) * centered;
                for (int r = 0; r < m.rank; ++r) {
                    const double d = centered.dot(m.loadings.col(r));
                    loo += (centered - d * m.loadings.col(r).transpose()) / (1.0 - h[r]);
                }
                return 0.5 * loo.squaredNorm();
            };
            RowVector fd(x.cols());
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                RowVector hi = x.row(i), lo = x.row(i);
                hi[j] += step;
                lo[j] -= step;
                fd[j] = (frozen_half(hi) - frozen_half(lo)) / (2.0 * step);
            }
            worst = std::max(worst, (fd - infl[i].values).norm() / infl[i].values.norm());
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max relative error %.3g (need < 1e-5)", worst);
    return {worst < 1e-5, buf};
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion_metric_oracles() {
    Rng rng(404);
    int matched = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> truth(24), pred(24);
        for (int i = 0; i < 24; ++i) {
            truth[i] = static_cast<int>(rng.integer(3));
            pred[i] = static_cast<int>(rng.integer(3));
        }
        std::vector<int> perm = {0, 1, 2};
        double brute = 0.0;
        do {
            int agree = 0;
            for (int i = 0; i < 24; ++i)
                if (perm[pred[i]] == truth[i]) ++agree;
            brute = std::max(brute, agree / 24.0);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (std::abs(accuracy(truth, pred) - brute) < 1e-12) ++matched;
    }
    const double four_point = ari({1, 1, 2, 2}, {1, 2, 1, 2});
    const bool pass = matched == 100 && four_point == -0.5;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "accuracy oracle matched %d/100; 4-point index = %g",
                  matched, four_point);
    return {pass, buf};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            wanted.push_back(std::atoi(argv[++i]));
    }
    struct Entry {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const std::vector<Entry> entries = {
        {1, "closed-form PRESS tracks the leave-one-out oracle", criterion_press_oracle},
        {2, "closed-form PRESS speed advantage", criterion_speed},
        {3, "scenario clustering accuracy", criterion_scenarios},
        {4, "sparse scenario with variable selection", criterion_sparse_scenario},
        {5, "PRESS-based selection of the cluster count", criterion_model_selection},
        {6, "convergence property suite", criterion_convergence_suite},
        {7, "weighted eigenproblem optimality", criterion_weighted_operator},
        {8, "predictive influence gradient check", criterion_gradient},
        {9, "metric oracles", criterion_metric_oracles},
    };
    int failures = 0;
    for (const auto& entry : entries) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), entry.id) == wanted.end())
            continue;
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %d (%s): %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL",
                    entry.id, entry.name, outcome.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures;
}

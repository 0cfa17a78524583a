// Python bindings for the predictive subspace clustering core: scenario
// generation, PCA/PRESS primitives, the clustering driver, model selection
// and the evaluation metrics.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psc/cluster.hpp"
#include "psc/errors.hpp"
#include "psc/kmeans.hpp"
#include "psc/metrics.hpp"
#include "psc/press.hpp"
#include "psc/select.hpp"
#include "psc/synth.hpp"

namespace py = pybind11;
using namespace psc;

namespace {

PscConfig make_config(int k, std::vector<int> ranks, std::vector<double> gammas,
                      std::vector<int> target_vars, double tol, int max_iter, int restarts,
                      std::uint64_t seed, bool clamp, int r_max) {
    PscConfig cfg;
    cfg.k = k;
    cfg.ranks = std::move(ranks);
    cfg.gammas = std::move(gammas);
    cfg.target_nonzeros = std::move(target_vars);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.clamp_leverage = clamp;
    if (r_max > 0) {
        cfg.rank_search = true;
        cfg.r_max = r_max;
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(pscpy, m) {
    m.doc() = "Predictive subspace clustering: cluster-wise PCA models scored by a "
              "closed-form leave-one-out PRESS and a predictive-influence assignment rule";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<SubspaceModel>(m, "SubspaceModel")
        .def_readonly("mean", &SubspaceModel::mean)
        .def_readonly("loadings", &SubspaceModel::loadings)
        .def_readonly("scores", &SubspaceModel::scores)
        .def_readonly("score_norms", &SubspaceModel::score_norms)
        .def_readonly("rank", &SubspaceModel::rank)
        .def_readonly("sparse", &SubspaceModel::sparse)
        .def_readonly("gamma", &SubspaceModel::gamma);

    py::class_<PscResult>(m, "PscResult")
        .def_property_readonly("labels",
                               [](const PscResult& r) { return r.partition.labels; })
        .def_property_readonly("cluster_sizes",
                               [](const PscResult& r) { return r.partition.sizes; })
        .def_readonly("models", &PscResult::models)
        .def_readonly("objective_trace", &PscResult::objective_trace)
        .def_readonly("press_trace", &PscResult::press_trace)
        .def_readonly("iterations", &PscResult::iterations)
        .def_readonly("converged", &PscResult::converged)
        .def_readonly("restart_index", &PscResult::restart_index)
        .def_readonly("objective", &PscResult::objective)
        .def_readonly("press", &PscResult::press);

    py::class_<SelectionReport>(m, "SelectionReport")
        .def_readonly("candidate_ks", &SelectionReport::candidate_ks)
        .def_readonly("press_by_k", &SelectionReport::press_by_k)
        .def_readonly("wk_by_k", &SelectionReport::wk_by_k)
        .def_readonly("sod_by_k", &SelectionReport::sod_by_k)
        .def_readonly("chosen_k_press", &SelectionReport::chosen_k_press)
        .def_readonly("chosen_k_sod", &SelectionReport::chosen_k_sod)
        .def_readonly("ranks_by_cluster", &SelectionReport::ranks_by_cluster);

    m.def(
        "generate",
        [](const std::string& scenario, int points_per_cluster, int p, double noise_sd,
           int nonzeros, std::uint64_t seed) {
            ScenarioSpec spec;
            spec.scenario = scenario_from_string(scenario);
            spec.points_per_cluster = points_per_cluster;
            spec.p = p;
            spec.noise_sd = noise_sd;
            spec.nonzeros = nonzeros;
            spec.seed = seed;
            SyntheticDataset ds = psc::generate(spec);
            py::dict out;
            out["data"] = ds.data;
            out["labels"] = ds.labels;
            out["bases"] = ds.bases;
            out["supports"] = ds.supports;
            out["ranks"] = ds.ranks;
            return out;
        },
        py::arg("scenario"), py::arg("points_per_cluster") = 100, py::arg("p") = 0,
        py::arg("noise_sd") = 0.0, py::arg("nonzeros") = 10, py::arg("seed") = 0,
        "Draw one synthetic scenario; returns data, labels, bases and supports.");

    m.def("fit_pca", &fit_pca, py::arg("data"), py::arg("rank"));
    m.def("fit_sparse_pca", &fit_sparse_pca, py::arg("data"), py::arg("rank"), py::arg("gamma"),
          py::arg("tol") = 1e-7, py::arg("max_iter") = 500);
    m.def("fit_sparse_pca_target", &fit_sparse_pca_target, py::arg("data"), py::arg("rank"),
          py::arg("target_nonzeros"), py::arg("tol") = 1e-7, py::arg("max_iter") = 500);
    m.def("reconstruction_error", &reconstruction_error, py::arg("data"), py::arg("model"));
    m.def("soft_threshold", &soft_threshold, py::arg("a"), py::arg("gamma"));

    m.def(
        "press_closed_form",
        [](const Matrix& data, const SubspaceModel& model, bool clamp) {
            PressReport rep = press_closed_form(
                data, model, clamp ? LeveragePolicy::clamp : LeveragePolicy::strict);
            py::dict out;
            out["press"] = rep.press;
            out["leverages"] = rep.leverages;
            out["loo_errors"] = rep.loo_errors;
            return out;
        },
        py::arg("data"), py::arg("model"), py::arg("clamp") = false);
    m.def("press_brute_force", &press_brute_force, py::arg("data"), py::arg("rank"));
    m.def(
        "influence_magnitudes",
        [](const Matrix& data, const SubspaceModel& model, bool clamp) {
            return influence_magnitudes(
                data, model, clamp ? LeveragePolicy::clamp : LeveragePolicy::strict);
        },
        py::arg("data"), py::arg("model"), py::arg("clamp") = true);

    m.def(
        "run_psc",
        [](const Matrix& data, int k, std::vector<int> ranks, std::vector<double> gammas,
           std::vector<int> target_vars, double tol, int max_iter, int restarts,
           std::uint64_t seed, bool clamp, int r_max) {
            return run_psc(data, make_config(k, std::move(ranks), std::move(gammas),
                                             std::move(target_vars), tol, max_iter, restarts,
                                             seed, clamp, r_max));
        },
        py::arg("data"), py::arg("k"), py::arg("ranks") = std::vector<int>{},
        py::arg("gammas") = std::vector<double>{},
        py::arg("target_vars") = std::vector<int>{}, py::arg("tol") = 0.0,
        py::arg("max_iter") = 100, py::arg("restarts") = 10, py::arg("seed") = 0,
        py::arg("clamp") = true, py::arg("r_max") = 0,
        "Run predictive subspace clustering; returns the best restart's result.");

    m.def(
        "select_k",
        [](const Matrix& data, int k_max, int rank, std::vector<int> target_vars, int restarts,
           int max_iter, std::uint64_t seed) {
            PscConfig base;
            base.ranks = {rank};
            base.target_nonzeros = std::move(target_vars);
            base.restarts = restarts;
            base.max_iter = max_iter;
            base.seed = seed;
            return select_sweep(data, k_max, base);
        },
        py::arg("data"), py::arg("k_max"), py::arg("rank") = 1,
        py::arg("target_vars") = std::vector<int>{}, py::arg("restarts") = 8,
        py::arg("max_iter") = 60, py::arg("seed") = 0,
        "Scan K = 1..k_max and report the PRESS and SOD curves and choices.");

    m.def(
        "kmeans",
        [](const Matrix& data, int k, int restarts, std::uint64_t seed) {
            return kmeans_baseline(data, k, restarts, seed).labels;
        },
        py::arg("data"), py::arg("k"), py::arg("restarts") = 10, py::arg("seed") = 0);

    m.def("accuracy", &accuracy, py::arg("true_labels"), py::arg("pred_labels"));
    m.def("ari", &ari, py::arg("true_labels"), py::arg("pred_labels"));
    m.def("monte_carlo", &monte_carlo, py::arg("scores"));
}

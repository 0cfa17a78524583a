// psc: subspace clustering by per-cluster PCA models scored with a
// closed-form leave-one-out PRESS and a predictive-influence assignment rule.
//
// Subcommands: simulate, fit, select, bench. Every run with a fixed seed is
// deterministic in its emitted numeric payloads. Exit codes: 0 success,
// 2 invalid input, 3 numerical/clustering failure.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "psc/cluster.hpp"
#include "psc/csv.hpp"
#include "psc/errors.hpp"
#include "psc/kmeans.hpp"
#include "psc/metrics.hpp"
#include "psc/press.hpp"
#include "psc/select.hpp"
#include "psc/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw psc::ParseError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw psc::ParseError("config file '" + path + "': " + e.what());
    }
}

// Config-file keys mirror the long flags; flags given on the command line win.
template <typename T>
void merge_key(const json& cfg, const CLI::Option* opt, const char* key, T& value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

template <typename T>
void merge_key(const json& cfg, const CLI::Option* opt, const char* key,
               std::optional<T>& value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw psc::ValidationError("cannot write '" + path.string() + "'");
    out << text;
}

void write_labels_csv(const fs::path& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw psc::ValidationError("cannot write '" + path.string() + "'");
    out << "label\n";
    for (int label : labels) out << label << '\n';
}

std::vector<std::string> column_headers(const char* prefix, Eigen::Index count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index j = 0; j < count; ++j)
        names.push_back(std::string(prefix) + std::to_string(j + 1));
    return names;
}

json trace_json(const std::vector<double>& trace) {
    json arr = json::array();
    for (double v : trace) arr.push_back(v);
    return arr;
}

json models_json(const std::vector<psc::SubspaceModel>& models) {
    json arr = json::array();
    for (const auto& model : models) {
        json m;
        m["rank"] = model.rank;
        m["sparse"] = model.sparse;
        m["gamma"] = model.gamma;
        json supports = json::array();
        for (int c = 0; c < model.loadings.cols(); ++c) {
            json idx = json::array();
            for (Eigen::Index j = 0; j < model.loadings.rows(); ++j)
                if (model.loadings(j, c) != 0.0) idx.push_back(static_cast<int>(j + 1));
            supports.push_back(idx);
        }
        m["selected_variables"] = supports;
        arr.push_back(m);
    }
    return arr;
}

struct ScenarioOptions {
    std::string scenario = "a";
    int points_per_cluster = 100;
    int p = 0;
    double noise_sd = 0.0;
    int nonzeros = 10;

    psc::ScenarioSpec spec(std::uint64_t seed) const {
        psc::ScenarioSpec s;
        s.scenario = psc::scenario_from_string(scenario);
        s.points_per_cluster = points_per_cluster;
        s.p = p;
        s.noise_sd = noise_sd;
        s.nonzeros = nonzeros;
        s.seed = seed;
        return s;
    }
};

struct FitOptions {
    std::string input;
    std::string out = ".";
    int k = 1;
    std::vector<int> ranks;
    std::vector<double> gammas;
    std::vector<int> target_vars;
    double tol = 0.0;
    int max_iter = 100;
    int restarts = 10;
    std::uint64_t seed = 0;
    int r_max = 0;
    bool no_clamp = false;

    psc::PscConfig config() const {
        psc::PscConfig cfg;
        cfg.k = k;
        cfg.ranks = ranks;
        cfg.gammas = gammas;
        cfg.target_nonzeros = target_vars;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.clamp_leverage = !no_clamp;
        if (r_max > 0) {
            cfg.rank_search = true;
            cfg.r_max = r_max;
        }
        return cfg;
    }

    json echo() const {
        json j;
        j["input"] = input;
        j["out"] = out;
        j["k"] = k;
        j["ranks"] = ranks;
        j["gammas"] = gammas;
        j["target_vars"] = target_vars;
        j["tol"] = tol;
        j["max_iter"] = max_iter;
        j["restarts"] = restarts;
        j["seed"] = seed;
        j["r_max"] = r_max;
        j["clamp_leverage"] = !no_clamp;
        return j;
    }
};

int run_simulate(const ScenarioOptions& scenario, std::uint64_t seed, const std::string& out) {
    psc::SyntheticDataset dataset = psc::generate(scenario.spec(seed));
    psc::write_csv(out, dataset.data, column_headers("x", dataset.data.cols()),
                   &dataset.labels);
    std::cout << "wrote " << dataset.data.rows() << "x" << dataset.data.cols()
              << " dataset with labels to " << out << "\n";
    return 0;
}

int run_fit(const FitOptions& opt) {
    Timer timer;
    psc::CsvData csv = psc::ingest_csv(opt.input);
    psc::PscResult result = psc::run_psc(csv.values, opt.config());
    const double fit_seconds = timer.seconds();

    fs::create_directories(opt.out);
    write_labels_csv(fs::path(opt.out) / "labels.csv", result.partition.labels);
    for (std::size_t k = 0; k < result.models.size(); ++k) {
        psc::write_csv((fs::path(opt.out) / ("loadings_k" + std::to_string(k + 1) + ".csv"))
                           .string(),
                       result.models[k].loadings,
                       column_headers("v", result.models[k].loadings.cols()));
    }

    json report;
    report["command"] = "fit";
    report["config"] = opt.echo();
    json res;
    res["n"] = csv.values.rows();
    res["p"] = csv.values.cols();
    res["iterations"] = result.iterations;
    res["converged"] = result.converged;
    res["restart_index"] = result.restart_index;
    res["objective"] = result.objective;
    res["press"] = result.press;
    res["objective_trace"] = trace_json(result.objective_trace);
    res["press_trace"] = trace_json(result.press_trace);
    res["cluster_sizes"] = result.partition.sizes;
    json ranks = json::array();
    for (const auto& model : result.models) ranks.push_back(model.rank);
    res["ranks"] = ranks;
    res["models"] = models_json(result.models);
    res["labels"] = result.partition.labels;
    report["result"] = res;
    if (!csv.labels.empty()) {
        json metrics;
        metrics["accuracy"] = psc::accuracy(csv.labels, result.partition.labels);
        metrics["ari"] = psc::ari(csv.labels, result.partition.labels);
        report["metrics"] = metrics;
    }
    write_text(fs::path(opt.out) / "report.json", report.dump(2) + "\n");
    json timing = {{"fit_seconds", fit_seconds}};
    write_text(fs::path(opt.out) / "timing.json", timing.dump(2) + "\n");
    std::cout << "fit: " << result.iterations << " iterations, converged="
              << (result.converged ? "yes" : "no") << ", objective=" << result.objective
              << "\n";
    return 0;
}

int run_select(const FitOptions& opt, int k_max) {
    Timer timer;
    psc::CsvData csv = psc::ingest_csv(opt.input);
    if (k_max < 3) throw psc::ValidationError("select needs --k-max >= 3");
    psc::SelectionReport report = psc::select_sweep(csv.values, k_max, opt.config());
    const double seconds = timer.seconds();

    fs::create_directories(opt.out);
    {
        std::ofstream curves(fs::path(opt.out) / "selection_curves.csv");
        curves << "k,press,w,sod,degenerate\n";
        char buffer[64];
        for (std::size_t i = 0; i < report.candidate_ks.size(); ++i) {
            curves << report.candidate_ks[i] << ',';
            auto emit = [&](double v) {
                if (std::isnan(v)) return;
                std::snprintf(buffer, sizeof(buffer), "%.17g", v);
                curves << buffer;
            };
            emit(report.press_by_k[i]);
            curves << ',';
            emit(report.wk_by_k[i]);
            curves << ',';
            emit(report.sod_by_k[i]);
            curves << ',' << (report.degenerate[i] ? 1 : 0) << '\n';
        }
    }

    json out;
    out["command"] = "select";
    json cfg = opt.echo();
    cfg["k_max"] = k_max;
    out["config"] = cfg;
    json res;
    res["candidate_ks"] = report.candidate_ks;
    res["press_by_k"] = trace_json(report.press_by_k);
    res["wk_by_k"] = trace_json(report.wk_by_k);
    res["sod_by_k"] = trace_json(report.sod_by_k);
    res["degenerate"] = report.degenerate;
    res["chosen_k_press"] = report.chosen_k_press;
    res["chosen_k_sod"] = report.chosen_k_sod;
    res["ranks_by_cluster"] = report.ranks_by_cluster;
    out["result"] = res;
    write_text(fs::path(opt.out) / "report.json", out.dump(2) + "\n");
    json timing = {{"select_seconds", seconds}};
    write_text(fs::path(opt.out) / "timing.json", timing.dump(2) + "\n");
    std::cout << "select: PRESS chooses K=" << report.chosen_k_press << ", SOD chooses K="
              << report.chosen_k_sod << "\n";
    return 0;
}

struct BenchAccumulator {
    std::vector<double> accuracy;
    std::vector<double> ari;
    int failures = 0;

    json summary(const std::string& name) const {
        json row;
        row["method"] = name;
        if (accuracy.size() >= 2) {
            auto [ma, sa] = psc::monte_carlo(accuracy);
            auto [mr, sr] = psc::monte_carlo(ari);
            row["mean_accuracy"] = ma;
            row["sd_accuracy"] = sa;
            row["mean_ari"] = mr;
            row["sd_ari"] = sr;
        }
        row["failures"] = failures;
        return row;
    }
};

int run_bench(const ScenarioOptions& scenario, std::uint64_t seed, int reps, int restarts,
              const std::vector<int>& target_vars, const std::vector<double>& gammas,
              const std::string& out) {
    if (reps < 1) throw psc::ValidationError("bench needs --reps >= 1");
    Timer timer;

    const psc::Scenario scen = psc::scenario_from_string(scenario.scenario);
    const std::vector<int> ranks = psc::scenario_ranks(scen);
    const int k = static_cast<int>(ranks.size());
    const bool sparse_requested =
        !target_vars.empty() || (!gammas.empty() && gammas[0] > 0.0);

    BenchAccumulator psc_rows, dense_rows, kmeans_rows;
    for (int rep = 0; rep < reps; ++rep) {
        const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(rep);
        psc::SyntheticDataset dataset = psc::generate(scenario.spec(rep_seed));

        psc::PscConfig cfg;
        cfg.k = k;
        cfg.ranks = ranks;
        cfg.restarts = restarts;
        cfg.seed = rep_seed;
        cfg.target_nonzeros = target_vars;
        cfg.gammas = gammas;
        try {
            psc::PscResult result = psc::run_psc(dataset.data, cfg);
            psc_rows.accuracy.push_back(psc::accuracy(dataset.labels, result.partition.labels));
            psc_rows.ari.push_back(psc::ari(dataset.labels, result.partition.labels));
        } catch (const psc::NumericalError&) {
            psc_rows.failures += 1;
        }

        if (sparse_requested) {
            psc::PscConfig dense_cfg = cfg;
            dense_cfg.target_nonzeros.clear();
            dense_cfg.gammas.clear();
            try {
                psc::PscResult result = psc::run_psc(dataset.data, dense_cfg);
                dense_rows.accuracy.push_back(
                    psc::accuracy(dataset.labels, result.partition.labels));
                dense_rows.ari.push_back(psc::ari(dataset.labels, result.partition.labels));
            } catch (const psc::NumericalError&) {
                dense_rows.failures += 1;
            }
        }

        try {
            psc::Partition km = psc::kmeans_baseline(dataset.data, k, restarts, rep_seed);
            kmeans_rows.accuracy.push_back(psc::accuracy(dataset.labels, km.labels));
            kmeans_rows.ari.push_back(psc::ari(dataset.labels, km.labels));
        } catch (const psc::NumericalError&) {
            kmeans_rows.failures += 1;
        }
    }

    if (psc_rows.accuracy.empty() && kmeans_rows.accuracy.empty())
        throw psc::ClusteringError("bench: every replication failed");

    json methods = json::array();
    methods.push_back(psc_rows.summary(sparse_requested ? "psc_sparse" : "psc"));
    if (sparse_requested) methods.push_back(dense_rows.summary("psc_dense"));
    methods.push_back(kmeans_rows.summary("kmeans"));

    fs::create_directories(out);
    {
        std::ofstream table(fs::path(out) / "bench.csv");
        table << "method,mean_accuracy,sd_accuracy,mean_ari,sd_ari,failures\n";
        char buffer[64];
        for (const auto& row : methods) {
            table << row.at("method").get<std::string>();
            for (const char* key : {"mean_accuracy", "sd_accuracy", "mean_ari", "sd_ari"}) {
                table << ',';
                if (row.contains(key)) {
                    std::snprintf(buffer, sizeof(buffer), "%.17g", row.at(key).get<double>());
                    table << buffer;
                }
            }
            table << ',' << row.at("failures").get<int>() << '\n';
        }
    }

    json report;
    report["command"] = "bench";
    json cfg;
    cfg["scenario"] = scenario.scenario;
    cfg["points_per_cluster"] = scenario.points_per_cluster;
    cfg["p"] = scenario.p;
    cfg["noise_sd"] = scenario.noise_sd;
    cfg["nonzeros"] = scenario.nonzeros;
    cfg["reps"] = reps;
    cfg["seed"] = seed;
    cfg["restarts"] = restarts;
    cfg["target_vars"] = target_vars;
    cfg["gammas"] = gammas;
    cfg["out"] = out;
    report["config"] = cfg;
    report["result"] = {{"methods", methods}};
    json per_rep;
    per_rep["psc_accuracy"] = psc_rows.accuracy;
    per_rep["psc_ari"] = psc_rows.ari;
    if (sparse_requested) {
        per_rep["psc_dense_accuracy"] = dense_rows.accuracy;
        per_rep["psc_dense_ari"] = dense_rows.ari;
    }
    per_rep["kmeans_accuracy"] = kmeans_rows.accuracy;
    per_rep["kmeans_ari"] = kmeans_rows.ari;
    report["per_rep"] = per_rep;
    write_text(fs::path(out) / "report.json", report.dump(2) + "\n");
    json timing = {{"bench_seconds", timer.seconds()}};
    write_text(fs::path(out) / "timing.json", timing.dump(2) + "\n");

    for (const auto& row : methods) {
        std::cout << row.at("method").get<std::string>();
        if (row.contains("mean_accuracy"))
            std::cout << ": accuracy " << row.at("mean_accuracy").get<double>() << " (sd "
                      << row.at("sd_accuracy").get<double>() << "), ari "
                      << row.at("mean_ari").get<double>() << " (sd "
                      << row.at("sd_ari").get<double>() << ")";
        std::cout << ", failures " << row.at("failures").get<int>() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predictive subspace clustering"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its keys");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario as CSV");
    ScenarioOptions sim_scenario;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out = "data.csv";
    auto* sim_scenario_opt = simulate->add_option("--scenario", sim_scenario.scenario,
                                                  "a..e or sparse_a..sparse_e");
    auto* sim_ppc = simulate->add_option("--points-per-cluster",
                                         sim_scenario.points_per_cluster, "points per cluster");
    auto* sim_p = simulate->add_option("--p", sim_scenario.p, "ambient dimension (0 = default)");
    auto* sim_noise = simulate->add_option("--noise-sd", sim_scenario.noise_sd,
                                           "ambient Gaussian noise standard deviation");
    auto* sim_nonzeros = simulate->add_option("--nonzeros", sim_scenario.nonzeros,
                                              "nonzero loadings per component (sparse variants)");
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "generator seed (required)");
    auto* sim_out_opt = simulate->add_option("--out", sim_out, "output CSV path");

    // fit
    auto* fit = app.add_subcommand("fit", "Cluster a CSV dataset");
    FitOptions fit_opt;
    auto* fit_input = fit->add_option("--input", fit_opt.input, "input CSV");
    auto* fit_k = fit->add_option("--k", fit_opt.k, "number of clusters");
    auto* fit_ranks = fit->add_option("--ranks", fit_opt.ranks,
                                      "per-cluster subspace dimensions (comma separated)")
                          ->delimiter(',');
    auto* fit_gamma = fit->add_option("--gamma", fit_opt.gammas,
                                      "sparsity penalty per cluster (0 = dense)")
                          ->delimiter(',');
    auto* fit_target = fit->add_option("--target-vars", fit_opt.target_vars,
                                       "nonzero variables per loading (overrides --gamma)")
                           ->delimiter(',');
    auto* fit_tol = fit->add_option("--tol", fit_opt.tol, "PRESS convergence tolerance");
    auto* fit_max_iter = fit->add_option("--max-iter", fit_opt.max_iter, "iteration cap");
    auto* fit_restarts = fit->add_option("--restarts", fit_opt.restarts, "random restarts");
    auto* fit_seed = fit->add_option("--seed", fit_opt.seed, "clustering seed");
    auto* fit_rmax = fit->add_option("--r-max", fit_opt.r_max,
                                     "enable per-cluster rank search up to this rank");
    auto* fit_noclamp = fit->add_flag("--no-clamp", fit_opt.no_clamp,
                                      "error on leverage singularities instead of clamping");
    auto* fit_out = fit->add_option("--out", fit_opt.out, "output directory");

    // select
    auto* select = app.add_subcommand("select", "Scan the number of clusters");
    FitOptions sel_opt;
    int k_max = 5;
    auto* sel_input = select->add_option("--input", sel_opt.input, "input CSV");
    auto* sel_kmax = select->add_option("--k-max", k_max, "largest candidate K");
    auto* sel_rank = select->add_option("--rank", sel_opt.ranks,
                                        "common subspace dimension for the sweep")
                         ->delimiter(',');
    auto* sel_rmax = select->add_option("--r-max", sel_opt.r_max,
                                        "enable per-cluster rank search up to this rank");
    auto* sel_target = select->add_option("--target-vars", sel_opt.target_vars,
                                          "nonzero variables per loading")
                           ->delimiter(',');
    auto* sel_gamma = select->add_option("--gamma", sel_opt.gammas, "sparsity penalty")
                          ->delimiter(',');
    auto* sel_restarts = select->add_option("--restarts", sel_opt.restarts, "random restarts");
    auto* sel_seed = select->add_option("--seed", sel_opt.seed, "sweep seed");
    auto* sel_out = select->add_option("--out", sel_opt.out, "output directory");

    // bench
    auto* bench = app.add_subcommand("bench", "Seeded Monte Carlo comparison against K-means");
    ScenarioOptions bench_scenario;
    std::optional<std::uint64_t> bench_seed;
    int reps = 25;
    int bench_restarts = 10;
    std::vector<int> bench_target;
    std::vector<double> bench_gamma;
    std::string bench_out = ".";
    auto* bench_scen_opt = bench->add_option("--scenario", bench_scenario.scenario,
                                             "a..e or sparse_a..sparse_e");
    auto* bench_ppc = bench->add_option("--points-per-cluster",
                                        bench_scenario.points_per_cluster, "points per cluster");
    auto* bench_p = bench->add_option("--p", bench_scenario.p, "ambient dimension (0 = default)");
    auto* bench_noise = bench->add_option("--noise-sd", bench_scenario.noise_sd,
                                          "noise standard deviation");
    auto* bench_nonzeros = bench->add_option("--nonzeros", bench_scenario.nonzeros,
                                             "nonzero loadings per component");
    auto* bench_reps = bench->add_option("--reps", reps, "Monte Carlo replications");
    auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "base seed (required)");
    auto* bench_restart_opt = bench->add_option("--restarts", bench_restarts, "random restarts");
    auto* bench_target_opt = bench->add_option("--target-vars", bench_target,
                                               "nonzero variables per loading")
                                 ->delimiter(',');
    auto* bench_gamma_opt = bench->add_option("--gamma", bench_gamma, "sparsity penalty")
                                ->delimiter(',');
    auto* bench_out_opt = bench->add_option("--out", bench_out, "output directory");

    try {
        app.parse(argc, argv);

        const json cfg = load_config_file(config_path);
        if (simulate->parsed()) {
            merge_key(cfg, sim_scenario_opt, "scenario", sim_scenario.scenario);
            merge_key(cfg, sim_ppc, "points_per_cluster", sim_scenario.points_per_cluster);
            merge_key(cfg, sim_p, "p", sim_scenario.p);
            merge_key(cfg, sim_noise, "noise_sd", sim_scenario.noise_sd);
            merge_key(cfg, sim_nonzeros, "nonzeros", sim_scenario.nonzeros);
            merge_key(cfg, sim_seed_opt, "seed", sim_seed);
            merge_key(cfg, sim_out_opt, "out", sim_out);
            if (!sim_seed) throw psc::ValidationError("simulate requires --seed");
            return run_simulate(sim_scenario, *sim_seed, sim_out);
        }
        if (fit->parsed()) {
            merge_key(cfg, fit_input, "input", fit_opt.input);
            merge_key(cfg, fit_k, "k", fit_opt.k);
            merge_key(cfg, fit_ranks, "ranks", fit_opt.ranks);
            merge_key(cfg, fit_gamma, "gammas", fit_opt.gammas);
            merge_key(cfg, fit_target, "target_vars", fit_opt.target_vars);
            merge_key(cfg, fit_tol, "tol", fit_opt.tol);
            merge_key(cfg, fit_max_iter, "max_iter", fit_opt.max_iter);
            merge_key(cfg, fit_restarts, "restarts", fit_opt.restarts);
            merge_key(cfg, fit_seed, "seed", fit_opt.seed);
            merge_key(cfg, fit_rmax, "r_max", fit_opt.r_max);
            merge_key(cfg, fit_noclamp, "no_clamp", fit_opt.no_clamp);
            merge_key(cfg, fit_out, "out", fit_opt.out);
            if (fit_opt.input.empty()) throw psc::ValidationError("fit requires --input");
            return run_fit(fit_opt);
        }
        if (select->parsed()) {
            merge_key(cfg, sel_input, "input", sel_opt.input);
            merge_key(cfg, sel_kmax, "k_max", k_max);
            merge_key(cfg, sel_rank, "rank", sel_opt.ranks);
            merge_key(cfg, sel_rmax, "r_max", sel_opt.r_max);
            merge_key(cfg, sel_target, "target_vars", sel_opt.target_vars);
            merge_key(cfg, sel_gamma, "gammas", sel_opt.gammas);
            merge_key(cfg, sel_restarts, "restarts", sel_opt.restarts);
            merge_key(cfg, sel_seed, "seed", sel_opt.seed);
            merge_key(cfg, sel_out, "out", sel_opt.out);
            if (sel_opt.input.empty()) throw psc::ValidationError("select requires --input");
            return run_select(sel_opt, k_max);
        }
        if (bench->parsed()) {
            merge_key(cfg, bench_scen_opt, "scenario", bench_scenario.scenario);
            merge_key(cfg, bench_ppc, "points_per_cluster", bench_scenario.points_per_cluster);
            merge_key(cfg, bench_p, "p", bench_scenario.p);
            merge_key(cfg, bench_noise, "noise_sd", bench_scenario.noise_sd);
            merge_key(cfg, bench_nonzeros, "nonzeros", bench_scenario.nonzeros);
            merge_key(cfg, bench_reps, "reps", reps);
            merge_key(cfg, bench_seed_opt, "seed", bench_seed);
            merge_key(cfg, bench_restart_opt, "restarts", bench_restarts);
            merge_key(cfg, bench_target_opt, "target_vars", bench_target);
            merge_key(cfg, bench_gamma_opt, "gammas", bench_gamma);
            merge_key(cfg, bench_out_opt, "out", bench_out);
            if (!bench_seed) throw psc::ValidationError("bench requires --seed");
            return run_bench(bench_scenario, *bench_seed, reps, bench_restarts, bench_target,
                             bench_gamma, bench_out);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const psc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const psc::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

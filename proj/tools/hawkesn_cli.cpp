// Command-line surface for simulating, fitting, and interrogating
// finite-population self-exciting cascades and their SIR counterparts.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkesn/cascade.hpp"
#include "hawkesn/equivalence.hpp"
#include "hawkesn/estimation.hpp"
#include "hawkesn/io.hpp"
#include "hawkesn/process.hpp"
#include "hawkesn/sir.hpp"
#include "hawkesn/size_distribution.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace hawkesn;

namespace {

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        write_file(out_path, content);
}

Cascade load_input_cascade(const std::string& path, bool marks) {
    Cascade c = load_cascade(path, marks);
    if (c.has_ties())
        std::cerr << "warning: simultaneous event times in " << path
                  << " (ties kept in file order)\n";
    return c;
}

std::vector<fs::path> list_csvs(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .csv files in " + dir);
    return files;
}

// Runs job(i) for every input index on `workers` threads; results are
// collected in input order.
std::vector<std::string> run_batch(std::size_t count, int workers,
                                   const std::function<std::string(std::size_t)>& job) {
    std::vector<std::string> results(count);
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::vector<std::string> errors;
    const auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                results[i] = job(i);
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mutex);
                errors.emplace_back(e.what());
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!errors.empty()) throw std::runtime_error("batch failures: " + errors.front());
    return results;
}

struct ParamFlags {
    double kappa = 0.0, theta = 0.0, beta = 0.0, gamma = 0.0;
    double n = 0.0;
    int i0 = 1;
    std::optional<double> eta;
    double alpha = 2.016;
};

HawkesNParams hawkes_from(const ParamFlags& f) {
    HawkesNParams p;
    p.kappa = f.kappa;
    p.theta = f.theta;
    p.n_pop = f.n;
    p.eta = f.eta;
    p.alpha = f.alpha;
    p.validate();
    return p;
}

HawkesNParams hawkes_from_report_json(const std::string& path) {
    const auto j = nlohmann::json::parse(read_file(path));
    const auto& pj = j.contains("params") ? j.at("params") : j;
    HawkesNParams p;
    p.kappa = pj.at("kappa").get<double>();
    p.theta = pj.at("theta").get<double>();
    p.n_pop = pj.at("n_pop").get<double>();
    if (pj.contains("eta") && !pj.at("eta").is_null()) {
        p.eta = pj.at("eta").get<double>();
        p.alpha = pj.value("alpha", 2.016);
    }
    p.validate();
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-population Hawkes / SIR diffusion toolkit"};
    app.require_subcommand(1);

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "draw one realization and write it as CSV");
    std::string sim_model = "hawkesn";
    ParamFlags sim_p;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    std::optional<double> sim_tmax;
    std::size_t sim_nseeds = 1;
    double sim_dt = 0.0;
    std::string sim_out;
    sim->add_option("--model", sim_model, "hawkesn | sir-stochastic | sir-deterministic")
        ->check(CLI::IsMember({"hawkesn", "sir-stochastic", "sir-deterministic"}));
    sim->add_option("--kappa", sim_p.kappa);
    sim->add_option("--theta", sim_p.theta);
    sim->add_option("--beta", sim_p.beta);
    sim->add_option("--gamma", sim_p.gamma);
    sim->add_option("--n", sim_p.n, "population size")->required();
    sim->add_option("--i0", sim_p.i0, "initially infected (SIR) / seed events (hawkesn)");
    sim->add_option("--eta", [&sim_p](const CLI::results_t& r) {
        sim_p.eta = std::stod(r[0]);
        return true;
    }, "mark warp exponent (enables marked mode)");
    sim->add_option("--alpha", sim_p.alpha, "mark power-law exponent");
    sim->add_option("--seed", sim_seed)->each([&](const std::string&) { sim_seed_set = true; });
    sim->add_option("--t-max", [&sim_tmax](const CLI::results_t& r) {
        sim_tmax = std::stod(r[0]);
        return true;
    }, "simulation horizon");
    sim->add_option("--dt", sim_dt, "integration step (sir-deterministic)");
    sim->add_option("--out", sim_out, "output file (default stdout)");

    // ---- fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "maximum-likelihood fit, report as JSON");
    std::string fit_model = "hawkesn";
    std::string fit_input, fit_input_dir, fit_out;
    double fit_fraction = 1.0;
    std::optional<double> fit_fixed_n;
    bool fit_infinite = false, fit_marks = false;
    int fit_i0 = 1, fit_workers = 1, fit_starts = 10, fit_bins = 100;
    std::uint64_t fit_seed = 42;
    fit->add_option("--model", fit_model, "hawkesn | sir-stochastic | sir-deterministic")
        ->check(CLI::IsMember({"hawkesn", "sir-stochastic", "sir-deterministic"}));
    auto* fit_in_opt = fit->add_option("--input", fit_input, "cascade or realization CSV");
    auto* fit_dir_opt = fit->add_option("--input-dir", fit_input_dir,
                                        "directory of CSVs (batch mode, NDJSON output)");
    fit_in_opt->excludes(fit_dir_opt);
    fit->add_option("--observed-fraction", fit_fraction)->check(CLI::Range(0.0, 1.0));
    fit->add_option("--fixed-n", [&fit_fixed_n](const CLI::results_t& r) {
        fit_fixed_n = std::stod(r[0]);
        return true;
    }, "pin the population size instead of fitting it");
    fit->add_flag("--hawkes-infinite", fit_infinite, "fit the infinite-population baseline");
    fit->add_flag("--marks", fit_marks, "cascade file carries a magnitude column");
    fit->add_option("--i0", fit_i0, "initially infected (SIR input)");
    fit->add_option("--bins", fit_bins, "count bins (sir-deterministic)");
    fit->add_option("--starts", fit_starts);
    fit->add_option("--seed", fit_seed, "multi-start seed");
    fit->add_option("--workers", fit_workers)->check(CLI::PositiveNumber);
    fit->add_option("--out", fit_out);

    // ---- sizedist ----------------------------------------------------------
    auto* sd = app.add_subcommand("sizedist", "final-size probability distribution");
    ParamFlags sd_p;
    std::string sd_params_json, sd_input, sd_out, sd_format = "csv";
    double sd_fraction = 1.0;
    bool sd_marks = false;
    long sd_cap = 5000;
    auto* sd_kappa = sd->add_option("--kappa", sd_p.kappa);
    auto* sd_theta = sd->add_option("--theta", sd_p.theta);
    auto* sd_n = sd->add_option("--n", sd_p.n, "population size");
    sd->add_option("--eta", [&sd_p](const CLI::results_t& r) {
        sd_p.eta = std::stod(r[0]);
        return true;
    });
    sd->add_option("--alpha", sd_p.alpha);
    auto* sd_json = sd->add_option("--params-json", sd_params_json,
                                   "take parameters from a fit report instead of flags");
    sd_json->excludes(sd_kappa)->excludes(sd_theta)->excludes(sd_n);
    sd->add_option("--input", sd_input, "cascade CSV for the aposteriori distribution");
    sd->add_flag("--marks", sd_marks);
    sd->add_option("--observed-fraction", sd_fraction)->check(CLI::Range(0.0, 1.0));
    sd->add_option("--max-n", sd_cap, "state-space cap");
    sd->add_option("--format", sd_format)->check(CLI::IsMember({"csv", "json"}));
    sd->add_option("--out", sd_out);

    // ---- holdout -----------------------------------------------------------
    auto* ho = app.add_subcommand("holdout", "fit a prefix, score the suffix per event");
    std::string ho_input, ho_input_dir, ho_out;
    double ho_fraction = 0.8;
    bool ho_infinite = false, ho_marks = false;
    std::optional<double> ho_fixed_n;
    int ho_workers = 1, ho_starts = 10;
    std::uint64_t ho_seed = 42;
    auto* ho_in_opt = ho->add_option("--input", ho_input);
    auto* ho_dir_opt = ho->add_option("--input-dir", ho_input_dir);
    ho_in_opt->excludes(ho_dir_opt);
    ho->add_option("--observed-fraction", ho_fraction)
        ->check(CLI::Range(0.0, 1.0))
        ->required();
    ho->add_flag("--hawkes-infinite", ho_infinite);
    ho->add_flag("--marks", ho_marks);
    ho->add_option("--fixed-n", [&ho_fixed_n](const CLI::results_t& r) {
        ho_fixed_n = std::stod(r[0]);
        return true;
    });
    ho->add_option("--starts", ho_starts);
    ho->add_option("--seed", ho_seed);
    ho->add_option("--workers", ho_workers)->check(CLI::PositiveNumber);
    ho->add_option("--out", ho_out);

    // ---- nstat -------------------------------------------------------------
    auto* ns = app.add_subcommand("nstat", "population-identifiability statistic and N root");
    std::string ns_input, ns_out;
    double ns_kappa = 0.0, ns_theta = 0.0, ns_nmax = 0.0, ns_fraction = 1.0;
    bool ns_marks = false;
    ns->add_option("--input", ns_input)->required();
    ns->add_option("--kappa", ns_kappa)->required();
    ns->add_option("--theta", ns_theta)->required();
    ns->add_option("--n-max", ns_nmax, "root-scan upper bound (default 20x event count)");
    ns->add_option("--observed-fraction", ns_fraction)->check(CLI::Range(0.0, 1.0));
    ns->add_flag("--marks", ns_marks);
    ns->add_option("--out", ns_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            ordered_json summary;
            summary["model"] = sim_model;
            if (sim_model == "sir-deterministic") {
                SirParams p{sim_p.beta, sim_p.gamma, sim_p.n, sim_p.i0};
                p.validate();
                const double dt = sim_dt > 0.0 ? sim_dt : 0.01 / p.gamma;
                const double t_max = sim_tmax.value_or(10.0 / p.gamma);
                const auto tr = simulate_deterministic(p, dt, t_max);
                emit(trajectory_to_csv(tr), sim_out);
                summary["points"] = tr.size();
                summary["t_max"] = t_max;
            } else if (sim_model == "sir-stochastic") {
                if (!sim_seed_set) throw std::runtime_error("--seed is required for simulation");
                SirParams p{sim_p.beta, sim_p.gamma, sim_p.n, sim_p.i0};
                p.validate();
                const auto r = simulate_stochastic(p, sim_seed);
                emit(sir_realization_to_csv(r), sim_out);
                summary["events"] = r.events.size();
                summary["infections"] = r.infection_count();
                summary["duration"] = r.events.empty() ? 0.0 : r.events.back().time;
            } else {
                if (!sim_seed_set) throw std::runtime_error("--seed is required for simulation");
                const auto p = hawkes_from(sim_p);
                SimulateOptions opts;
                opts.t_max = sim_tmax;
                opts.n_seeds = static_cast<std::size_t>(std::max(1, sim_p.i0));
                const auto c = simulate(p, sim_seed, opts);
                emit(cascade_to_csv(c), sim_out);
                summary["events"] = c.size();
                summary["duration"] = c.duration();
            }
            if (!sim_out.empty()) summary["out"] = sim_out;
            std::cout << summary.dump() << "\n";
            return 0;
        }

        if (*fit) {
            FitConfig cfg;
            cfg.starts = fit_starts;
            cfg.start_seed = fit_seed;
            const auto fit_one = [&](const std::string& path) -> std::string {
                if (fit_model == "sir-stochastic") {
                    auto r = load_sir_realization(path, fit_i0);
                    if (fit_fraction < 1.0) {
                        const auto keep = static_cast<std::size_t>(
                            std::ceil(fit_fraction * static_cast<double>(r.events.size())));
                        r.events.resize(std::max<std::size_t>(1, keep));
                    }
                    return fit_report_to_json(fit_sir_stochastic(r, cfg, fit_fixed_n));
                }
                if (fit_model == "sir-deterministic") {
                    const auto c = load_input_cascade(path, fit_marks);
                    const auto obs = split_cascade(c, fit_fraction).observed;
                    const auto binned =
                        bin_cascade_counts(obs, static_cast<std::size_t>(fit_bins));
                    DeterministicFitConfig dcfg;
                    dcfg.starts = fit_starts;
                    dcfg.start_seed = fit_seed;
                    const auto dfit = fit_deterministic(binned, fit_i0, dcfg);
                    ordered_json j;
                    j["params"] = {{"model", "sir-deterministic"},
                                   {"beta", dfit.params.beta},
                                   {"gamma", dfit.params.gamma},
                                   {"n_pop", dfit.params.n_pop},
                                   {"i0", dfit.params.i0}};
                    j["sse"] = dfit.sse;
                    j["converged"] = dfit.converged;
                    j["iterations"] = dfit.iterations;
                    return j.dump(2);
                }
                const auto c = load_input_cascade(path, fit_marks);
                const auto obs = split_cascade(c, fit_fraction).observed;
                std::optional<double> fixed = fit_fixed_n;
                if (fit_infinite) fixed = std::numeric_limits<double>::infinity();
                return fit_report_to_json(fit_hawkesn(obs, cfg, fixed));
            };
            if (!fit_input_dir.empty()) {
                const auto files = list_csvs(fit_input_dir);
                const auto rows = run_batch(files.size(), fit_workers, [&](std::size_t i) {
                    nlohmann::ordered_json line =
                        nlohmann::ordered_json::parse(fit_one(files[i].string()));
                    line["input"] = files[i].string();
                    return line.dump();
                });
                std::string out;
                for (const auto& row : rows) out += row + "\n";
                emit(out, fit_out);
            } else {
                if (fit_input.empty()) throw std::runtime_error("--input or --input-dir required");
                emit(fit_one(fit_input) + "\n", fit_out);
            }
            return 0;
        }

        if (*sd) {
            const HawkesNParams hp = sd_params_json.empty()
                                         ? hawkes_from(sd_p)
                                         : hawkes_from_report_json(sd_params_json);
            ChainConfig chain;
            chain.max_n = sd_cap;
            SizeDistribution dist;
            if (!sd_input.empty()) {
                const auto c = load_input_cascade(sd_input, sd_marks);
                const auto obs = split_cascade(c, sd_fraction).observed;
                dist = aposteriori_distribution(hp, obs, chain);
            } else {
                dist = apriori_distribution(hp, chain);
            }
            emit(sd_format == "csv" ? size_distribution_to_csv(dist)
                                    : size_distribution_to_json(dist) + "\n",
                 sd_out);
            ordered_json summary;
            summary["mean"] = dist.mean();
            summary["variance"] = dist.variance();
            summary["modes"] = dist.smoothed_modes();
            summary["total"] = dist.total();
            std::cout << summary.dump() << "\n";
            return 0;
        }

        if (*ho) {
            FitConfig cfg;
            cfg.starts = ho_starts;
            cfg.start_seed = ho_seed;
            const auto holdout_one = [&](const std::string& path) -> std::string {
                const auto c = load_input_cascade(path, ho_marks);
                const auto sp = split_cascade(c, ho_fraction);
                if (sp.holdout.empty()) throw std::runtime_error("holdout empty at this fraction");
                std::optional<double> fixed = ho_fixed_n;
                if (ho_infinite) fixed = std::numeric_limits<double>::infinity();
                const auto report = fit_hawkesn(sp.observed, cfg, fixed);
                const double nll =
                    holdout_negative_ll(report.hawkesn_params(), sp.observed, sp.holdout);
                ordered_json j;
                j["observed_fraction"] = ho_fraction;
                j["holdout_nll"] = std::isfinite(nll) ? ordered_json(nll) : ordered_json("inf");
                j["n_holdout"] = sp.holdout.size();
                j["kappa"] = report.hawkesn_params().kappa;
                j["theta"] = report.hawkesn_params().theta;
                j["n_pop"] = report.hawkesn_params().n_pop;
                return j.dump();
            };
            if (!ho_input_dir.empty()) {
                const auto files = list_csvs(ho_input_dir);
                const auto rows = run_batch(files.size(), ho_workers, [&](std::size_t i) {
                    auto line = nlohmann::ordered_json::parse(holdout_one(files[i].string()));
                    line["input"] = files[i].string();
                    return line.dump();
                });
                std::string out;
                for (const auto& row : rows) out += row + "\n";
                emit(out, ho_out);
            } else {
                if (ho_input.empty()) throw std::runtime_error("--input or --input-dir required");
                emit(holdout_one(ho_input) + "\n", ho_out);
            }
            return 0;
        }

        if (*ns) {
            const auto c = load_input_cascade(ns_input, ns_marks);
            const auto obs = split_cascade(c, ns_fraction).observed;
            const double s = n_statistic(ns_kappa, ns_theta, obs);
            const double n_max =
                ns_nmax > 0.0 ? ns_nmax : 20.0 * static_cast<double>(obs.size());
            std::optional<double> root;
            if (obs.size() >= 2 && n_max > static_cast<double>(obs.size()))
                root = find_n_root(ns_kappa, ns_theta, obs, n_max);
            ordered_json j;
            j["n_events"] = obs.size();
            j["statistic_s"] = s;
            j["verdict"] = s > 0.0 ? "no-valid-N" : "valid-N";
            j["n_root"] = root ? ordered_json(*root) : ordered_json(nullptr);
            j["n_max"] = n_max;
            emit(j.dump() + "\n", ns_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

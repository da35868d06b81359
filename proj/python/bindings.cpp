#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hawkesn/cascade.hpp"
#include "hawkesn/equivalence.hpp"
#include "hawkesn/estimation.hpp"
#include "hawkesn/io.hpp"
#include "hawkesn/process.hpp"
#include "hawkesn/sir.hpp"
#include "hawkesn/size_distribution.hpp"

namespace py = pybind11;
using namespace hawkesn;

PYBIND11_MODULE(_hawkesn, m) {
    m.doc() = "finite-population self-exciting processes, SIR models, and their equivalence";

    py::class_<Cascade>(m, "Cascade")
        .def(py::init<>())
        .def(py::init([](std::vector<double> times, std::optional<std::vector<double>> marks) {
                 Cascade c;
                 c.times = std::move(times);
                 if (marks) c.marks = std::move(*marks);
                 c.validate(false);
                 return c;
             }),
             py::arg("times"), py::arg("marks") = std::nullopt)
        .def_readonly("times", &Cascade::times)
        .def_readonly("marks", &Cascade::marks)
        .def_readonly("t0_offset", &Cascade::t0_offset)
        .def("__len__", &Cascade::size)
        .def("has_marks", &Cascade::has_marks)
        .def("duration", &Cascade::duration)
        .def("__repr__", [](const Cascade& c) {
            return "Cascade(" + std::to_string(c.size()) + " events)";
        });

    py::class_<HawkesNParams>(m, "HawkesNParams")
        .def(py::init([](double kappa, double theta, double n_pop, std::optional<double> eta,
                         double alpha, double mu) {
                 HawkesNParams p;
                 p.kappa = kappa;
                 p.theta = theta;
                 p.n_pop = n_pop;
                 p.eta = eta;
                 p.alpha = alpha;
                 p.mu = mu;
                 p.validate();
                 return p;
             }),
             py::arg("kappa"), py::arg("theta"), py::arg("n_pop"),
             py::arg("eta") = std::nullopt, py::arg("alpha") = 2.016, py::arg("mu") = 0.0)
        .def_readwrite("kappa", &HawkesNParams::kappa)
        .def_readwrite("theta", &HawkesNParams::theta)
        .def_readwrite("n_pop", &HawkesNParams::n_pop)
        .def_readwrite("eta", &HawkesNParams::eta)
        .def_readwrite("alpha", &HawkesNParams::alpha)
        .def_readwrite("mu", &HawkesNParams::mu)
        .def("__repr__", [](const HawkesNParams& p) {
            return "HawkesNParams(kappa=" + std::to_string(p.kappa) +
                   ", theta=" + std::to_string(p.theta) + ", n_pop=" + std::to_string(p.n_pop) +
                   ")";
        });

    py::class_<SirParams>(m, "SirParams")
        .def(py::init([](double beta, double gamma, double n_pop, int i0) {
                 SirParams p{beta, gamma, n_pop, i0};
                 p.validate();
                 return p;
             }),
             py::arg("beta"), py::arg("gamma"), py::arg("n_pop"), py::arg("i0") = 1)
        .def_readwrite("beta", &SirParams::beta)
        .def_readwrite("gamma", &SirParams::gamma)
        .def_readwrite("n_pop", &SirParams::n_pop)
        .def_readwrite("i0", &SirParams::i0)
        .def("__repr__", [](const SirParams& p) {
            return "SirParams(beta=" + std::to_string(p.beta) +
                   ", gamma=" + std::to_string(p.gamma) + ", n_pop=" + std::to_string(p.n_pop) +
                   ", i0=" + std::to_string(p.i0) + ")";
        });

    py::enum_<SirEventKind>(m, "SirEventKind")
        .value("INFECTION", SirEventKind::Infection)
        .value("RECOVERY", SirEventKind::Recovery);

    py::class_<SirEvent>(m, "SirEvent")
        .def_readonly("time", &SirEvent::time)
        .def_readonly("kind", &SirEvent::kind);

    py::class_<SirRealization>(m, "SirRealization")
        .def_readonly("events", &SirRealization::events)
        .def_readonly("i0", &SirRealization::i0)
        .def_readonly("n_pop", &SirRealization::n_pop)
        .def("infection_times", &SirRealization::infection_times)
        .def("recovery_times", &SirRealization::recovery_times)
        .def("as_cascade", &SirRealization::as_cascade)
        .def("__len__", [](const SirRealization& r) { return r.events.size(); });

    py::class_<SirTrajectory>(m, "SirTrajectory")
        .def_readonly("t", &SirTrajectory::t)
        .def_readonly("s", &SirTrajectory::s)
        .def_readonly("i", &SirTrajectory::i)
        .def_readonly("r", &SirTrajectory::r);

    py::class_<SizeDistribution>(m, "SizeDistribution")
        .def_readonly("p", &SizeDistribution::p)
        .def_readonly("residual_mass", &SizeDistribution::residual_mass)
        .def("mean", &SizeDistribution::mean)
        .def("variance", &SizeDistribution::variance)
        .def("total", &SizeDistribution::total)
        .def("smoothed_modes", &SizeDistribution::smoothed_modes);

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("kappa_min", &FitConfig::kappa_min)
        .def_readwrite("kappa_max", &FitConfig::kappa_max)
        .def_readwrite("theta_min", &FitConfig::theta_min)
        .def_readwrite("theta_max", &FitConfig::theta_max)
        .def_readwrite("eta_min", &FitConfig::eta_min)
        .def_readwrite("alpha", &FitConfig::alpha)
        .def_readwrite("n_max", &FitConfig::n_max)
        .def_readwrite("beta_min", &FitConfig::beta_min)
        .def_readwrite("beta_max", &FitConfig::beta_max)
        .def_readwrite("gamma_min", &FitConfig::gamma_min)
        .def_readwrite("gamma_max", &FitConfig::gamma_max)
        .def_readwrite("starts", &FitConfig::starts)
        .def_readwrite("tol", &FitConfig::tol)
        .def_readwrite("max_iterations", &FitConfig::max_iterations)
        .def_readwrite("start_seed", &FitConfig::start_seed);

    py::enum_<NVerdict>(m, "NVerdict")
        .value("VALID_N", NVerdict::ValidN)
        .value("NO_VALID_N", NVerdict::NoValidN)
        .value("NOT_APPLICABLE", NVerdict::NotApplicable);

    py::class_<StartDiagnostic>(m, "StartDiagnostic")
        .def_readonly("x0", &StartDiagnostic::x0)
        .def_readonly("log_likelihood", &StartDiagnostic::log_likelihood)
        .def_readonly("iterations", &StartDiagnostic::iterations)
        .def_readonly("converged", &StartDiagnostic::converged);

    py::class_<FitReport>(m, "FitReport")
        .def_property_readonly("params",
                               [](const FitReport& r) -> py::object {
                                   if (std::holds_alternative<HawkesNParams>(r.params))
                                       return py::cast(r.hawkesn_params());
                                   return py::cast(r.sir_params());
                               })
        .def_readonly("log_likelihood", &FitReport::log_likelihood)
        .def_readonly("starts", &FitReport::starts)
        .def_readonly("best_start", &FitReport::best_start)
        .def_readonly("converged", &FitReport::converged)
        .def_readonly("verdict", &FitReport::verdict)
        .def_readonly("statistic_s", &FitReport::statistic_s)
        .def_readonly("fixed_n", &FitReport::fixed_n)
        .def_readonly("start_seed", &FitReport::start_seed)
        .def("to_json", [](const FitReport& r) { return fit_report_to_json(r); });

    // cascade model
    m.def("load_cascade", &load_cascade, py::arg("path"), py::arg("has_marks") = false);
    m.def("save_cascade", &save_cascade, py::arg("cascade"), py::arg("path"));
    m.def("split_cascade", [](const Cascade& c, double fraction) {
        const auto sp = split_cascade(c, fraction);
        return py::make_tuple(sp.observed, sp.holdout);
    }, py::arg("cascade"), py::arg("fraction"));
    m.def("load_sir_realization", &load_sir_realization, py::arg("path"), py::arg("i0"),
          py::arg("n_pop") = std::nullopt);
    m.def("save_sir_realization", &save_sir_realization, py::arg("realization"), py::arg("path"));

    // hawkesn process
    m.def("kernel", &kernel, py::arg("params"), py::arg("tau"), py::arg("mark") = 1.0);
    m.def("intensity", &intensity, py::arg("params"), py::arg("cascade"), py::arg("t"));
    m.def("compensator", &compensator, py::arg("params"), py::arg("cascade"), py::arg("t_end"));
    m.def("log_likelihood", &log_likelihood, py::arg("params"), py::arg("cascade"),
          py::arg("conditioned") = 1);
    m.def("simulate",
          [](const HawkesNParams& p, std::uint64_t seed, std::optional<double> t_max,
             std::size_t n_seeds, std::optional<double> seed_mark) {
              SimulateOptions opts;
              opts.t_max = t_max;
              opts.n_seeds = n_seeds;
              opts.seed_mark = seed_mark;
              return simulate(p, seed, opts);
          },
          py::arg("params"), py::arg("seed"), py::arg("t_max") = std::nullopt,
          py::arg("n_seeds") = 1, py::arg("seed_mark") = std::nullopt);
    m.def("branching_factor", &branching_factor, py::arg("params"));

    // sir process
    m.def("rates", [](const SirParams& p, long s, long i) {
        const auto r = rates(p, SirState{s, i});
        return py::make_tuple(r.infection, r.recovery);
    }, py::arg("params"), py::arg("s"), py::arg("i"));
    m.def("simulate_stochastic", &simulate_stochastic, py::arg("params"), py::arg("seed"));
    m.def("simulate_deterministic", &simulate_deterministic, py::arg("params"), py::arg("dt"),
          py::arg("t_max"));
    m.def("log_likelihood_stochastic", &log_likelihood_stochastic, py::arg("params"),
          py::arg("realization"));
    m.def("fit_deterministic",
          [](const std::vector<double>& t, const std::vector<double>& c, int i0) {
              BinnedCounts obs{t, c};
              const auto fit = fit_deterministic(obs, i0);
              return py::make_tuple(fit.params, fit.sse, fit.converged);
          },
          py::arg("t"), py::arg("c"), py::arg("i0"));
    m.def("bin_cascade_counts", [](const Cascade& c, std::size_t bins) {
        const auto b = bin_cascade_counts(c, bins);
        return py::make_tuple(b.t, b.c);
    }, py::arg("cascade"), py::arg("bins"));
    m.def("final_size_deterministic", &final_size_deterministic, py::arg("params"));
    m.def("basic_reproduction_number", &basic_reproduction_number, py::arg("params"));

    // equivalence
    m.def("sir_to_hawkesn", &sir_to_hawkesn, py::arg("params"));
    m.def("hawkesn_to_sir", &hawkesn_to_sir, py::arg("params"), py::arg("i0") = 1);
    m.def("expected_infection_rate", &expected_infection_rate, py::arg("params"),
          py::arg("infection_times"), py::arg("t"));
    m.def("expected_infected_count", &expected_infected_count, py::arg("gamma"),
          py::arg("observed_times"), py::arg("t_l"));

    // size distribution
    m.def("transition_probabilities", [](const SirParams& p, long s, long i) {
        return transition_probabilities(p, SirState{s, i});
    }, py::arg("params"), py::arg("s"), py::arg("i"));
    m.def("final_size_distribution",
          [](const SirParams& p, long s, long i, long max_n) {
              return final_size_distribution(p, SirState{s, i}, ChainConfig{max_n, 1e-12});
          },
          py::arg("params"), py::arg("s"), py::arg("i"), py::arg("max_n") = 5000);
    m.def("apriori_distribution",
          [](const HawkesNParams& p, long max_n) {
              return apriori_distribution(p, ChainConfig{max_n, 1e-12});
          },
          py::arg("params"), py::arg("max_n") = 5000);
    m.def("aposteriori_distribution",
          [](const HawkesNParams& p, const Cascade& c, long max_n) {
              return aposteriori_distribution(p, c, ChainConfig{max_n, 1e-12});
          },
          py::arg("params"), py::arg("cascade"), py::arg("max_n") = 5000);

    // estimation
    m.def("fit_hawkesn", &fit_hawkesn, py::arg("cascade"), py::arg("config") = FitConfig{},
          py::arg("fixed_n") = std::nullopt, py::arg("conditioned") = 1);
    m.def("dll_dn", &dll_dn, py::arg("params"), py::arg("cascade"), py::arg("conditioned") = 1);
    m.def("n_statistic", &n_statistic, py::arg("kappa"), py::arg("theta"), py::arg("cascade"));
    m.def("find_n_root",
          [](double kappa, double theta, const Cascade& c, double n_max, int intervals) {
              return find_n_root(kappa, theta, c, n_max, RootScanConfig{intervals, 1e-10});
          },
          py::arg("kappa"), py::arg("theta"), py::arg("cascade"), py::arg("n_max"),
          py::arg("intervals") = 1000);
    m.def("simplified_model_mle", &simplified_model_mle, py::arg("cascade"));
    m.def("fit_sir_stochastic", &fit_sir_stochastic, py::arg("realization"),
          py::arg("config") = FitConfig{}, py::arg("fixed_n") = std::nullopt);
    m.def("holdout_negative_ll", &holdout_negative_ll, py::arg("params"), py::arg("observed"),
          py::arg("holdout"));
}

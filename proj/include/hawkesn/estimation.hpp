#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hawkesn/cascade.hpp"
#include "hawkesn/process.hpp"
#include "hawkesn/sir.hpp"

namespace hawkesn {

struct FitConfig {
    double kappa_min = 1e-6, kappa_max = 1e4;
    double theta_min = 1e-6, theta_max = 1e4;
    double eta_min = 1e-4;                    // eta_max derived from alpha
    double alpha = 2.016;                     // mark power-law exponent (marked fits)
    std::optional<double> n_max;              // default: max(20 n, 1000)
    double beta_min = 1e-6, beta_max = 1e4;   // SIR fits
    double gamma_min = 1e-6, gamma_max = 1e4;
    int starts = 10;                          // 8 random + moments heuristic + bound-centered
    double tol = 1e-8;                        // relative log-likelihood change
    int max_iterations = 500;
    std::uint64_t start_seed = 42;
};

enum class NVerdict { ValidN, NoValidN, NotApplicable };

struct StartDiagnostic {
    std::vector<double> x0;
    double log_likelihood;
    int iterations;
    bool converged;
};

struct FitReport {
    std::variant<HawkesNParams, SirParams> params;
    double log_likelihood = 0.0;
    std::vector<StartDiagnostic> starts;
    int best_start = -1;
    bool converged = false;
    NVerdict verdict = NVerdict::NotApplicable;
    double statistic_s = 0.0;
    std::optional<double> fixed_n;
    std::uint64_t start_seed = 0;

    [[nodiscard]] const HawkesNParams& hawkesn_params() const;
    [[nodiscard]] const SirParams& sir_params() const;
};

/// Multi-start bounded maximization of the HawkesN log-likelihood over
/// {kappa, theta, N} ({kappa, theta, eta, N} when the cascade is marked).
/// fixed_n pins N (infinity fits the plain Hawkes baseline). `conditioned`
/// events at the head of the cascade are treated as given history.
[[nodiscard]] FitReport fit_hawkesn(const Cascade& c, const FitConfig& cfg = {},
                                    std::optional<double> fixed_n = std::nullopt,
                                    std::size_t conditioned = 1);

/// Derivative of the HawkesN log-likelihood with respect to the population
/// size, treated as a real variable. Throws when n_pop < n.
[[nodiscard]] double dll_dn(const HawkesNParams& p, const Cascade& c,
                            std::size_t conditioned = 1);

/// Lower-bound statistic for dll_dn: n(n-1)/2 minus the weighted compensator
/// sum. Positive values certify that the log-likelihood increases in N
/// everywhere, i.e. no finite population size maximizes it.
[[nodiscard]] double n_statistic(double kappa, double theta, const Cascade& c);

struct RootScanConfig {
    int intervals = 1000;
    double rel_tol = 1e-10;
};

/// Bracket-scan of dll_dn over [n, n_max] plus bisection refinement; among
/// multiple roots returns the one with the highest log-likelihood. Empty when
/// the derivative never changes sign (consistent with a positive statistic).
[[nodiscard]] std::optional<double> find_n_root(double kappa, double theta, const Cascade& c,
                                                double n_max, const RootScanConfig& cfg = {});

/// Population-size MLE for the validation model with unit background rate and
/// no kernel (intensity 1 - N_t/N): closed forms for n = 2 and n = 3, numeric
/// root search above that. Empty when no admissible root exists.
[[nodiscard]] std::optional<double> simplified_model_mle(const Cascade& c);

/// Multi-start bounded maximization of the stochastic-SIR likelihood over
/// (beta, gamma, N); i0 comes from the realization context.
[[nodiscard]] FitReport fit_sir_stochastic(const SirRealization& r, const FitConfig& cfg = {},
                                           std::optional<double> fixed_n = std::nullopt);

/// Per-event negative log-likelihood of the holdout suffix under parameters
/// (typically fitted on the observed prefix), with the full history feeding
/// the intensity. +infinity when a holdout event is impossible under the
/// model. Lower is better.
[[nodiscard]] double holdout_negative_ll(const HawkesNParams& hp, const Cascade& observed,
                                         const Cascade& holdout);

}  // namespace hawkesn

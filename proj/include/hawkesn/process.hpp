#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hawkesn/cascade.hpp"

namespace hawkesn {

/// Kernel rate contributed by one past event after elapsed time tau:
/// kappa * theta * exp(-theta tau), scaled by mark^eta in marked mode.
/// Strictly decreasing in tau. Throws on tau < 0.
[[nodiscard]] double kernel(const HawkesNParams& p, double tau, double mark = 1.0);

/// Event-rate function of a cascade under fixed parameters: breakpoints at the
/// event times, piecewise-smooth evaluator between them. Non-negative
/// everywhere, identically zero once the population is exhausted.
struct IntensityTrace {
    std::vector<double> breakpoints;
    std::function<double(double)> value;

    [[nodiscard]] double operator()(double t) const { return value(t); }
};

[[nodiscard]] IntensityTrace make_intensity_trace(HawkesNParams p, Cascade c);

/// Event rate at time t given the cascade history: the population factor
/// (1 - N_t/N) with N_t = #{t_j <= t} times mu plus the kernel sum over
/// t_j < t. Zero once the population is exhausted. Throws when the cascade
/// outgrows n_pop.
[[nodiscard]] double intensity(const HawkesNParams& p, const Cascade& c, double t);

/// Integrated intensity over [0, t_end] for mu = 0, via the closed form of
/// the piecewise integral (population factor constant between events).
/// Throws when t_end precedes the last event.
[[nodiscard]] double compensator(const HawkesNParams& p, const Cascade& c, double t_end);

/// Point-process log-likelihood with mu = 0, conditioned on the first
/// `conditioned` events (they carry no density of their own but drive the
/// kernel sum, the counting process, and the compensator). The default 1
/// conditions on the seed event only. Returns -infinity when some modeled
/// event has zero intensity under the parameters.
[[nodiscard]] double log_likelihood(const HawkesNParams& p, const Cascade& c,
                                    std::size_t conditioned = 1);

struct LogLikGrad {
    double value;
    double d_kappa;
    double d_theta;
    double d_n;      // 0 for infinite population
    double d_eta;    // 0 in unmarked mode
};

[[nodiscard]] LogLikGrad log_likelihood_grad(const HawkesNParams& p, const Cascade& c,
                                             std::size_t conditioned = 1);

struct SimulateOptions {
    std::optional<double> t_max;       // absent: run to exhaustion / negligible rate
    std::size_t n_seeds = 1;           // events injected at t = 0
    std::optional<double> seed_mark;   // marked mode: override for the seeds' sampled marks
};

/// Thinning simulation over the piecewise-decreasing intensity; exact for the
/// exponential kernel. Deterministic given seed; event count never exceeds
/// n_pop; stops once the dominating rate falls below 1e-12.
[[nodiscard]] Cascade simulate(const HawkesNParams& p, std::uint64_t seed,
                               const SimulateOptions& opts = {});

/// Expected offspring of the first event: kappa unmarked,
/// kappa (alpha-1)/(alpha-eta-1) marked. Throws when eta >= alpha - 1.
[[nodiscard]] double branching_factor(const HawkesNParams& p);

}  // namespace hawkesn

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hawkesn/cascade.hpp"

namespace hawkesn {

struct SirState {
    long s = 0;
    long i = 0;
};

struct SirRates {
    double infection;   // beta * s * i / N
    double recovery;    // gamma * i
    [[nodiscard]] double total() const noexcept { return infection + recovery; }
};

[[nodiscard]] SirRates rates(const SirParams& p, const SirState& st);

/// Deterministic compartment sizes on a uniform grid.
struct SirTrajectory {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<double> i;
    std::vector<double> r;

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
};

/// Gillespie (competing exponentials) simulation, run until the infected
/// count hits zero. Deterministic per seed.
[[nodiscard]] SirRealization simulate_stochastic(const SirParams& p, std::uint64_t seed);

/// Fixed-step RK4 integration of dS = -beta S I / N, dI = beta S I / N - gamma I,
/// dR = gamma I from S(0) = N - i0, I(0) = i0, R(0) = 0.
[[nodiscard]] SirTrajectory simulate_deterministic(const SirParams& p, double dt, double t_max);

/// Log-likelihood of an interleaved infection/recovery sequence: for each
/// event, the exponential waiting-time density at the previous state's total
/// rate plus the log transition-class probability. Returns -infinity on an
/// impossible event (infection with s = 0, any event with i = 0).
[[nodiscard]] double log_likelihood_stochastic(const SirParams& p, const SirRealization& r);

struct SirLogLikGrad {
    double value;
    double d_beta;
    double d_gamma;
    double d_n;
};

[[nodiscard]] SirLogLikGrad log_likelihood_stochastic_grad(const SirParams& p,
                                                           const SirRealization& r);

/// Discrete observations for the deterministic-SIR fit: cumulative ever-infected
/// counts C[t] = I[t] + R[t] on a time grid (C[0] counts the i0 seeds).
struct BinnedCounts {
    std::vector<double> t;
    std::vector<double> c;
};

/// Bins a cascade's counting process (seeds included) onto a uniform grid of
/// `bins` intervals spanning [0, last event time].
[[nodiscard]] BinnedCounts bin_cascade_counts(const Cascade& c, std::size_t bins);

struct DeterministicFit {
    SirParams params;
    double sse = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct DeterministicFitConfig {
    double beta_min = 1e-3, beta_max = 50.0;
    double gamma_min = 1e-3, gamma_max = 50.0;
    double n_max_factor = 20.0;   // upper N bound = factor * max observed count
    int starts = 10;
    double tol = 1e-10;
    int max_iterations = 150;
    std::uint64_t start_seed = 42;
};

/// Least-squares fit of (beta, gamma, N) to observed cumulative counts by
/// forward simulation, multi-start; i0 is a known initial condition.
/// N is bounded below by the largest observed count.
[[nodiscard]] DeterministicFit fit_deterministic(const BinnedCounts& observed, int i0,
                                                 const DeterministicFitConfig& cfg = {});

/// Final epidemic size N - S(inf) from the implicit equation
/// S(inf) = N + (N gamma / beta) log(S(inf)/S(0)), solved by bisection.
[[nodiscard]] double final_size_deterministic(const SirParams& p);

[[nodiscard]] double basic_reproduction_number(const SirParams& p);

}  // namespace hawkesn

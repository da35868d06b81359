#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hawkesn/cascade.hpp"
#include "hawkesn/sir.hpp"

namespace hawkesn {

/// Dense enumeration of the bivariate chain states {s, i}, s + i <= N.
class StateSpace {
public:
    explicit StateSpace(long n_pop);

    [[nodiscard]] long n_pop() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept;   // (N+1)(N+2)/2
    [[nodiscard]] std::size_t index(long s, long i) const;

private:
    long n_;
    std::vector<std::size_t> row_offset_;   // per s value
};

/// Probability mass over final cascade sizes 0..N.
struct SizeDistribution {
    std::vector<double> p;        // p[k] = P(final size = k), size N+1
    double residual_mass = 0.0;   // non-absorbing mass left at termination

    [[nodiscard]] std::size_t n_pop() const noexcept { return p.size() - 1; }
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;
    [[nodiscard]] double total() const;
    /// Local maxima of the 3-point moving average (qualitative mode checks).
    [[nodiscard]] std::vector<std::size_t> smoothed_modes() const;
};

/// P(next event is an infection | state) and its complement:
/// beta s / (beta s + N gamma) and N gamma / (beta s + N gamma).
/// Throws for absorbing states (i = 0).
[[nodiscard]] std::pair<double, double> transition_probabilities(const SirParams& p,
                                                                 const SirState& st);

struct ChainConfig {
    long max_n = 5000;               // resource cap on the state space
    double absorb_tol = 1e-12;       // early exit once non-absorbing mass is below this
};

/// Propagates the probability state vector through the sparse transition
/// operator (each state has at most two successors) for at most 2N-1 steps
/// and reads the absorbing mass off as P(final size = N - s).
/// Throws std::length_error when N exceeds the configured cap.
[[nodiscard]] SizeDistribution final_size_distribution(const SirParams& p, const SirState& initial,
                                                       const ChainConfig& cfg = {});

/// Distribution after a single seed event: chain started from {N-1, 1} under
/// the Theorem-1/2 parameter map.
[[nodiscard]] SizeDistribution apriori_distribution(const HawkesNParams& hp,
                                                    const ChainConfig& cfg = {});

/// Distribution after observing the cascade prefix: chain started from
/// {N - l, round(E[i])} with E[i] the expected infectious count at the last
/// observed event, rounded half-up and clamped to [1, l].
[[nodiscard]] SizeDistribution aposteriori_distribution(const HawkesNParams& hp, const Cascade& c,
                                                        const ChainConfig& cfg = {});

}  // namespace hawkesn

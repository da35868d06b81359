#include "hawkesn/size_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkesn/equivalence.hpp"

namespace hawkesn {

StateSpace::StateSpace(long n_pop) : n_(n_pop) {
    if (n_ < 0) throw std::invalid_argument("state space needs n_pop >= 0");
    row_offset_.resize(static_cast<std::size_t>(n_) + 2);
    std::size_t off = 0;
    for (long s = 0; s <= n_; ++s) {
        row_offset_[static_cast<std::size_t>(s)] = off;
        off += static_cast<std::size_t>(n_ - s) + 1;  // i ranges 0..N-s
    }
    row_offset_[static_cast<std::size_t>(n_) + 1] = off;
}

std::size_t StateSpace::size() const noexcept { return row_offset_.back(); }

std::size_t StateSpace::index(long s, long i) const {
    if (s < 0 || i < 0 || s + i > n_) throw std::out_of_range("state outside {s + i <= N}");
    return row_offset_[static_cast<std::size_t>(s)] + static_cast<std::size_t>(i);
}

double SizeDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
    return m;
}

double SizeDistribution::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = static_cast<double>(k) - m;
        v += d * d * p[k];
    }
    return v;
}

double SizeDistribution::total() const {
    double t = 0.0;
    for (double x : p) t += x;
    return t;
}

std::vector<std::size_t> SizeDistribution::smoothed_modes() const {
    const std::size_t n = p.size();
    std::vector<double> sm(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = p[k];
        double cnt = 1.0;
        if (k > 0) { acc += p[k - 1]; cnt += 1.0; }
        if (k + 1 < n) { acc += p[k + 1]; cnt += 1.0; }
        sm[k] = acc / cnt;
    }
    std::vector<std::size_t> modes;
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? sm[k - 1] : -1.0;
        const double right = k + 1 < n ? sm[k + 1] : -1.0;
        if (sm[k] > left && sm[k] > right) modes.push_back(k);
    }
    return modes;
}

std::pair<double, double> transition_probabilities(const SirParams& p, const SirState& st) {
    if (st.i <= 0) throw std::invalid_argument("absorbing state: no transition when i = 0");
    if (st.s < 0) throw std::invalid_argument("negative susceptible count");
    const double bs = p.beta * static_cast<double>(st.s);
    const double ng = p.n_pop * p.gamma;
    return {bs / (bs + ng), ng / (bs + ng)};
}

SizeDistribution final_size_distribution(const SirParams& p, const SirState& initial,
                                         const ChainConfig& cfg) {
    const long n = std::lround(p.n_pop);
    if (n > cfg.max_n)
        throw std::length_error(
            "population " + std::to_string(n) + " exceeds the state-space cap " +
            std::to_string(cfg.max_n) + "; raise ChainConfig::max_n if the O(N^2) memory is acceptable");
    if (initial.s < 0 || initial.i < 0 || initial.s + initial.i > n)
        throw std::invalid_argument("initial state outside the state space");

    const StateSpace space(n);
    std::vector<double> pi(space.size(), 0.0);
    std::vector<double> next(space.size(), 0.0);
    pi[space.index(initial.s, initial.i)] = 1.0;

    // From {s, i}: infection -> {s-1, i+1} w.p. beta s / (beta s + N gamma),
    // recovery -> {s, i-1}. Mass in {s, 0} stays put. The probability of the
    // infection branch does not depend on i.
    const long s_max = initial.s;
    const long c_max = initial.s + initial.i;  // s + i never grows
    const long max_steps = 2 * n - 1;
    for (long step = 0; step < max_steps; ++step) {
        double live = 0.0;
        std::fill(next.begin(), next.end(), 0.0);
        // after `step` transitions at most `step` infections happened
        const long s_lo = std::max(0L, s_max - step);
        for (long s = s_lo; s <= s_max; ++s) {
            const double bs = p.beta * static_cast<double>(s);
            const double p_inf = bs / (bs + p.n_pop * p.gamma);
            const double p_rec = 1.0 - p_inf;
            const std::size_t base = space.index(s, 0);
            next[base] += pi[base];  // absorbed mass carries over
            const long i_hi = std::min(c_max - s, n - s);
            for (long i = 1; i <= i_hi; ++i) {
                const double mass = pi[base + static_cast<std::size_t>(i)];
                if (mass == 0.0) continue;
                live += mass;
                if (s > 0) next[space.index(s - 1, i + 1)] += mass * p_inf;
                next[base + static_cast<std::size_t>(i - 1)] += mass * p_rec;
            }
        }
        pi.swap(next);
        if (live < cfg.absorb_tol) break;
    }

    SizeDistribution dist;
    dist.p.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (long s = 0; s <= s_max; ++s)
        dist.p[static_cast<std::size_t>(n - s)] = pi[space.index(s, 0)];
    for (long s = 0; s <= s_max; ++s) {
        const std::size_t base = space.index(s, 0);
        const long i_hi = std::min(c_max - s, n - s);
        for (long i = 1; i <= i_hi; ++i) dist.residual_mass += pi[base + static_cast<std::size_t>(i)];
    }
    return dist;
}

SizeDistribution apriori_distribution(const HawkesNParams& hp, const ChainConfig& cfg) {
    if (hp.mu != 0.0) throw std::invalid_argument("apriori distribution requires mu = 0");
    const SirParams sp = hawkesn_to_sir(hp, 1);
    const long n = std::lround(sp.n_pop);
    return final_size_distribution(sp, SirState{n - 1, 1}, cfg);
}

SizeDistribution aposteriori_distribution(const HawkesNParams& hp, const Cascade& c,
                                          const ChainConfig& cfg) {
    if (hp.mu != 0.0) throw std::invalid_argument("aposteriori distribution requires mu = 0");
    c.validate(/*require_normalized=*/false);
    const SirParams sp = hawkesn_to_sir(hp, 1);
    const long n = std::lround(sp.n_pop);
    const long l = static_cast<long>(c.size());
    if (l > n) throw std::invalid_argument("observed more events than the population size");
    const double expected_i = expected_infected_count(sp.gamma, c.times, c.times.back());
    const long i_seed = std::clamp(static_cast<long>(std::floor(expected_i + 0.5)), 1L, l);
    return final_size_distribution(sp, SirState{n - l, i_seed}, cfg);
}

}  // namespace hawkesn

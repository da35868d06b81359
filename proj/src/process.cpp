#include "hawkesn/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hawkesn/rng.hpp"

namespace hawkesn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double mark_weight(const HawkesNParams& p, const Cascade& c, std::size_t j) {
    if (!p.marked() || !c.has_marks()) return 1.0;
    return std::pow(c.marks[j], *p.eta);
}

// Population factor once `count` events have occurred.
double pop_factor(const HawkesNParams& p, double count) {
    if (p.infinite_pop()) return 1.0;
    return 1.0 - count / p.n_pop;
}

// Running exponential sums over the event history, updated event by event:
//   s0 = sum_{l<j} w_l e^{-theta (t_j - t_l)}
//   s1 = sum_{l<j} w_l (t_j - t_l) e^{-theta (t_j - t_l)}         (d/dtheta)
//   s2 = sum_{l<j} w_l log(m_l) e^{-theta (t_j - t_l)}            (d/deta)
struct ExpSums {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;

    void advance(double theta, double dt, double w_prev, double logm_prev) {
        const double d = std::exp(-theta * dt);
        s1 = d * (s1 + dt * (s0 + w_prev));
        s2 = d * (s2 + logm_prev * w_prev);
        s0 = d * (s0 + w_prev);
    }
};

}  // namespace

double kernel(const HawkesNParams& p, double tau, double mark) {
    if (tau < 0.0) throw std::invalid_argument("kernel: tau must be >= 0");
    const double w = p.marked() ? std::pow(mark, *p.eta) : 1.0;
    return p.kappa * w * p.theta * std::exp(-p.theta * tau);
}

double intensity(const HawkesNParams& p, const Cascade& c, double t) {
    p.validate();
    const auto n_t = static_cast<double>(
        std::upper_bound(c.times.begin(), c.times.end(), t) - c.times.begin());
    if (!p.infinite_pop() && n_t > p.n_pop)
        throw std::domain_error("intensity: cascade longer than the population");
    double excitation = p.mu;
    for (std::size_t j = 0; j < c.times.size() && c.times[j] < t; ++j)
        excitation += kernel(p, t - c.times[j], c.has_marks() ? c.marks[j] : 1.0);
    return pop_factor(p, n_t) * excitation;
}

// Shared likelihood core. Interval l spans [t_l, t_{l+1}] with t_{n+1} := t_end,
// carrying weight (N - l)/N; the log-intensity sum runs over events after the
// conditioned prefix with lambda(t_j^-) evaluated on the j-1 earlier events
// (index order breaks ties).
static LogLikGrad loglik_core(const HawkesNParams& p, const Cascade& c, std::size_t conditioned,
                              double t_end) {
    p.validate();
    c.validate(/*require_normalized=*/false);
    if (p.mu != 0.0)
        throw std::invalid_argument("log-likelihood requires mu = 0 (cascade mode)");
    if (conditioned < 1) throw std::invalid_argument("at least one conditioning event required");
    const std::size_t n = c.size();
    if (t_end < c.times.back())
        throw std::invalid_argument("t_end precedes the last event");
    const bool marked = p.marked() && c.has_marks();
    const bool fin = !p.infinite_pop();
    const double n_pop = p.n_pop;

    LogLikGrad out{0.0, 0.0, 0.0, 0.0, 0.0};
    double log_sum = 0.0;
    std::size_t modeled = 0;
    double comp = 0.0, comp_th = 0.0, comp_n = 0.0, comp_eta = 0.0;

    ExpSums sums;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
            const double w_prev = mark_weight(p, c, j - 1);
            const double logm_prev = marked ? std::log(c.marks[j - 1]) : 0.0;
            sums.advance(p.theta, c.times[j] - c.times[j - 1], w_prev, logm_prev);
        }
        const std::size_t idx = j + 1;  // 1-based event index
        if (idx > conditioned) {
            const double pf = pop_factor(p, static_cast<double>(idx - 1));
            if (!(pf > 0.0) || !(sums.s0 > 0.0)) {
                out.value = kNegInf;
                return out;
            }
            log_sum += std::log(pf) + std::log(p.kappa * p.theta) + std::log(sums.s0);
            ++modeled;
            out.d_theta += 1.0 / p.theta - sums.s1 / sums.s0;
            if (marked) out.d_eta += sums.s2 / sums.s0;
            if (fin) {
                const double jm1 = static_cast<double>(idx - 1);
                out.d_n += jm1 / (n_pop * (n_pop - jm1));
            }
        }
        // interval [t_j, t_{j+1}] (or [t_n, t_end] for the last event)
        const double t_next = (j + 1 < n) ? c.times[j + 1] : t_end;
        const double dt = t_next - c.times[j];
        if (dt > 0.0) {
            const double w_j = mark_weight(p, c, j);
            const double logm_j = marked ? std::log(c.marks[j]) : 0.0;
            const double b0 = sums.s0 + w_j;
            const double b1 = sums.s1;
            const double b2 = sums.s2 + w_j * logm_j;
            const double l_count = static_cast<double>(j + 1);
            const double wt = pop_factor(p, l_count);
            if (wt <= 0.0) continue;  // population exhausted, no further intensity
            const double em = -std::expm1(-p.theta * dt);  // 1 - e^{-theta dt}
            comp += wt * b0 * em;
            comp_th += wt * (-b1 * em + b0 * dt * std::exp(-p.theta * dt));
            if (fin) comp_n += (l_count / (n_pop * n_pop)) * b0 * em;
            if (marked) comp_eta += wt * b2 * em;
        }
    }

    out.value = log_sum - p.kappa * comp;
    out.d_kappa = static_cast<double>(modeled) / p.kappa - comp;
    out.d_theta += -p.kappa * comp_th;
    if (fin) out.d_n += -p.kappa * comp_n;
    if (marked) out.d_eta += -p.kappa * comp_eta;
    return out;
}

double compensator(const HawkesNParams& p, const Cascade& c, double t_end) {
    // Reuse the core with everything conditioned: value = -compensator.
    const auto g = loglik_core(p, c, c.size(), t_end);
    return -g.value;
}

double log_likelihood(const HawkesNParams& p, const Cascade& c, std::size_t conditioned) {
    return loglik_core(p, c, conditioned, c.times.back()).value;
}

LogLikGrad log_likelihood_grad(const HawkesNParams& p, const Cascade& c,
                               std::size_t conditioned) {
    return loglik_core(p, c, conditioned, c.times.back());
}

Cascade simulate(const HawkesNParams& p, std::uint64_t seed, const SimulateOptions& opts) {
    p.validate();
    if (p.mu != 0.0)
        throw std::invalid_argument("simulate: only mu = 0 with injected seeds is supported");
    if (opts.n_seeds < 1) throw std::invalid_argument("simulate: need at least one seed event");
    if (!p.infinite_pop() && static_cast<double>(opts.n_seeds) > p.n_pop)
        throw std::invalid_argument("simulate: more seeds than population");
    if (opts.seed_mark && *opts.seed_mark < 1.0)
        throw std::invalid_argument("simulate: seed mark must be >= 1");

    Rng rng(seed);
    Cascade c;
    const bool marked = p.marked();
    double excitation = 0.0;  // sum of w_j e^{-theta (t - t_j)} at current time
    for (std::size_t s = 0; s < opts.n_seeds; ++s) {
        c.times.push_back(0.0);
        double w = 1.0;
        if (marked) {
            const double m = opts.seed_mark ? *opts.seed_mark : rng.pareto_mark(p.alpha);
            c.marks.push_back(m);
            w = std::pow(m, *p.eta);
        }
        excitation += w;
    }

    constexpr double kRateFloor = 1e-12;
    double t = 0.0;
    while (true) {
        const double count = static_cast<double>(c.times.size());
        if (!p.infinite_pop() && count >= p.n_pop) break;
        const double rate_ub = pop_factor(p, count) * p.kappa * p.theta * excitation;
        if (rate_ub < kRateFloor) break;
        const double t_cand = t + rng.exponential(rate_ub);
        if (opts.t_max && t_cand > *opts.t_max) break;
        const double decay = std::exp(-p.theta * (t_cand - t));
        excitation *= decay;
        t = t_cand;
        if (rng.uniform() <= decay) {  // lambda(t_cand)/rate_ub == decay
            c.times.push_back(t_cand);
            double w = 1.0;
            if (marked) {
                const double m = rng.pareto_mark(p.alpha);
                c.marks.push_back(m);
                w = std::pow(m, *p.eta);
            }
            excitation += w;
        }
    }
    return c;
}

IntensityTrace make_intensity_trace(HawkesNParams p, Cascade c) {
    p.validate();
    IntensityTrace tr;
    tr.breakpoints = c.times;
    tr.value = [p = std::move(p), c = std::move(c)](double t) { return intensity(p, c, t); };
    return tr;
}

double branching_factor(const HawkesNParams& p) {
    if (!p.marked()) return p.kappa;
    if (!(p.alpha - *p.eta - 1.0 > 0.0))
        throw std::invalid_argument("branching factor undefined: eta >= alpha - 1");
    return p.kappa * (p.alpha - 1.0) / (p.alpha - *p.eta - 1.0);
}

}  // namespace hawkesn

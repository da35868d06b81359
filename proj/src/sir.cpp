#include "hawkesn/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hawkesn/estimation.hpp"
#include "hawkesn/optimize.hpp"
#include "hawkesn/rng.hpp"

namespace hawkesn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

SirRates rates(const SirParams& p, const SirState& st) {
    if (st.s < 0 || st.i < 0) throw std::invalid_argument("rates: negative state");
    const double s = static_cast<double>(st.s);
    const double i = static_cast<double>(st.i);
    return {p.beta * s * i / p.n_pop, p.gamma * i};
}

SirRealization simulate_stochastic(const SirParams& p, std::uint64_t seed) {
    p.validate();
    Rng rng(seed);
    SirRealization r;
    r.i0 = p.i0;
    r.n_pop = p.n_pop;
    SirState st{static_cast<long>(std::llround(p.n_pop)) - p.i0, p.i0};
    double t = 0.0;
    while (st.i > 0) {
        const SirRates rt = rates(p, st);
        t += rng.exponential(rt.total());
        if (rng.uniform() * rt.total() < rt.infection) {
            r.events.push_back({t, SirEventKind::Infection});
            --st.s;
            ++st.i;
        } else {
            r.events.push_back({t, SirEventKind::Recovery});
            --st.i;
        }
    }
    return r;
}

SirTrajectory simulate_deterministic(const SirParams& p, double dt, double t_max) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const double n = p.n_pop;
    double s = n - static_cast<double>(p.i0);
    double i = static_cast<double>(p.i0);
    double r = 0.0;

    const auto deriv = [&](double sv, double iv, double& ds, double& di, double& dr) {
        const double inf = p.beta * sv * iv / n;
        ds = -inf;
        di = inf - p.gamma * iv;
        dr = p.gamma * iv;
    };

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt));
    SirTrajectory tr;
    tr.t.reserve(steps + 1);
    tr.s.reserve(steps + 1);
    tr.i.reserve(steps + 1);
    tr.r.reserve(steps + 1);
    tr.t.push_back(0.0);
    tr.s.push_back(s);
    tr.i.push_back(i);
    tr.r.push_back(r);
    double t = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_max - t);
        double ds1, di1, dr1, ds2, di2, dr2, ds3, di3, dr3, ds4, di4, dr4;
        deriv(s, i, ds1, di1, dr1);
        deriv(s + 0.5 * h * ds1, i + 0.5 * h * di1, ds2, di2, dr2);
        deriv(s + 0.5 * h * ds2, i + 0.5 * h * di2, ds3, di3, dr3);
        deriv(s + h * ds3, i + h * di3, ds4, di4, dr4);
        s += h / 6.0 * (ds1 + 2.0 * ds2 + 2.0 * ds3 + ds4);
        i += h / 6.0 * (di1 + 2.0 * di2 + 2.0 * di3 + di4);
        r += h / 6.0 * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4);
        t += h;
        tr.t.push_back(t);
        tr.s.push_back(s);
        tr.i.push_back(i);
        tr.r.push_back(r);
    }
    return tr;
}

// Walks the realization's state sequence; each event contributes the
// waiting-time density at the previous state's (piecewise constant) total
// rate and the transition-class probability.
SirLogLikGrad log_likelihood_stochastic_grad(const SirParams& p, const SirRealization& r) {
    r.validate();
    SirLogLikGrad out{0.0, 0.0, 0.0, 0.0};
    if (r.events.empty()) return out;
    if (r.i0 < 1) {
        out.value = kNegInf;
        return out;
    }

    const double n = p.n_pop;
    const double beta = p.beta;
    const double gamma = p.gamma;
    double c = static_cast<double>(r.i0);  // ever-infected count, defines s = N - c
    double i = static_cast<double>(r.i0);
    double t_prev = 0.0;
    for (const auto& e : r.events) {
        const double s = n - c;
        if (i <= 0.0 || s < 0.0) {
            out.value = kNegInf;
            return out;
        }
        const double q = beta * s / n + gamma;  // total rate / i
        const double total = i * q;
        const double dt = e.time - t_prev;
        out.value += std::log(total) - total * dt;
        const double dq_beta = s / n;
        const double dq_gamma = 1.0;
        const double dq_n = beta * (n - s) / (n * n);  // ds/dN = 1
        out.d_beta += (1.0 / q - i * dt) * dq_beta;
        out.d_gamma += (1.0 / q - i * dt) * dq_gamma;
        out.d_n += (1.0 / q - i * dt) * dq_n;

        const double denom = beta * s + n * gamma;
        if (e.kind == SirEventKind::Infection) {
            if (s <= 0.0) {
                out.value = kNegInf;
                return out;
            }
            out.value += std::log(beta * s) - std::log(denom);
            out.d_beta += 1.0 / beta - s / denom;
            out.d_gamma += -n / denom;
            out.d_n += 1.0 / s - (beta + gamma) / denom;
            c += 1.0;
            i += 1.0;
        } else {
            out.value += std::log(n * gamma) - std::log(denom);
            out.d_beta += -s / denom;
            out.d_gamma += 1.0 / gamma - n / denom;
            out.d_n += 1.0 / n - (beta + gamma) / denom;
            i -= 1.0;
        }
        t_prev = e.time;
    }
    return out;
}

double log_likelihood_stochastic(const SirParams& p, const SirRealization& r) {
    return log_likelihood_stochastic_grad(p, r).value;
}

BinnedCounts bin_cascade_counts(const Cascade& c, std::size_t bins) {
    if (c.empty()) throw std::invalid_argument("cannot bin an empty cascade");
    if (bins < 1) throw std::invalid_argument("need at least one bin");
    const double t_end = c.times.back();
    BinnedCounts out;
    out.t.reserve(bins + 1);
    out.c.reserve(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(bins);
        out.t.push_back(t);
        out.c.push_back(static_cast<double>(
            std::upper_bound(c.times.begin(), c.times.end(), t) - c.times.begin()));
    }
    return out;
}

namespace {

// Sum of squared errors between observed counts and the forward-simulated
// cumulative infected series C(t) = N - S(t).
double binned_sse(const BinnedCounts& obs, int i0, double beta, double gamma, double n) {
    const double t_max = obs.t.back();
    if (t_max <= 0.0) return 0.0;
    // coarser than the public integrator default: the SSE surface tolerates it
    const double dt = std::max(std::min(0.1 / gamma, t_max / 200.0), t_max / 5000.0);
    SirParams p{beta, gamma, n, i0};
    const SirTrajectory tr = simulate_deterministic(p, dt, t_max);
    double sse = 0.0;
    std::size_t k = 0;
    for (std::size_t b = 0; b < obs.t.size(); ++b) {
        while (k + 1 < tr.t.size() && tr.t[k + 1] <= obs.t[b]) ++k;
        // linear interpolation between grid points
        double c_pred;
        if (k + 1 < tr.t.size() && tr.t[k + 1] > tr.t[k]) {
            const double w = (obs.t[b] - tr.t[k]) / (tr.t[k + 1] - tr.t[k]);
            const double s_interp = tr.s[k] + w * (tr.s[k + 1] - tr.s[k]);
            c_pred = n - s_interp;
        } else {
            c_pred = n - tr.s[k];
        }
        const double res = c_pred - obs.c[b];
        sse += res * res;
    }
    return std::isfinite(sse) ? sse : 1e30;
}

}  // namespace

DeterministicFit fit_deterministic(const BinnedCounts& observed, int i0,
                                   const DeterministicFitConfig& cfg) {
    if (observed.t.size() != observed.c.size() || observed.t.empty())
        throw std::invalid_argument("inconsistent binned observations");
    const double c_max = *std::max_element(observed.c.begin(), observed.c.end());
    const double n_lo = std::max(c_max, static_cast<double>(i0));
    const double n_hi = std::max(cfg.n_max_factor * n_lo, n_lo + 1.0);

    // Optimize in log space; bounds become a plain box.
    opt::Box box{{std::log(cfg.beta_min), std::log(cfg.gamma_min), std::log(n_lo)},
                 {std::log(cfg.beta_max), std::log(cfg.gamma_max), std::log(n_hi)}};
    const auto objective = [&](const std::vector<double>& x) {
        return binned_sse(observed, i0, std::exp(x[0]), std::exp(x[1]), std::exp(x[2]));
    };
    const auto fg = opt::with_numeric_gradient(objective);

    Rng rng(cfg.start_seed);
    DeterministicFit best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int s = 0; s < cfg.starts; ++s) {
        std::vector<double> x0(3);
        if (s == 0) {
            // moments start: growth scale from the half-count time, N slightly above c_max
            x0 = {std::log(1.0), std::log(0.5), std::log(std::min(1.5 * c_max + 1.0, n_hi))};
        } else if (s == 1) {
            for (std::size_t d = 0; d < 3; ++d) x0[d] = 0.5 * (box.lo[d] + box.hi[d]);
        } else {
            for (std::size_t d = 0; d < 3; ++d) x0[d] = rng.uniform(box.lo[d], box.hi[d]);
        }
        opt::MinimizeOptions mopts;
        mopts.f_tol = cfg.tol;
        mopts.max_iterations = cfg.max_iterations;
        const auto res = opt::minimize(fg, x0, box, mopts);
        if (res.f < best.sse) {
            best.sse = res.f;
            best.params = SirParams{std::exp(res.x[0]), std::exp(res.x[1]), std::exp(res.x[2]), i0};
            best.converged = res.converged;
            best.iterations = res.iterations;
        }
    }
    return best;
}

double final_size_deterministic(const SirParams& p) {
    p.validate();
    const double n = p.n_pop;
    const double s0 = n - static_cast<double>(p.i0);
    if (s0 <= 0.0) return n;  // everyone already infected
    const double ratio = n * p.gamma / p.beta;
    const auto g = [&](double s) { return s - n - ratio * std::log(s / s0); };
    double lo = 1e-12 * n;
    double hi = s0;
    // g(lo) > 0 (log term dominates), g(s0) = -i0 < 0
    for (int it = 0; it < 200 && hi - lo > 1e-15 * n; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return n - 0.5 * (lo + hi);
}

double basic_reproduction_number(const SirParams& p) { return p.beta / p.gamma; }

}  // namespace hawkesn

#include "hawkesn/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hawkesn/optimize.hpp"
#include "hawkesn/rng.hpp"

namespace hawkesn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MultiStartOutcome {
    std::vector<double> x;
    double ll = -kInf;
    std::vector<StartDiagnostic> starts;
    int best = -1;
    bool converged = false;
};

// Maximizes `ll` (value + gradient in the working coordinates) from the given
// start points; ties resolved toward the lowest start index.
MultiStartOutcome run_multistart(const opt::ObjectiveGrad& neg_ll,
                                 const std::vector<std::vector<double>>& starts,
                                 const opt::Box& box, const FitConfig& cfg) {
    MultiStartOutcome out;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        opt::MinimizeOptions mopts;
        mopts.f_tol = cfg.tol;
        mopts.max_iterations = cfg.max_iterations;
        const auto res = opt::minimize(neg_ll, starts[s], box, mopts);
        out.starts.push_back({starts[s], -res.f, res.iterations, res.converged});
        if (s == 0 || -res.f > out.ll) {
            out.ll = -res.f;
            out.x = res.x;
            out.best = static_cast<int>(s);
            out.converged = res.converged;
        }
    }
    if (!std::isfinite(out.ll)) out.converged = false;  // no start found a finite objective
    return out;
}

std::vector<std::vector<double>> build_starts(const opt::Box& box,
                                              const std::vector<double>& moments, int count,
                                              std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("need at least one start");
    std::vector<std::vector<double>> starts;
    starts.push_back(box.clamp(moments));
    if (count > 1) {
        std::vector<double> center(box.lo.size());
        for (std::size_t d = 0; d < center.size(); ++d) center[d] = 0.5 * (box.lo[d] + box.hi[d]);
        starts.push_back(std::move(center));
    }
    Rng rng(seed);
    while (static_cast<int>(starts.size()) < count) {
        std::vector<double> x(box.lo.size());
        for (std::size_t d = 0; d < x.size(); ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
        starts.push_back(std::move(x));
    }
    return starts;
}

}  // namespace

const HawkesNParams& FitReport::hawkesn_params() const {
    return std::get<HawkesNParams>(params);
}

const SirParams& FitReport::sir_params() const { return std::get<SirParams>(params); }

FitReport fit_hawkesn(const Cascade& c, const FitConfig& cfg, std::optional<double> fixed_n,
                      std::size_t conditioned) {
    c.validate(/*require_normalized=*/false);
    const std::size_t n = c.size();
    if (n < 2 || n <= conditioned)
        throw std::invalid_argument("need at least one event beyond the conditioning prefix");
    if (c.duration() <= 0.0)
        throw std::domain_error("degenerate cascade: all event times identical");
    const bool marked = c.has_marks();
    const bool fit_n = !fixed_n.has_value();
    const double n_events = static_cast<double>(n);
    const double n_max = cfg.n_max.value_or(std::max(20.0 * n_events, 1000.0));
    if (fit_n && n_max <= n_events)
        throw std::invalid_argument("n_max must exceed the event count");
    const double eta_max = cfg.alpha - 1.0 - 1e-6;

    // working coordinates: log kappa, log theta [, log eta][, log N]
    opt::Box box{{std::log(cfg.kappa_min), std::log(cfg.theta_min)},
                 {std::log(cfg.kappa_max), std::log(cfg.theta_max)}};
    if (marked) {
        box.lo.push_back(std::log(cfg.eta_min));
        box.hi.push_back(std::log(eta_max));
    }
    if (fit_n) {
        box.lo.push_back(std::log(n_events));
        box.hi.push_back(std::log(n_max));
    }

    const auto to_params = [&](const std::vector<double>& x) {
        HawkesNParams p;
        p.mu = 0.0;
        p.kappa = std::clamp(std::exp(x[0]), cfg.kappa_min, cfg.kappa_max);
        p.theta = std::clamp(std::exp(x[1]), cfg.theta_min, cfg.theta_max);
        std::size_t k = 2;
        p.alpha = cfg.alpha;
        if (marked) p.eta = std::clamp(std::exp(x[k++]), cfg.eta_min, eta_max);
        p.n_pop = fit_n ? std::clamp(std::exp(x[k]), n_events, n_max) : *fixed_n;
        return p;
    };

    const auto neg_ll = [&](const std::vector<double>& x, std::vector<double>& g) {
        const HawkesNParams p = to_params(x);
        const LogLikGrad lg = log_likelihood_grad(p, c, conditioned);
        if (!std::isfinite(lg.value)) {
            std::fill(g.begin(), g.end(), 0.0);
            return kInf;
        }
        g[0] = -lg.d_kappa * p.kappa;
        g[1] = -lg.d_theta * p.theta;
        std::size_t k = 2;
        if (marked) g[k++] = -lg.d_eta * *p.eta;
        if (fit_n) g[k] = -lg.d_n * p.n_pop;
        return -lg.value;
    };

    // moments start: memory from the mean gap, critical branching, N at twice
    // the observed count
    std::vector<double> moments{std::log(1.0),
                                std::log(n_events > 1 ? (n_events - 1.0) / c.duration() : 1.0)};
    if (marked) moments.push_back(std::log(std::min(0.5 * (cfg.alpha - 1.0), eta_max)));
    if (fit_n) moments.push_back(std::log(std::min(2.0 * n_events, n_max)));

    const auto starts = build_starts(box, moments, cfg.starts, cfg.start_seed);
    const auto outcome = run_multistart(neg_ll, starts, box, cfg);

    FitReport report;
    HawkesNParams fitted = to_params(outcome.x);
    report.params = fitted;
    report.log_likelihood = log_likelihood(fitted, c, conditioned);
    report.starts = outcome.starts;
    report.best_start = outcome.best;
    report.converged = outcome.converged;
    report.fixed_n = fixed_n;
    report.start_seed = cfg.start_seed;
    report.statistic_s = n_statistic(fitted.kappa, fitted.theta, c);
    if (fixed_n)
        report.verdict = NVerdict::NotApplicable;
    else
        report.verdict = report.statistic_s > 0.0 ? NVerdict::NoValidN : NVerdict::ValidN;
    return report;
}

double dll_dn(const HawkesNParams& p, const Cascade& c, std::size_t conditioned) {
    if (p.infinite_pop()) return 0.0;
    if (p.n_pop < static_cast<double>(c.size()))
        throw std::invalid_argument("dll_dn requires n_pop >= event count");
    return log_likelihood_grad(p, c, conditioned).d_n;
}

double n_statistic(double kappa, double theta, const Cascade& c) {
    c.validate(/*require_normalized=*/false);
    const std::size_t n = c.size();
    const double n_d = static_cast<double>(n);
    // sum_l l * kappa * B_l * (1 - e^{-theta (t_{l+1} - t_l)}),
    // B_l = sum_{j<=l} e^{-theta (t_l - t_j)} (unmarked weights)
    double b = 1.0;
    double weighted = 0.0;
    for (std::size_t l = 1; l < n; ++l) {
        const double dt = c.times[l] - c.times[l - 1];
        weighted += static_cast<double>(l) * kappa * b * (-std::expm1(-theta * dt));
        b = b * std::exp(-theta * dt) + 1.0;
    }
    return 0.5 * n_d * (n_d - 1.0) - weighted;
}

std::optional<double> find_n_root(double kappa, double theta, const Cascade& c, double n_max,
                                  const RootScanConfig& cfg) {
    c.validate(/*require_normalized=*/false);
    const double n = static_cast<double>(c.size());
    if (!(n_max > n)) throw std::invalid_argument("n_max must exceed the event count");

    HawkesNParams p;
    p.kappa = kappa;
    p.theta = theta;
    const auto deriv = [&](double n_pop) {
        p.n_pop = n_pop;
        return log_likelihood_grad(p, c).d_n;
    };

    std::optional<double> best;
    double best_ll = -kInf;
    const double width = (n_max - n) / static_cast<double>(cfg.intervals);
    double x_prev = n;
    double d_prev = deriv(x_prev);
    for (int k = 1; k <= cfg.intervals; ++k) {
        const double x = n + width * static_cast<double>(k);
        const double d = deriv(x);
        if (d_prev * d < 0.0) {
            double lo = x_prev, hi = x;
            double d_lo = d_prev;
            while (hi - lo > cfg.rel_tol * hi) {
                const double mid = 0.5 * (lo + hi);
                const double dm = deriv(mid);
                if (dm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((dm > 0.0) == (d_lo > 0.0)) {
                    lo = mid;
                    d_lo = dm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            p.n_pop = root;
            const double ll = log_likelihood(p, c);
            if (ll > best_ll) {
                best_ll = ll;
                best = root;
            }
        }
        x_prev = x;
        d_prev = d;
    }
    return best;
}

namespace {

// Log-likelihood of the validation model with intensity 1 - N_t/N (unit
// background rate, no kernel).
double simplified_ll(const Cascade& c, double n_pop) {
    double ll = 0.0;
    double t_prev = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double frac = 1.0 - static_cast<double>(j) / n_pop;
        if (!(frac > 0.0)) return -kInf;
        ll += std::log(frac) - frac * (c.times[j] - t_prev);
        t_prev = c.times[j];
    }
    return ll;
}

// d/dN of simplified_ll, scaled by N^2 (same roots, better conditioned):
// sum_j (j-1) [N/(N-j+1) - dt_j]
double simplified_dll_scaled(const Cascade& c, double n_pop) {
    double acc = 0.0;
    double t_prev = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double jm1 = static_cast<double>(j);
        acc += jm1 * (n_pop / (n_pop - jm1) - (c.times[j] - t_prev));
        t_prev = c.times[j];
    }
    return acc;
}

}  // namespace

std::optional<double> simplified_model_mle(const Cascade& c) {
    c.validate(/*require_normalized=*/false);
    const std::size_t n = c.size();
    if (n < 2) return std::nullopt;

    if (n == 2) {
        const double gap = c.times[1] - c.times[0];
        if (!(gap > 1.0 && gap < 2.0)) return std::nullopt;
        return (c.times[0] - c.times[1]) / (1.0 + c.times[0] - c.times[1]);
    }

    if (n == 3) {
        const double a_sum = 2.0 * c.times[2] - c.times[1] - c.times[0];
        const double qa = 3.0 - a_sum;
        const double qb = 3.0 * a_sum - 4.0;
        const double qc = -2.0 * a_sum;
        std::vector<double> candidates;
        if (std::abs(qa) < 1e-12) {
            if (qb != 0.0) candidates.push_back(-qc / qb);
        } else {
            const double disc = a_sum * a_sum + 16.0;
            const double sq = std::sqrt(disc);
            candidates.push_back((-qb + sq) / (2.0 * qa));
            candidates.push_back((-qb - sq) / (2.0 * qa));
        }
        std::optional<double> best;
        double best_ll = -kInf;
        for (double cand : candidates) {
            if (!(cand > 3.0)) continue;
            const double ll = simplified_ll(c, cand);
            if (ll > best_ll) {
                best_ll = ll;
                best = cand;
            }
        }
        return best;
    }

    // numeric root scan for n > 3
    const double n_d = static_cast<double>(n);
    const double n_max = std::max(100.0 * n_d, 1000.0);
    constexpr int intervals = 1000;
    const double width = (n_max - n_d) / intervals;
    std::optional<double> best;
    double best_ll = -kInf;
    double x_prev = n_d + 1e-9 * n_d;
    double d_prev = simplified_dll_scaled(c, x_prev);
    for (int k = 1; k <= intervals; ++k) {
        const double x = n_d + width * k;
        const double d = simplified_dll_scaled(c, x);
        if (d_prev * d < 0.0) {
            double lo = x_prev, hi = x;
            double d_lo = d_prev;
            while (hi - lo > 1e-12 * hi) {
                const double mid = 0.5 * (lo + hi);
                const double dm = simplified_dll_scaled(c, mid);
                if ((dm > 0.0) == (d_lo > 0.0)) {
                    lo = mid;
                    d_lo = dm;
                } else {
                    hi = mid;
                }
            }
            const double root = 0.5 * (lo + hi);
            const double ll = simplified_ll(c, root);
            if (ll > best_ll) {
                best_ll = ll;
                best = root;
            }
        }
        x_prev = x;
        d_prev = d;
    }
    return best;
}

FitReport fit_sir_stochastic(const SirRealization& r, const FitConfig& cfg,
                             std::optional<double> fixed_n) {
    r.validate();
    if (r.events.empty()) throw std::invalid_argument("realization has no events");
    const double c_max = static_cast<double>(r.i0) + static_cast<double>(r.infection_count());
    const bool fit_n = !fixed_n.has_value();
    const double n_lo = c_max;
    const double n_hi = cfg.n_max.value_or(std::max(20.0 * c_max, 1000.0));
    if (fit_n && n_hi <= n_lo) throw std::invalid_argument("n_max must exceed the infected count");

    opt::Box box{{std::log(cfg.beta_min), std::log(cfg.gamma_min)},
                 {std::log(cfg.beta_max), std::log(cfg.gamma_max)}};
    if (fit_n) {
        box.lo.push_back(std::log(n_lo));
        box.hi.push_back(std::log(n_hi));
    }

    const auto to_params = [&](const std::vector<double>& x) {
        SirParams p;
        p.beta = std::clamp(std::exp(x[0]), cfg.beta_min, cfg.beta_max);
        p.gamma = std::clamp(std::exp(x[1]), cfg.gamma_min, cfg.gamma_max);
        p.n_pop = fit_n ? std::clamp(std::exp(x[2]), n_lo, n_hi) : *fixed_n;
        p.i0 = r.i0;
        return p;
    };

    const auto neg_ll = [&](const std::vector<double>& x, std::vector<double>& g) {
        const SirParams p = to_params(x);
        const SirLogLikGrad lg = log_likelihood_stochastic_grad(p, r);
        if (!std::isfinite(lg.value)) {
            std::fill(g.begin(), g.end(), 0.0);
            return kInf;
        }
        g[0] = -lg.d_beta * p.beta;
        g[1] = -lg.d_gamma * p.gamma;
        if (fit_n) g[2] = -lg.d_n * p.n_pop;
        return -lg.value;
    };

    // moments start: exact (beta, gamma) MLE for the fully observed path at a
    // guessed population size
    const double n_guess = fixed_n.value_or(std::min(2.0 * c_max, n_hi));
    double infected_time = 0.0;   // integral of I_t dt
    double contact_time = 0.0;    // integral of S_t I_t / N dt
    {
        double t_prev = 0.0;
        double ci = static_cast<double>(r.i0);
        double ii = static_cast<double>(r.i0);
        for (const auto& e : r.events) {
            const double dt = e.time - t_prev;
            infected_time += ii * dt;
            contact_time += (n_guess - ci) * ii / n_guess * dt;
            if (e.kind == SirEventKind::Infection) {
                ci += 1.0;
                ii += 1.0;
            } else {
                ii -= 1.0;
            }
            t_prev = e.time;
        }
    }
    const double n_inf = static_cast<double>(r.infection_count());
    const double n_rec = static_cast<double>(r.events.size()) - n_inf;
    std::vector<double> moments{
        std::log(contact_time > 0.0 && n_inf > 0.0 ? n_inf / contact_time : 1.0),
        std::log(infected_time > 0.0 && n_rec > 0.0 ? n_rec / infected_time : 0.5)};
    if (fit_n) moments.push_back(std::log(n_guess));

    const auto starts = build_starts(box, moments, cfg.starts, cfg.start_seed);
    const auto outcome = run_multistart(neg_ll, starts, box, cfg);

    FitReport report;
    const SirParams fitted = to_params(outcome.x);
    report.params = fitted;
    report.log_likelihood = log_likelihood_stochastic(fitted, r);
    report.starts = outcome.starts;
    report.best_start = outcome.best;
    report.converged = outcome.converged;
    report.fixed_n = fixed_n;
    report.start_seed = cfg.start_seed;
    report.verdict = NVerdict::NotApplicable;
    report.statistic_s = 0.0;
    return report;
}

double holdout_negative_ll(const HawkesNParams& hp, const Cascade& observed,
                           const Cascade& holdout) {
    if (holdout.empty()) throw std::invalid_argument("holdout is empty");
    observed.validate(/*require_normalized=*/false);
    if (holdout.times.front() < observed.times.back())
        throw std::invalid_argument("holdout must follow the observed prefix");
    if (observed.has_marks() != holdout.has_marks())
        throw std::invalid_argument("mark presence differs between prefix and holdout");

    Cascade full = observed;
    full.times.insert(full.times.end(), holdout.times.begin(), holdout.times.end());
    full.marks.insert(full.marks.end(), holdout.marks.begin(), holdout.marks.end());

    // log-intensity sum over holdout events minus the integral over
    // [t_k, t_end]; the full-history compensator minus the prefix compensator.
    const double cond_ll = log_likelihood(hp, full, observed.size());
    if (!std::isfinite(cond_ll)) return kInf;
    const double prefix_comp = compensator(hp, observed, observed.times.back());
    const double target = cond_ll + prefix_comp;
    return -target / static_cast<double>(holdout.size());
}

}  // namespace hawkesn

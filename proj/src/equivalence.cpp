#include "hawkesn/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hawkesn {

HawkesNParams sir_to_hawkesn(const SirParams& p) {
    p.validate();
    HawkesNParams h;
    h.mu = 0.0;
    h.theta = p.gamma;
    h.kappa = p.beta / p.gamma;
    h.n_pop = p.n_pop;
    return h;
}

SirParams hawkesn_to_sir(const HawkesNParams& p, int i0) {
    p.validate();
    if (p.mu != 0.0)
        throw std::invalid_argument("no SIR counterpart for mu != 0");
    SirParams s;
    s.gamma = p.theta;
    s.beta = p.marked() ? p.kappa * p.theta * (p.alpha - 1.0) / (p.alpha - *p.eta - 1.0)
                        : p.kappa * p.theta;
    s.n_pop = p.n_pop;
    s.i0 = i0;
    return s;
}

double expected_infection_rate(const SirParams& p, const std::vector<double>& infection_times,
                               double t) {
    const auto c_t = static_cast<double>(
        std::upper_bound(infection_times.begin(), infection_times.end(), t) -
        infection_times.begin());
    if (c_t > p.n_pop)
        throw std::domain_error("more infections than population by time t");
    double sum = 0.0;
    for (double tj : infection_times) {
        if (!(tj < t)) break;
        sum += p.beta * std::exp(-p.gamma * (t - tj));
    }
    return (1.0 - c_t / p.n_pop) * sum;
}

double expected_infected_count(double gamma, const std::vector<double>& observed_times,
                               double t_l) {
    double sum = 0.0;
    for (double tj : observed_times) sum += std::exp(-gamma * (t_l - tj));
    return sum;
}

}  // namespace hawkesn

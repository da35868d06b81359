#pragma once

#include <vector>

#include "hawkesn/cascade.hpp"

namespace hawkesn {

/// beta = kappa theta, gamma = theta, population preserved (mu = 0 on the
/// Hawkes side). i0 carried over from the caller's context, default 1.
[[nodiscard]] HawkesNParams sir_to_hawkesn(const SirParams& p);

/// Inverse map; marked parameters fold the mark expectation into beta:
/// beta = kappa theta (alpha-1)/(alpha-eta-1). Throws when mu != 0 or
/// eta >= alpha - 1.
[[nodiscard]] SirParams hawkesn_to_sir(const HawkesNParams& p, int i0 = 1);

/// Rate of new infections after marginalizing recovery times:
/// (1 - C_t/N) sum_{t_j < t} beta exp(-gamma (t - t_j)), with
/// C_t = #{t_j <= t}. Equals the HawkesN intensity under the parameter map.
[[nodiscard]] double expected_infection_rate(const SirParams& p,
                                             const std::vector<double>& infection_times,
                                             double t);

/// Expected number still infectious at t_l given infections at observed_times:
/// sum_j exp(-gamma (t_l - t_j)). Real-valued; rounding happens only at the
/// size-distribution seam.
[[nodiscard]] double expected_infected_count(double gamma,
                                             const std::vector<double>& observed_times,
                                             double t_l);

}  // namespace hawkesn

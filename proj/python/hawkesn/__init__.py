"""Finite-population self-exciting point processes, SIR epidemic models, and
the parameter equivalence between them.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from ._hawkesn import (  # noqa: F401
    Cascade,
    FitConfig,
    FitReport,
    HawkesNParams,
    NVerdict,
    SirEvent,
    SirEventKind,
    SirParams,
    SirRealization,
    SirTrajectory,
    SizeDistribution,
    StartDiagnostic,
    apriori_distribution,
    aposteriori_distribution,
    basic_reproduction_number,
    bin_cascade_counts,
    branching_factor,
    compensator,
    dll_dn,
    expected_infected_count,
    expected_infection_rate,
    final_size_deterministic,
    final_size_distribution,
    find_n_root,
    fit_deterministic,
    fit_hawkesn,
    fit_sir_stochastic,
    holdout_negative_ll,
    intensity,
    kernel,
    load_cascade,
    load_sir_realization,
    log_likelihood,
    log_likelihood_stochastic,
    n_statistic,
    rates,
    save_cascade,
    save_sir_realization,
    simplified_model_mle,
    simulate,
    simulate_deterministic,
    simulate_stochastic,
    sir_to_hawkesn,
    hawkesn_to_sir,
    split_cascade,
    transition_probabilities,
)

__version__ = "0.1.0"

"""Smoke tests for the python bindings: the main operations round-trip and a
few frozen values agree with the C++ suites."""

import math

import pytest

import hawkesn as hk


def test_simulate_and_fit_round_trip():
    p = hk.HawkesNParams(kappa=5.0, theta=0.2, n_pop=100.0)
    c = hk.simulate(p, seed=77)
    assert 2 <= len(c) <= 100
    assert c.times[0] == 0.0

    cfg = hk.FitConfig()
    cfg.starts = 4
    report = hk.fit_hawkesn(c, cfg, 100.0)
    assert report.converged
    assert report.log_likelihood >= hk.log_likelihood(p, c) - 1e-6
    assert report.verdict == hk.NVerdict.NOT_APPLICABLE


def test_kernel_and_branching_values():
    p = hk.HawkesNParams(kappa=5.0, theta=0.2, n_pop=100.0)
    assert hk.kernel(p, 0.0) == pytest.approx(1.0)
    assert hk.branching_factor(p) == 5.0
    marked = hk.HawkesNParams(kappa=1.0, theta=1.0, n_pop=10.0, eta=0.5, alpha=2.016)
    assert hk.branching_factor(marked) == pytest.approx(1.016 / 0.516)


def test_equivalence_identity():
    sp = hk.SirParams(beta=1.0, gamma=0.2, n_pop=1300.0, i0=1)
    hp = hk.sir_to_hawkesn(sp)
    assert hp.kappa == pytest.approx(5.0)
    assert hp.theta == pytest.approx(0.2)

    times = [0.0, 0.4, 1.1, 2.3]
    c = hk.Cascade(times)
    for t in (0.2, 0.5, 1.0, 2.0, 3.5):
        lhs = hk.expected_infection_rate(sp, times, t)
        rhs = hk.intensity(hp, c, t)
        assert abs(lhs - rhs) < 1e-12

    back = hk.hawkesn_to_sir(hp)
    assert back.beta == pytest.approx(sp.beta)
    assert back.gamma == pytest.approx(sp.gamma)


def test_sir_simulation_and_likelihood():
    sp = hk.SirParams(beta=1.0, gamma=0.2, n_pop=50.0, i0=2)
    r = hk.simulate_stochastic(sp, seed=5)
    assert len(r) >= 2
    ll = hk.log_likelihood_stochastic(sp, r)
    assert math.isfinite(ll)

    single = hk.simulate_stochastic(hk.SirParams(beta=1e-12, gamma=0.2, n_pop=2.0, i0=1), seed=1)
    assert len(single.infection_times()) == 0

    assert hk.basic_reproduction_number(sp) == pytest.approx(5.0)
    assert hk.final_size_deterministic(
        hk.SirParams(beta=1.0, gamma=0.2, n_pop=1300.0, i0=300)
    ) == pytest.approx(1293.08, abs=0.01)


def test_size_distribution():
    sp = hk.SirParams(beta=1.0, gamma=0.2, n_pop=2.0, i0=1)
    dist = hk.final_size_distribution(sp, s=1, i=1)
    assert dist.p[1] == pytest.approx(0.4 / 1.4)
    assert dist.p[2] == pytest.approx(1.0 / 1.4)

    hp = hk.HawkesNParams(kappa=5.0, theta=0.2, n_pop=100.0)
    apriori = hk.apriori_distribution(hp)
    assert apriori.total() == pytest.approx(1.0, abs=1e-9)
    assert len(apriori.smoothed_modes()) >= 2


def test_statistic_and_split():
    c = hk.Cascade([0.0, 1.0])
    s = hk.n_statistic(5.0, 0.2, c)
    assert s == pytest.approx(1.0 - 5.0 * (1.0 - math.exp(-0.2)))
    assert s > 0.0
    assert hk.find_n_root(5.0, 0.2, c, 1000.0) is None

    big = hk.Cascade([0.1 * j for j in range(100)])
    obs, hold = hk.split_cascade(big, 0.05)
    assert len(obs) == 5
    assert len(hold) == 95


def test_fit_sir_and_holdout():
    sp = hk.SirParams(beta=1.0, gamma=0.2, n_pop=60.0, i0=1)
    r = hk.simulate_stochastic(sp, seed=9)
    cfg = hk.FitConfig()
    cfg.starts = 4
    report = hk.fit_sir_stochastic(r, cfg)
    assert report.converged
    assert report.log_likelihood >= hk.log_likelihood_stochastic(sp, r) - 1e-6

    p = hk.HawkesNParams(kappa=5.0, theta=0.2, n_pop=100.0)
    c = hk.simulate(p, seed=2024)
    obs, hold = hk.split_cascade(c, 0.8)
    nll = hk.holdout_negative_ll(p, obs, hold)
    assert math.isfinite(nll)


def test_file_round_trip(tmp_path):
    p = hk.HawkesNParams(kappa=3.0, theta=0.5, n_pop=40.0)
    c = hk.simulate(p, seed=11)
    path = str(tmp_path / "c.csv")
    hk.save_cascade(c, path)
    back = hk.load_cascade(path)
    assert list(back.times) == list(c.times)

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hawkesn/equivalence.hpp"
#include "hawkesn/process.hpp"
#include "hawkesn/sir.hpp"
#include "oracles.hpp"

using namespace hawkesn;

TEST_CASE("parameter maps") {
    const SirParams sp{1.0, 0.2, 1300, 1};
    const auto hp = sir_to_hawkesn(sp);
    CHECK(hp.mu == 0.0);
    CHECK(hp.kappa == doctest::Approx(5.0));
    CHECK(hp.theta == doctest::Approx(0.2));
    CHECK(hp.n_pop == 1300.0);

    const auto back = hawkesn_to_sir(hp);
    CHECK(back.beta == doctest::Approx(1.0));
    CHECK(back.gamma == doctest::Approx(0.2));
    CHECK(back.n_pop == 1300.0);

    // critical map: beta = gamma gives kappa = 1
    for (double x : {0.1, 1.0, 7.0})
        CHECK(sir_to_hawkesn(SirParams{x, x, 50, 1}).kappa == doctest::Approx(1.0));

    HawkesNParams bad;
    bad.mu = 0.5;
    bad.kappa = 1;
    bad.theta = 1;
    bad.n_pop = 10;
    CHECK_THROWS_AS(hawkesn_to_sir(bad), std::invalid_argument);
}

TEST_CASE("marked map folds the mark expectation into beta") {
    HawkesNParams hp;
    hp.kappa = 1.0;
    hp.theta = 1.0;
    hp.n_pop = 100;
    hp.eta = 0.5;
    hp.alpha = 2.016;
    const auto sp = hawkesn_to_sir(hp);
    CHECK(sp.beta == doctest::Approx(1.016 / 0.516).epsilon(1e-12));
    CHECK(sp.gamma == doctest::Approx(1.0));

    hp.eta = 0.0;
    CHECK(hawkesn_to_sir(hp).beta == doctest::Approx(1.0));

    hp.eta = 1.5;
    CHECK_THROWS_AS(hawkesn_to_sir(hp), std::invalid_argument);
}

TEST_CASE("map round-trip is the identity") {
    Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        const SirParams sp{rng.uniform(0.05, 4.0), rng.uniform(0.05, 2.0),
                           std::floor(rng.uniform(2.0, 5000.0)), 1};
        const auto back = hawkesn_to_sir(sir_to_hawkesn(sp));
        CHECK(back.beta == doctest::Approx(sp.beta).epsilon(1e-12));
        CHECK(back.gamma == doctest::Approx(sp.gamma).epsilon(1e-12));
        CHECK(back.n_pop == sp.n_pop);
    }
}

TEST_CASE("expected infection rate equals the HawkesN intensity under the map") {
    Rng rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        const SirParams sp{rng.uniform(0.1, 3.0), rng.uniform(0.05, 1.0),
                           std::floor(rng.uniform(60.0, 500.0)), 1};
        const auto n_events = 1 + rng.next_u64() % 50;
        const auto c = oracle::random_cascade(rng, n_events, rng.uniform(0.5, 3.0));
        const auto hp = sir_to_hawkesn(sp);
        for (int probe = 0; probe < 25; ++probe) {
            const double t = rng.uniform(0.0, c.times.back() + 2.0);
            CHECK(std::abs(expected_infection_rate(sp, c.times, t) - intensity(hp, c, t)) <
                  1e-12);
        }
        // probes exactly on event times share the right-continuous convention
        for (std::size_t j = 0; j < c.size(); j += 5) {
            const double t = c.times[j];
            CHECK(std::abs(expected_infection_rate(sp, c.times, t) - intensity(hp, c, t)) <
                  1e-12);
        }
    }
}

TEST_CASE("expected infection rate edges") {
    const SirParams sp{1.0, 0.2, 100, 1};
    CHECK(expected_infection_rate(sp, {5.0, 6.0}, 2.0) == 0.0);

    // depleted population
    std::vector<double> all(100, 0.0);
    CHECK(expected_infection_rate(sp, all, 1.0) == 0.0);
}

TEST_CASE("expected infected count") {
    CHECK(expected_infected_count(0.7, {3.0}, 3.0) == doctest::Approx(1.0));
    CHECK(expected_infected_count(0.2, {0.0, 1.0}, 1.0) ==
          doctest::Approx(1.0 + std::exp(-0.2)).epsilon(1e-12));
    CHECK(expected_infected_count(0.2, {0.0, 1.0}, 1.0) == doctest::Approx(1.8187).epsilon(1e-4));
    CHECK(expected_infected_count(1e9, {0.0, 1.0, 2.0}, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("branching factor equals the basic reproduction number under the map") {
    Rng rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const SirParams sp{rng.uniform(0.05, 5.0), rng.uniform(0.05, 2.0), 100, 1};
        CHECK(branching_factor(sir_to_hawkesn(sp)) ==
              doctest::Approx(basic_reproduction_number(sp)).epsilon(1e-12));
    }
}

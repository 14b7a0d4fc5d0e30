#include <doctest.h>

#include <cmath>

#include "olg/equilibrium_set.hpp"
#include "olg/errors.hpp"
#include "support.hpp"

using namespace olg;

TEST_CASE("seed grid and kernels") {
    const auto e = fixtures::continuum();
    const auto seeds = seed_grid(e);
    REQUIRE(seeds.size() == 64);
    CHECK(seeds.front() == doctest::Approx(2e-6));
    CHECK(seeds.back() < 2.0);
    for (size_t i = 1; i < seeds.size(); ++i) CHECK(seeds[i] > seeds[i - 1]);
    CHECK(seed_fates(e, seeds, 200, Kernel::Serial) == seed_fates(e, seeds, 200, Kernel::Parallel));
    for (size_t i = 0; i < seeds.size(); i += 9) CHECK(seed_fates(e, seeds, 200, Kernel::Serial)[i] == fate_of(e, seeds[i], 200));
}

TEST_CASE("survival is an interval in a0") {
    const auto e = fixtures::continuum();
    const auto s = survival_interval(e, 200);
    CHECK(s.verified);
    CHECK(s.lower < s.upper);
    for (int k = 1; k < 16; ++k) {
        const double a0 = s.lower + (s.upper - s.lower) * k / 16.0;
        CHECK(fate_of(e, a0, 200) == Fate::Survive);
    }
    CHECK(fate_of(e, s.lower * 0.9, 200) == Fate::Collapse);
    CHECK(fate_of(e, s.upper + 1e-6, 200) == Fate::Hit);
}

TEST_CASE("width shrinks with the horizon when the value of dividends is infinite") {
    // D_t = n^t c with n = 1: sum D_t / n^t diverges, the equilibrium is unique.
    const auto e = fixtures::log_economy(2, 1, SequenceGen::constant(0.01));
    double prev = INFINITY;
    for (long T : {5L, 10L, 20L, 50L}) {
        const auto s = survival_interval(e, T);
        const double w = s.upper - s.lower;
        CHECK(w <= prev);
        prev = w;
    }
    CHECK(prev == 0.0);
}

TEST_CASE("positive width persists in the continuum regime") {
    const auto e = fixtures::continuum();
    double w50 = 0;
    for (long T : {50L, 100L, 200L}) {
        const auto s = survival_interval(e, T);
        if (T == 50) w50 = s.upper - s.lower;
        CHECK(s.upper - s.lower > 0.4);
    }
    CHECK(w50 > 0.4);
}

TEST_CASE("pure bubble: the lower end approaches zero") {
    const auto e = fixtures::log_economy(2, 1, SequenceGen::constant(0));
    const auto r = equilibrium_set(e);
    CHECK(r.lower < 1e-3);
    CHECK(r.upper == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("equilibrium set kinds") {
    const auto tirole = equilibrium_set(fixtures::tirole_economy());
    CHECK(tirole.kind == SetKind::Unique);
    CHECK(tirole.upper == doctest::Approx(0.30).epsilon(1e-3));
    CHECK(tirole.lower == doctest::Approx(0.30).epsilon(1e-3));

    const auto cont = equilibrium_set(fixtures::continuum());
    CHECK(cont.kind == SetKind::Continuum);
    CHECK(cont.upper > cont.lower + 0.1);
    REQUIRE(cont.steady_state);
    CHECK(*cont.steady_state == doctest::Approx(0.5));
    CHECK(cont.rungs.size() == 3);
    CHECK(cont.horizon_used == 800);

    const auto hi = equilibrium_set(fixtures::high_interest());
    CHECK(hi.kind == SetKind::Unique);
    CHECK(hi.upper - hi.lower <= 2 * hi.bracket_width + 2e-12);
}

TEST_CASE("steady state") {
    // 1/(2 - a) = 1/(1 + a)  =>  a = 0.5
    CHECK(steady_state_a_hat(fixtures::continuum()) == doctest::Approx(0.5).epsilon(1e-12));
    // 1/(1 - a) = 1/(0.5 + a)  =>  a = 0.25
    CHECK(steady_state_a_hat(fixtures::tirole_economy()) == doctest::Approx(0.25).epsilon(1e-12));
    // R* = n: the fixed point is a = 0
    CHECK(steady_state_a_hat(fixtures::log_economy(1, 1, SequenceGen::constant(0))) == 0.0);
    CHECK_THROWS_AS(steady_state_a_hat(fixtures::high_interest()), NoPositiveSteadyState);

    auto crra = fixtures::continuum();
    crra.utility = Utility::crra(0.5, 1.0);
    const double a = steady_state_a_hat(crra);
    // u'(e^y - a) = beta n v'(e^o + n a) checked directly
    CHECK(std::pow(2 - a, -0.5) == doctest::Approx(std::pow(1 + a, -0.5)).epsilon(1e-10));
}

TEST_CASE("closed-form reference paths") {
    const auto e = fixtures::tirole_economy();
    const auto p = closed_form_path(e, "tirole-explicit", 200);
    CHECK(p.a[0] == doctest::Approx(0.30));
    CHECK(p.a[1] == doctest::Approx(0.25 + 0.5 / 12.0).epsilon(1e-14));
    CHECK(p.a[200] == doctest::Approx(0.25).epsilon(1e-12));

    const auto q = tirole_quantities(e);
    CHECK(q.rstar == doctest::Approx(0.5));
    CHECK(q.a_inf == doctest::Approx(0.25));
    CHECK(q.d0_bound == doctest::Approx(1.0 / 6.0));

    CHECK_THROWS_AS(tirole_quantities(fixtures::tirole_economy(0.2)), ModelPreconditionFailed);

    const auto z = fixtures::log_economy(1, 0, SequenceGen::constant(0.1));
    const auto zp = closed_form_path(z, "log-no-old-endowment", 30);
    for (double a : zp.a) CHECK(a == 0.5);
    CHECK_THROWS_AS(closed_form_path(fixtures::continuum(), "log-no-old-endowment", 30), ModelPreconditionFailed);
}

TEST_CASE("path ordering across surviving initial values") {
    const auto e = fixtures::continuum();
    const auto s = survival_interval(e, 200);
    SimOptions raw;
    raw.mode = SimMode::Raw;
    const auto lo = simulate(e, s.lower + 0.25 * (s.upper - s.lower), 150, raw);
    const auto hi = simulate(e, s.lower + 0.75 * (s.upper - s.lower), 150, raw);
    REQUIRE(lo.survived());
    REQUIRE(hi.survived());
    for (size_t t = 0; t < lo.a.size(); ++t) {
        CHECK(lo.a[t] < hi.a[t]);
        if (t > 0) CHECK(lo.R[t] <= hi.R[t]);
    }
}

TEST_CASE("surviving sets thinner than the seed spacing are reported as degenerate") {
    // With a dividend larger than the young endowment only a knife-edge a0 survives.
    const auto e = fixtures::log_economy(1, 0.5, SequenceGen::constant(3));
    const auto s = survival_interval(e, 100);
    CHECK(s.seeds_surviving == 0);
    CHECK_FALSE(s.verified);
    CHECK(s.upper - s.lower <= s.resolution);
    CHECK(fate_of(e, s.lower - 2 * s.resolution, 100) == Fate::Collapse);
    CHECK(fate_of(e, s.upper + 2 * s.resolution, 100) == Fate::Hit);
}

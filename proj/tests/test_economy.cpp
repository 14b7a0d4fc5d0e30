#include <doctest.h>

#include <cmath>

#include "olg/economy.hpp"
#include "olg/errors.hpp"
#include "support.hpp"

using namespace olg;

TEST_CASE("constant and geometric sequences") {
    const auto c = SequenceGen::constant(2.5);
    CHECK(c(0) == 2.5);
    CHECK(c(1000) == 2.5);
    CHECK(c.is_constant());

    const auto g = SequenceGen::geometric(0.01, 0.4);
    CHECK(g(0) == doctest::Approx(0.01));
    CHECK(g(3) == doctest::Approx(0.01 * 0.064).epsilon(1e-14));
    // far in the tail the value underflows but the log stays exact
    CHECK(g.log_value(2000) == doctest::Approx(std::log(0.01) + 2000 * std::log(0.4)).epsilon(1e-14));
    CHECK_FALSE(g.is_constant());
}

TEST_CASE("power-law sequence starts at c0 and decays like t^-alpha") {
    const auto p = SequenceGen::power_law(0.1, 1.5);
    CHECK(p(0) == 0.1);
    CHECK(p(1) == doctest::Approx(0.1));
    CHECK(p(4) == doctest::Approx(0.1 / 8.0));
}

TEST_CASE("explicit list tails") {
    const auto rep = SequenceGen::explicit_list({1.0, 2.0, 3.0});
    CHECK(rep(2) == 3.0);
    CHECK(rep(50) == 3.0);
    const auto geo = SequenceGen::explicit_list({1.0, 2.0}, TailRule::GeometricExtrapolate, 0.5);
    CHECK(geo(1) == 2.0);
    CHECK(geo(3) == doctest::Approx(0.5));
    CHECK(SequenceGen::explicit_list({4.0}).is_constant());
}

TEST_CASE("invalid sequences are rejected") {
    CHECK_THROWS_AS(SequenceGen::constant(-1.0), InvalidSequence);
    CHECK_THROWS_AS(SequenceGen::geometric(1.0, 0.0), InvalidSequence);
    CHECK_THROWS_AS(SequenceGen::explicit_list({}), InvalidSequence);
    CHECK_THROWS_AS(SequenceGen::explicit_list({1.0, -2.0}), InvalidSequence);
    CHECK_THROWS_AS(SequenceGen::closed_form("no-such-model", {}), InvalidSequence);
    CHECK_THROWS_AS(SequenceGen::constant(1.0).value(-1), InvalidSequence);
}

TEST_CASE("explicit-model dividend obeys its reciprocal recursion") {
    // With these parameters 1/d_{t+1} = 1.5/d_t - 3.
    const auto d = fixtures::tirole_dividend(0.1, 0.5);
    double inv = 1.0 / 0.1;
    for (long t = 0; t < 60; ++t) {
        CHECK(d(t) == doctest::Approx(1.0 / inv).epsilon(1e-12));
        inv = 1.5 * inv - 3.0;
    }
    CHECK(d(1) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("utility derivatives match central finite differences") {
    const Utility us[] = {Utility::log(0.9), Utility::crra(2.0, 0.95), Utility::crra(0.5, 1.0),
                          Utility::crra2(0.7, 1.3, 0.9)};
    for (const auto& u : us) {
        for (double c = 1e-2; c < 1e2; c *= 1.7) {
            const double h = 1e-5 * c;
            const double fd_upp = (u.up(c + h) - u.up(c - h)) / (2 * h);
            const double fd_vpp = (u.vp(c + h) - u.vp(c - h)) / (2 * h);
            CHECK(u.upp(c) == doctest::Approx(fd_upp).epsilon(1e-6));
            CHECK(u.vpp(c) == doctest::Approx(fd_vpp).epsilon(1e-6));
            const double fd_up = (u.u(c + h) - u.u(c - h)) / (2 * h);
            CHECK(u.up(c) == doctest::Approx(fd_up).epsilon(1e-6));
        }
    }
}

TEST_CASE("utility gains avoid cancellation") {
    const auto u = Utility::crra(2.0, 1.0);
    const double c = 3.0, dc = 1e-13;
    // u(c) = -1/c so u(c+dc) - u(c) = dc / (c (c+dc))
    CHECK(u.u_gain(c, dc) == doctest::Approx(dc / (c * (c + dc))).epsilon(1e-12));
    CHECK(Utility::log(1).v_gain(2.0, 1e-14) == doctest::Approx(std::log1p(0.5e-14)).epsilon(1e-12));
}

TEST_CASE("limit of c v'(c) and its monotonicity by family") {
    CHECK(Utility::log(1).lim_cvp() == 1.0);
    CHECK(std::isinf(Utility::crra(0.5, 1).lim_cvp()));
    CHECK(Utility::crra(2.0, 1).lim_cvp() == 0.0);
    CHECK(Utility::crra(0.5, 1).cvp_nondecreasing());
    CHECK_FALSE(Utility::crra(2.0, 1).cvp_nondecreasing());
}

TEST_CASE("custom utility is validated and sampled") {
    CustomFunctions f;
    f.up = [](double c) { return 1.0 / c; };
    f.upp = [](double c) { return -1.0 / (c * c); };
    f.vp = f.up;
    f.vpp = f.upp;
    CHECK_THROWS_AS(Utility::custom(f, 1.0), InvalidEconomy);
    f.lim_cvp = 1.0;
    const auto u = Utility::custom(f, 1.0);
    CHECK(u.cvp_nondecreasing());
    CHECK(u.marginals_well_behaved());
    CHECK_THROWS_AS(u.u(1.0), NotApplicable);
}

TEST_CASE("per-capita and aggregate dividends") {
    auto e = fixtures::log_economy(2, 1, SequenceGen::constant(0.3), 1.0, 1.1);
    CHECK(e.D(5) == doctest::Approx(0.3));
    CHECK(e.d(5) == doctest::Approx(0.3 / std::pow(1.1, 5)));
    e.basis = DividendBasis::PerCapita;
    CHECK(e.d(5) == doctest::Approx(0.3));
    CHECK(e.D(5) == doctest::Approx(0.3 * std::pow(1.1, 5)));
}

TEST_CASE("aggregate supply is e^y + e^o/n + d") {
    const auto e = fixtures::log_economy(2, 1, SequenceGen::geometric(0.01, 0.5), 1.0, 1.25);
    for (long t : {0L, 3L, 40L})
        CHECK(aggregate_supply(e, t) ==
              doctest::Approx(2.0 + 1.0 / 1.25 + 0.01 * std::pow(0.5 / 1.25, static_cast<double>(t))));
}

TEST_CASE("economy validation") {
    auto e = fixtures::continuum();
    CHECK_NOTHROW(e.validate());
    CHECK(e.stationary_endowments());
    CHECK(e.add_assum());

    auto bad_n = e;
    bad_n.n = 0;
    CHECK_THROWS_AS(bad_n.validate(), InvalidEconomy);

    auto bad_tol = e;
    bad_tol.tol.series_T = 500;
    CHECK_THROWS_AS(bad_tol.validate(), InvalidEconomy);

    auto no_old = fixtures::log_economy(1, 0, SequenceGen::constant(0.1));
    CHECK_FALSE(no_old.old_endowment_positive());
    CHECK_FALSE(no_old.add_assum());

    auto varying = e;
    varying.endow_young = SequenceGen::geometric(2, 1.01);
    CHECK_FALSE(varying.stationary_endowments());

    auto seq_beta = e;
    seq_beta.beta_seq = SequenceGen::explicit_list({0.9, 0.95});
    CHECK(seq_beta.beta(0) == 0.9);
    CHECK(seq_beta.beta(7) == 0.95);
}

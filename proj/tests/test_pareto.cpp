#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "olg/equilibrium_set.hpp"
#include "olg/errors.hpp"
#include "olg/pareto.hpp"
#include "support.hpp"

using namespace olg;

namespace {

EquilibriumPath synthetic(const Economy& e, double a, double R, long T) {
    EquilibriumPath p;
    p.a.assign(static_cast<size_t>(T + 1), a);
    p.R.assign(static_cast<size_t>(T + 1), R);
    p.R[0] = NAN;
    p.horizon = T;
    p.survived_to = T;
    fill_path_quantities(e, p);
    return p;
}

struct Endpoints {
    EquilibriumPath lower, interior, upper;
};

Endpoints continuum_paths(const Economy& e) {
    const auto s = equilibrium_set(e);
    SimOptions snap;
    snap.initial_snap_abs = std::max(2e-12, s.bracket_width);
    SimOptions none;
    return {simulate(e, s.lower, 200, snap), simulate(e, 0.5 * (s.lower + s.upper), 200, none),
            simulate(e, s.upper, 200, snap)};
}

CustomFunctions cara() {
    CustomFunctions f;
    f.up = [](double c) { return std::exp(-c); };
    f.upp = [](double c) { return -std::exp(-c); };
    f.vp = [](double c) { return 1.0 / c; };
    f.vpp = [](double c) { return -1.0 / (c * c); };
    f.lim_cvp = 1.0;
    return f;
}

}  // namespace

TEST_CASE("strictness constant") {
    const auto e = fixtures::continuum();
    const auto p = simulate(e, 0.3, 200);
    CHECK(strictness_constant(e, p) == doctest::Approx(0.5));

    auto crra = e;
    crra.utility = Utility::crra(2.0, 1.0);
    CHECK(strictness_constant(crra, p) >= 1.0 - 1e-9);

    // For u'(c) = e^{-c} the expression is c/2, so a shrinking young consumption drives it to 0.
    auto shrinking = e;
    shrinking.utility = Utility::custom(cara(), 1.0);
    EquilibriumPath q = synthetic(e, 0.3, 1.0, 200);
    for (size_t t = 0; t < q.cy.size(); ++t) q.cy[t] = std::pow(0.97, static_cast<double>(t));
    CHECK(strictness_constant(shrinking, q) < 1e-2);

    // Same custom utility on a path with steady consumption: c/2 sampled over [0.5c, c], min at c.
    EquilibriumPath steady = synthetic(e, 1.0, 1.0, 200);
    CHECK(strictness_constant(shrinking, steady) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("smoothness constants for power utility") {
    const auto e = fixtures::continuum();
    const auto p = simulate(e, 0.3, 200);
    auto s = smoothness_constants(e, p, 0.5);
    CHECK(s.method == "crra-closed-form");
    CHECK(s.theta2 == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(s.theta1 == doctest::Approx(2.0).epsilon(1e-5));

    auto crra = e;
    crra.utility = Utility::crra(2.0, 1.0);
    s = smoothness_constants(crra, p, 0.5);
    CHECK(s.theta2 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s.theta1 == doctest::Approx(8.0).epsilon(1e-5));

    s = smoothness_constants(crra, p, 0.9999);
    CHECK(s.theta1 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Cass criterion") {
    const auto e = fixtures::log_economy(2, 1, SequenceGen::constant(0));
    // R_t = n and constant e_t: every term equals 1/e
    const auto flat = synthetic(e, 0.5, 1.0, 200);
    const auto v = cass_criterion(flat, e);
    CHECK(v.verdict == Verdict::Diverges);

    const auto c = continuum_paths(fixtures::continuum());
    REQUIRE(c.interior.survived());
    REQUIRE(c.upper.survived());
    CHECK(cass_criterion(c.interior, fixtures::continuum()).verdict == Verdict::Converges);
    CHECK(cass_criterion(c.upper, fixtures::continuum()).verdict == Verdict::Diverges);
}

TEST_CASE("support price test") {
    const auto hi = fixtures::high_interest();
    const auto s = equilibrium_set(hi);
    SimOptions snap;
    snap.initial_snap_abs = std::max(2e-12, s.bracket_width);
    const auto p = simulate(hi, s.upper, 200, snap);
    REQUIRE(p.survived());
    const auto r = support_price_test(hi, p, decompose(hi, p));
    CHECK(r.shortcut_pass);
    CHECK(r.pass);

    const auto c = continuum_paths(fixtures::continuum());
    CHECK_FALSE(support_price_test(fixtures::continuum(), c.interior, decompose(fixtures::continuum(), c.interior)).pass);
}

TEST_CASE("certificates in the continuum regime") {
    const auto e = fixtures::continuum();
    const auto c = continuum_paths(e);

    const auto up = certify(e, c.upper, decompose(e, c.upper));
    CHECK(up.verdict == Optimality::Optimal);
    CHECK(up.mu >= 0.5);
    CHECK(std::find(up.rationale.begin(), up.rationale.end(), "cass-divergence-with-strictness") != up.rationale.end());

    CertifyOptions o;
    o.comparison = &c.upper;
    for (const auto* p : {&c.lower, &c.interior}) {
        const auto cert = certify(e, *p, decompose(e, *p), o);
        CHECK(cert.verdict == Optimality::NotOptimal);
        REQUIRE(cert.domination);
        CHECK(cert.domination->holds);
        CHECK(cert.domination->min_margin > 1e-10);
    }
}

TEST_CASE("certificates for the unique regimes and the closed forms") {
    const auto hi = fixtures::high_interest();
    const auto s = equilibrium_set(hi);
    SimOptions snap;
    snap.initial_snap_abs = std::max(2e-12, s.bracket_width);
    const auto p = simulate(hi, s.upper, 200, snap);
    CHECK(certify(hi, p, decompose(hi, p)).verdict == Optimality::Optimal);

    const auto z = fixtures::log_economy(1, 0, SequenceGen::geometric(0.01, 0.5));
    const auto zp = simulate_no_old_endowment(z, 0.5, 200);
    CHECK(certify(z, zp, decompose(z, zp)).verdict == Optimality::Optimal);

    const auto t = fixtures::tirole_economy();
    const auto tp = simulate(t, 0.30, 200);
    CHECK(certify(t, tp, decompose(t, tp)).verdict != Optimality::NotOptimal);
}

TEST_CASE("domination requires a higher surviving comparison") {
    const auto e = fixtures::continuum();
    const auto c = continuum_paths(e);
    CHECK_FALSE(domination_check(e, c.upper, c.interior).holds);
    CHECK(domination_check(e, c.interior, c.upper).holds);
}

TEST_CASE("welfare ranking") {
    const auto e = fixtures::continuum();
    const auto single = welfare_rank(e, {0.3}, 50);
    CHECK(single.strict);
    CHECK(single.pairs.empty());

    const auto r = welfare_rank(e, {0.35, 0.2, 0.45}, 8);
    CHECK(r.strict);
    CHECK(r.pairs.size() == 3);
    CHECK(r.order == std::vector<size_t>{1, 0, 2});
    CHECK(r.min_margin > 1e-10);

    // Interior paths converge to one another, so the margins shrink geometrically.
    const auto& m = r.pairs.front().margin;
    CHECK(m[8] < 1e-2 * m[0]);

    const auto bad = welfare_rank(e, {0.3, 1.5}, 50);
    REQUIRE(bad.entries.size() == 2);
    CHECK(bad.entries[0].survived);
    CHECK_FALSE(bad.entries[1].survived);
    CHECK_FALSE(bad.entries[1].status.empty());
}

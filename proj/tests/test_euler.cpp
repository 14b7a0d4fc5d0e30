#include <doctest.h>

#include <cmath>
#include <random>

#include "olg/errors.hpp"
#include "olg/euler.hpp"
#include "support.hpp"

using namespace olg;

namespace {

// Smallest sign change of K(a, .) on a fine log grid, refined by plain bisection.
double scanned_root(const Economy& e, long t, double a, double Rmax) {
    double prev = 1e-8;
    for (double R = 1e-8; R < Rmax; R *= 1.01) {
        if (euler_residual(e, t, a, R) < 0) {
            double lo = prev, hi = R;
            for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                (euler_residual(e, t, a, mid) > 0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = R;
    }
    return NAN;
}

}  // namespace

TEST_CASE("log utility rate has a closed form") {
    // 1/(e^y - a) = beta R / (e^o + R a)  =>  R = e^o / (beta e^y - (1 + beta) a)
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int i = 0; i < 200; ++i) {
        const double ey = 0.5 + 4 * U(rng), eo = 0.5 + 4 * U(rng), beta = 0.5 + 1.5 * U(rng);
        const auto e = fixtures::log_economy(ey, eo, SequenceGen::constant(0), beta);
        const double a = U(rng) * beta * ey / (1 + beta);
        CHECK(g_solve(e, 0, a) == doctest::Approx(eo / (beta * ey - (1 + beta) * a)).epsilon(1e-11));
    }
}

TEST_CASE("benchmark rate") {
    CHECK(benchmark_rate(fixtures::continuum(), 0) == doctest::Approx(0.5));
    CHECK(benchmark_rate(fixtures::high_interest(), 0) == doctest::Approx(1.5));
    auto crra = fixtures::continuum();
    crra.utility = Utility::crra(2.0, 0.9);
    // u'(2) / (0.9 v'(1)) = 0.25 / 0.9
    CHECK(benchmark_rate(crra, 0) == doctest::Approx(0.25 / 0.9));
}

TEST_CASE("CRRA rates agree with a scanned sign change") {
    for (double sigma : {0.5, 0.8, 2.0, 3.0}) {
        auto e = fixtures::continuum();
        e.utility = Utility::crra(sigma, 0.95);
        for (double a = 0.01; a < 1.0; a += 0.07) {
            if (!rate_domain_ok(e, 0, a)) continue;
            const double r = g_solve(e, 0, a);
            CHECK(euler_residual(e, 0, a, r) == doctest::Approx(0).scale(1.0).epsilon(1e-9));
            CHECK(r == doctest::Approx(scanned_root(e, 0, a, 1e6)).epsilon(1e-10));
        }
    }
}

TEST_CASE("g is nondecreasing in a and tends to the benchmark rate") {
    const auto e = fixtures::continuum();
    double prev = 0;
    for (double a = 1e-4; a < 0.66; a += 0.01) {
        const double r = g_solve(e, 0, a);
        CHECK(r > prev);
        prev = r;
    }
    const double rstar = benchmark_rate(e, 0);
    double gap = INFINITY;
    for (double a : {1e-4, 1e-6, 1e-8}) {
        const double g = std::abs(g_solve(e, 0, a) - rstar);
        CHECK(g < gap);
        gap = g;
    }
    CHECK(gap < 1e-7);
}

TEST_CASE("residual is nondecreasing in a and strictly decreasing in R") {
    const auto e = fixtures::unique_bubbly();
    for (double R = 0.2; R < 3; R += 0.3) {
        double prev = -INFINITY;
        for (double a = 0.01; a < 1.9; a += 0.05) {
            const double k = euler_residual(e, 0, a, R);
            CHECK(k >= prev);
            prev = k;
        }
    }
    for (double a = 0.05; a < 1.5; a += 0.2) {
        double prev = INFINITY;
        for (double R = 0.0; R < 5; R += 0.25) {
            const double k = euler_residual(e, 0, a, R);
            CHECK(k < prev);
            prev = k;
        }
    }
}

TEST_CASE("domain and assumption errors") {
    const auto e = fixtures::continuum();
    CHECK_THROWS_AS(g_solve(e, 0, 0.0), DomainError);
    CHECK_THROWS_AS(g_solve(e, 0, 2.0), DomainError);
    // log: a u'(e^y - a) < beta lim c v'(c) = 1  <=>  a < e^y / 2
    CHECK(rate_domain_ok(e, 0, 0.99));
    CHECK_FALSE(rate_domain_ok(e, 0, 1.01));
    CHECK_THROWS_AS(g_solve(e, 0, 1.01), NoFiniteRate);

    const auto no_old = fixtures::log_economy(1, 0, SequenceGen::constant(0.1));
    CHECK_THROWS_AS(g_solve(no_old, 0, 0.3), AssumptionViolated);
}

TEST_CASE("forward rate ratio") {
    const auto e = fixtures::continuum();
    // u'(2 x1) / (beta v'(2 x2)) = x2 / x1 for log
    CHECK(forward_rate_ratio(e, 0, 0.5, 0.25) == doctest::Approx(0.5));
    CHECK_THROWS_AS(forward_rate_ratio(e, 0, 0.5, 0.0), DomainError);
}

#include "olg/euler.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "olg/errors.hpp"

namespace olg {

namespace {

constexpr double kBracketLimit = 1e30;

void check_a(const Economy& econ, long t, double a) {
    const double ey = econ.ey(t);
    if (!(a > 0) || !(a < ey))
        throw DomainError("asset value a=" + std::to_string(a) + " outside (0, e^y_t) at t=" +
                          std::to_string(t));
}

}  // namespace

double euler_residual(const Economy& econ, long t, double a, double R) {
    check_a(econ, t, a);
    if (!(R >= 0)) throw DomainError("R must be >= 0");
    const double cy = econ.ey(t) - a;
    const double co = econ.eo(t + 1) + R * a;
    const double up = econ.utility.up(cy);
    if (R == 0) return up;
    return up - econ.beta(t) * R * econ.utility.vp(co);
}

bool rate_domain_ok(const Economy& econ, long t, double a) {
    const double lim = econ.utility.lim_cvp();
    if (std::isinf(lim)) return true;
    return a * econ.utility.up(econ.ey(t) - a) < econ.beta(t) * lim;
}

double benchmark_rate(const Economy& econ, long t) {
    const double eo = econ.eo(t + 1);
    const double vp = econ.utility.vp(eo);
    if (eo == 0 && (!std::isfinite(vp) || econ.utility.vp_infinite_at_zero())) return 0.0;
    return econ.utility.up(econ.ey(t)) / (econ.beta(t) * vp);
}

double forward_rate_ratio(const Economy& econ, long t, double x1, double x2) {
    if (!(x1 > 0)) throw DomainError("x1 must be > 0");
    if (!(x2 >= 0)) throw DomainError("x2 must be >= 0");
    const double ey = econ.ey(t);
    if (x2 == 0 && econ.utility.vp_infinite_at_zero())
        throw DomainError("v'(0) is infinite: ratio undefined at x2=0");
    const double den = econ.beta(t) * econ.utility.vp(ey * x2);
    if (!(den > 0) || !std::isfinite(den)) throw DomainError("zero or non-finite denominator in V1/V2");
    return econ.utility.up(ey * x1) / den;
}

double g_solve(const Economy& econ, long t, double a) {
    check_a(econ, t, a);
    const double eo = econ.eo(t + 1);
    if (!(eo > 0))
        throw AssumptionViolated("e^o_{t+1} = 0: the rate is not pinned down by a_t (t=" +
                                 std::to_string(t) + ")");
    const Utility& U = econ.utility;
    const bool monotone = U.cvp_nondecreasing();
    if (!monotone && U.family() == Family::Custom)
        throw AssumptionViolated("custom utility has non-monotone c v'(c)");
    if (monotone && !rate_domain_ok(econ, t, a))
        throw NoFiniteRate("a u'(e^y - a) >= beta lim c v'(c) at a=" + std::to_string(a));

    const double upy = U.up(econ.ey(t) - a);
    const double beta = econ.beta(t);
    auto K = [&](double R) { return R == 0 ? upy : upy - beta * R * U.vp(eo + R * a); };

    double lo = 0.0, hi;
    double klo = K(lo), khi;
    if (monotone) {
        hi = benchmark_rate(econ, t);
        if (!(hi > 0)) hi = std::numeric_limits<double>::min();
        khi = K(hi);
        while (khi >= 0) {
            lo = hi;
            klo = khi;
            hi *= 2.0;
            if (hi > kBracketLimit)
                throw BracketFailure("no sign change below R=1e30 at a=" + std::to_string(a));
            khi = K(hi);
        }
    } else {
        // R v'(e^o + R a) rises then falls; the economically relevant root is the
        // one on the rising branch, continuous with R* as a -> 0.
        hi = U.rate_peak(eo, a);
        khi = K(hi);
        if (khi >= 0)
            throw NoFiniteRate("Euler residual stays positive up to its turning point at a=" +
                               std::to_string(a));
        double step = benchmark_rate(econ, t);
        while (step < hi) {
            const double ks = K(step);
            if (ks < 0) {
                hi = step;
                khi = ks;
                break;
            }
            lo = step;
            klo = ks;
            step *= 2.0;
        }
    }
    if (khi == 0) return hi;

    std::uintmax_t max_iter = 300;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
    const auto r = boost::math::tools::toms748_solve(K, lo, hi, klo, khi, tol, max_iter);
    if (max_iter >= 300) throw BracketFailure("root refinement did not converge");
    return 0.5 * (r.first + r.second);
}

}  // namespace olg

#pragma once

#include <functional>
#include <limits>
#include <string>

namespace olg {

enum class Family { Log, CRRA, CRRA2, Custom };

using ScalarFn = std::function<double(double)>;

// User-supplied separable utility. The levels u and v are optional; they are
// only needed for welfare evaluation.
struct CustomFunctions {
    ScalarFn up, upp, vp, vpp;
    ScalarFn u, v;
    // lim_{c -> inf} c v'(c); must be given because it cannot be computed safely.
    double lim_cvp = std::numeric_limits<double>::quiet_NaN();
};

// Separable lifetime utility u(c_young) + beta * v(c_old).
class Utility {
public:
    static Utility log(double beta);
    static Utility crra(double sigma, double beta);
    static Utility crra2(double sigma1, double sigma2, double beta = 1.0);
    static Utility custom(CustomFunctions fns, double beta);

    Family family() const noexcept { return family_; }
    std::string family_name() const;
    double beta() const noexcept { return beta_; }
    double sigma_young() const noexcept { return s1_; }
    double sigma_old() const noexcept { return s2_; }

    double up(double c) const;
    double upp(double c) const;
    double vp(double c) const;
    double vpp(double c) const;
    double u(double c) const;
    double v(double c) const;
    bool has_levels() const;

    // u(c2) - u(c1) and v(c2) - v(c1) evaluated without cancellation.
    double u_diff(double c1, double c2) const;
    double v_diff(double c1, double c2) const;
    // u(c + dc) - u(c) and v(c + dc) - v(c) for an exactly known increment dc.
    double u_gain(double c, double dc) const;
    double v_gain(double c, double dc) const;

    // True when v'(0+) is infinite (all built-in families).
    bool vp_infinite_at_zero() const;
    double lim_cvp() const;
    // c v'(c) nondecreasing on (0, inf): analytic for the built-in families,
    // sampled on a log grid for custom ones.
    bool cvp_nondecreasing() const;
    // u', v' positive and strictly decreasing on a sampled grid.
    bool marginals_well_behaved() const;

    // For CRRA-type old-age utility with curvature above one, the map
    // R -> R v'(e + R a) peaks at this R; returns +inf when it is monotone.
    double rate_peak(double eo, double a) const;

    const CustomFunctions& custom_functions() const noexcept { return fns_; }

private:
    Family family_ = Family::Log;
    double beta_ = 1.0;
    double s1_ = 1.0;
    double s2_ = 1.0;
    CustomFunctions fns_;
    bool custom_cvp_monotone_ = true;
};

}  // namespace olg

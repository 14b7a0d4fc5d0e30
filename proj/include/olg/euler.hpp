#pragma once

#include "olg/economy.hpp"

namespace olg {

// K_t(a, R) = u'(e^y_t - a) - beta_t R v'(e^o_{t+1} + R a).
double euler_residual(const Economy& econ, long t, double a, double R);

// The interest factor R_{t+1} = g_t(a) solving K_t(a, R) = 0.
double g_solve(const Economy& econ, long t, double a);

// R*_{t+1} = u'(e^y_t) / (beta_t v'(e^o_{t+1})).
double benchmark_rate(const Economy& econ, long t);

// V_1 / V_2 at normalized consumptions (x1, x2): u'(e^y_t x1) / (beta_t v'(e^y_t x2)).
double forward_rate_ratio(const Economy& econ, long t, double x1, double x2);

// a u'(e^y_t - a) < beta_t lim c v'(c): a finite rate exists for asset value a.
bool rate_domain_ok(const Economy& econ, long t, double a);

}  // namespace olg

#pragma once

#include "olg/economy.hpp"

namespace fixtures {

// Stationary log-utility economy with the given dividend stream (aggregate basis).
inline olg::Economy log_economy(double ey, double eo, olg::SequenceGen d, double beta = 1.0,
                                double n = 1.0) {
    olg::Economy e;
    e.utility = olg::Utility::log(beta);
    e.endow_young = olg::SequenceGen::constant(ey);
    e.endow_old = olg::SequenceGen::constant(eo);
    e.dividend = std::move(d);
    e.n = n;
    return e;
}

inline olg::SequenceGen tirole_dividend(double d0 = 0.1, double x = 0.5) {
    return olg::SequenceGen::closed_form(
        olg::kTiroleExplicitD, {{"d0", d0}, {"x", x}, {"n", 1}, {"beta", 1}, {"ey", 1}, {"eo", 0.5}});
}

inline olg::Economy tirole_economy(double d0 = 0.1) { return log_economy(1, 0.5, tirole_dividend(d0)); }

// The three stationary regimes used throughout the tests.
inline olg::Economy high_interest() { return log_economy(2, 3, olg::SequenceGen::geometric(0.01, 0.5)); }
inline olg::Economy continuum() { return log_economy(2, 1, olg::SequenceGen::geometric(0.01, 0.4)); }
inline olg::Economy unique_bubbly() { return log_economy(2, 1, olg::SequenceGen::geometric(0.01, 0.8)); }

}  // namespace fixtures

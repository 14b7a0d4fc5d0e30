#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "olg/economy.hpp"
#include "olg/series.hpp"

namespace olg {

enum class PathStatus { SurvivedHorizon, CollapsedBelowZero, HitEndowmentBound };

const char* status_name(PathStatus s);

struct EquilibriumPath {
    // Index t runs over 0..survived_to. R[0] is unused (NaN).
    std::vector<double> a, R, cy, co, q;
    long horizon = 0;
    long survived_to = 0;
    PathStatus status = PathStatus::SurvivedHorizon;
    // First period at which the bound was violated (-1 when none).
    long violation_t = -1;
    std::string source = "simulate";

    // Shadowing diagnostics (zero for raw simulation).
    long snaps = 0;
    double max_correction = 0.0;
    double max_euler_residual = 0.0;

    bool survived() const { return status == PathStatus::SurvivedHorizon; }
    double a0() const { return a.front(); }
    long last() const { return static_cast<long>(a.size()) - 1; }
};

enum class Fate { Collapse, Survive, Hit };

enum class SimMode {
    // Plain forward iteration of the Euler map.
    Raw,
    // Forward iteration with each step corrected onto the nearby boundary of
    // the set of initial values that keep surviving, when such a boundary
    // lies within a relative distance snap_rel of the raw iterate.
    Shadowed
};

struct SimOptions {
    SimMode mode = SimMode::Shadowed;
    std::vector<long> windows{64, 128, 256, 512};
    double snap_rel = 1e-12;
    // When positive, a0 itself is snapped within this absolute radius. Used to
    // start exactly on an equilibrium whose a0 is only known to a bisection
    // tolerance.
    double initial_snap_abs = 0.0;
};

// (R_{t+1}, a_{t+1}) from a_t.
std::pair<double, double> forward_step(const Economy& econ, long t, double a);

// Raw forward iteration from a_t = a for `steps` steps; reports whether the
// path leaves (0, e^y) through the bottom, the top, or not at all.
Fate probe_fate(const Economy& econ, long t, double a, long steps);

EquilibriumPath simulate(const Economy& econ, double a0, long T, const SimOptions& opts = {});

// Closed-form path of the economy without old-age endowment: a_t = beta_t e^y_t / (1 + beta_t).
// `a0` must match the forced initial value; otherwise the path fails at t = 0.
EquilibriumPath simulate_no_old_endowment(const Economy& econ, double a0, long T);

// Fills consumptions and q from a and R (used by constructors of synthetic paths).
void fill_path_quantities(const Economy& econ, EquilibriumPath& path);

struct PriceDecomposition {
    std::vector<double> logQ, logP, f, F, b, B;
    // Upper bound on the omitted tail of F_0 (aggregate), +inf when not bounded.
    double tail_bound = 0.0;
    double tail_ratio = std::numeric_limits<double>::quiet_NaN();
    bool possibly_infinite = false;
    std::string tail_method;
    SeriesVerdict tail_series;

    double Q(long t) const;
    double P(long t) const;
    // Truncation bound for F_t at period t.
    double tail_bound_at(long t) const;
};

PriceDecomposition decompose(const Economy& econ, const EquilibriumPath& path);

// Relative error of q_0 = sum_{s=1}^T Q_s D_s + Q_T q_T.
double telescoping_residual(const Economy& econ, const EquilibriumPath& path,
                            const PriceDecomposition& dec);

double welfare(const Economy& econ, const EquilibriumPath& path, long t);
// welfare(hi, t) - welfare(lo, t), computed from consumption differences.
double welfare_difference(const Economy& econ, const EquilibriumPath& hi,
                          const EquilibriumPath& lo, long t);

// CSV with columns t,a,R,q,cy,co,f,b,logQ,logP (17 significant digits).
void write_path_csv(std::ostream& os, const EquilibriumPath& path, const PriceDecomposition* dec);

}  // namespace olg

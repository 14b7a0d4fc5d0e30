#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olg/economy.hpp"
#include "olg/path.hpp"
#include "olg/series.hpp"

namespace olg {

enum class BubbleVerdict { Bubbly, Bubbleless, Inconclusive };
const char* bubble_verdict_name(BubbleVerdict v);

struct BubbleTestReport {
    long T = 0;
    // sum_{t>=1} D_t / q_t.
    SeriesVerdict dq_series;
    bool fq_strictly_decreasing = false;
    bool bq_strictly_increasing = false;
    bool pure_bubble = false;
    BubbleVerdict series_verdict = BubbleVerdict::Inconclusive;
    BubbleVerdict monotone_verdict = BubbleVerdict::Inconclusive;
    BubbleVerdict verdict = BubbleVerdict::Inconclusive;
    double q0 = 0, F0 = 0, B0 = 0, tail_bound = 0;
    // Partial sum against (F0/q0)/(1 - F0/q0), checked when Bubbly.
    double bound_lhs = 0, bound_rhs = 0;
    bool bound_ok = true;
    std::string reason;
};

// Uses t <= T (default econ.tol.series_T, clipped to the path length).
BubbleTestReport bubble_test_path(const Economy& econ, const EquilibriumPath& path,
                                  const PriceDecomposition& dec, long T = 0);

enum class LimitVerdict { ToZero, NotZero, Inconclusive };
const char* limit_verdict_name(LimitVerdict v);

struct LimitTest {
    LimitVerdict verdict = LimitVerdict::Inconclusive;
    double last_log = 0.0;
    SeriesVerdict series;
};

// Whether term_t -> 0, judged from log term_t for t in [1, cfg.series_T].
LimitTest limit_zero_test(const LogTermFn& log_term, const ToleranceSet& cfg);

struct NoBubbleReport {
    // sum D_t / (n^t e^y_t) = inf
    SeriesVerdict non_negligible_dividend;
    // lim n^t e^y_t / (R*_1 ... R*_t) = 0
    LimitTest high_interest;
    // sum D_t / (R*_1 ... R*_t) < inf
    SeriesVerdict not_too_low_interest;
    bool no_bubbly_equilibria = false;
    bool bubbleless_exists = false;
    bool unique_bubbleless = false;
    bool unique_equilibrium_bubbleless = false;
};

NoBubbleReport no_bubble_conditions(const Economy& econ);

struct ConditionBSpec {
    SequenceGen X;
    SequenceGen Xbar;
    double eps_bar = 0.1;
    std::optional<SequenceGen> gamma;
    long T_start = 1;
};

struct ClauseResult {
    std::string name;
    bool pass = false;
    std::string detail;
    // Witness of a failure (NaN when the clause passed or has none).
    long t = -1;
    double eps = std::numeric_limits<double>::quiet_NaN();
    double X = std::numeric_limits<double>::quiet_NaN();
};

struct ConditionBReport {
    std::vector<ClauseResult> clauses;
    bool all_pass = false;
    // Weighted low-dividend series sum D_t / (n^t e^y_t gamma_t).
    SeriesVerdict low_dividend;
    bool saving_rate_bounded_away = false;
    bool all_bubbly = false;
    bool all_bubbleless = false;
    // Constant rate used by the automatic variant.
    std::optional<double> R;
};

ConditionBReport condition_B_check(const Economy& econ, const ConditionBSpec& spec);

// Constant-rate sufficient test: R is the largest forward-rate ratio
// V1(1 - e1, g + e2)/V2(...) on a grid with e1 < eps_bar1, e2 < eps_bar2, t >= T_start.
ConditionBReport condition_B_auto(const Economy& econ, double eps_bar1 = 0.1,
                                  double eps_bar2 = 0.1, long T_start = 1);

enum class Regime { UniqueBubbleless, Continuum, UniqueBubbly, KnifeEdgeRstarEqualsN, Undetermined };
const char* regime_name(Regime r);

struct RegimeInputs {
    double rstar = 0.0;
    double n = 1.0;
    Verdict sum_d = Verdict::Inconclusive;          // sum D_t / n^t
    Verdict sum_D_rstar = Verdict::Inconclusive;    // sum D_t / R*^t
    double root = std::numeric_limits<double>::quiet_NaN();  // limsup D_t^(1/t)
};

struct RegimeDecision {
    Regime regime = Regime::Undetermined;
    std::vector<std::string> citations;
    std::string reason;
};

// The decision table on its own; classify_regime only gathers its inputs.
RegimeDecision decide_regime(const RegimeInputs& in);

struct OptimalityLabel {
    std::string applies_to;  // "unique", "interior", "lower", "maximal"
    std::string label;
};

struct RegimeReport {
    double R_star = 0.0;
    double n = 1.0;
    std::map<std::string, SeriesVerdict> tests;
    double root_test = 0.0;
    std::string root_method;
    Regime regime = Regime::Undetermined;
    std::vector<std::string> citations;
    std::string reason;
    std::vector<OptimalityLabel> optimality;
};

RegimeReport classify_regime(const Economy& econ);

double limsup_root(const Economy& econ, std::string* method = nullptr);

struct GrowthRateProbe {
    double ratio_min = 0.0;  // running min over t >= T/2 of (D_{t+1}/D_t)/R_{t+1}
    double root_min = 0.0;   // running min over t >= T/2 of (D_t Q_t)^(1/t)
    bool ratio_pass = false;
    bool root_pass = false;
};

GrowthRateProbe growth_rate_probe(const Economy& econ, const EquilibriumPath& path, long T = 0);

}  // namespace olg

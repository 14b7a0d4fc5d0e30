#pragma once

#include <optional>
#include <string>
#include <vector>

#include "olg/economy.hpp"
#include "olg/path.hpp"
#include "olg/series.hpp"

namespace olg {

// Finite-horizon stand-in for a liminf or limsup: the running extremum over the
// final half [T/2, T] plus the least-squares slope of the sampled quantity
// (in logs when the quantity is positive) over the same window.
struct Surrogate {
    double value = 0.0;
    double slope = 0.0;
    bool pass = false;
};

struct SupportPriceResult {
    // Running minimum of P_t c^y_t over the final half, and its log-trend.
    Surrogate liminf_Pcy;
    double threshold = 0.0;
    bool level_pass = false;
    // liminf R_t > n with bounded aggregate supply.
    Surrogate liminf_R;
    bool shortcut_pass = false;
    bool pass = false;
};

SupportPriceResult support_price_test(const Economy& econ, const EquilibriumPath& path,
                                      const PriceDecomposition& dec);

// sum_{t>=1} (R_1...R_t) / (n^t e_t), with e_t = e^y_t + e^o_t/n + d_t.
SeriesVerdict cass_criterion(const EquilibriumPath& path, const Economy& econ);

// inf_t (c^y_t / u'(c^y_t)) inf_{x in [(1-h)c^y_t, c^y_t]} (-u''(x)/2) over t <= series_T.
// Returns 0 when the sampled values are still falling at the end of the window.
double strictness_constant(const Economy& econ, const EquilibriumPath& path, double h = 0.5);

struct SmoothnessConstants {
    double theta1 = 0.0;
    double theta2 = 0.0;
    // "crra-closed-form" or "sampled-sup".
    std::string method;
};

SmoothnessConstants smoothness_constants(const Economy& econ, const EquilibriumPath& path,
                                         double x = 0.5);

enum class Optimality { Optimal, NotOptimal, Undetermined };
const char* optimality_name(Optimality o);

struct DominationWitness {
    double a0 = 0.0;
    double comparison_a0 = 0.0;
    long T = 0;
    double min_margin = 0.0;
    long argmin_t = -1;
    bool holds = false;
};

struct ParetoCertificate {
    double liminf_Pcy = 0.0;
    SupportPriceResult support;
    SeriesVerdict cass_sum;
    double mu = 0.0;
    double theta1 = 0.0, theta2 = 0.0;
    bool smoothness_finite = false;
    Surrogate asset_share;        // limsup a_t / e_t
    Surrogate saving_rate;        // liminf a_t / e^y_t
    Surrogate young_share;        // liminf c^y_t / e_t
    Surrogate old_share;          // limsup c^o_t / (n e_t)
    Surrogate old_price_ratio;    // liminf P_{t+1} c^o_{t+1} / (P_t e_t)
    bool bubbleless = false;
    std::optional<DominationWitness> domination;
    Optimality verdict = Optimality::Undetermined;
    std::vector<std::string> rationale;
    std::string note;
};

struct CertifyOptions {
    double h = 0.5;
    double x = 0.5;
    // Another equilibrium of the same economy, tried as a dominating witness.
    const EquilibriumPath* comparison = nullptr;
};

ParetoCertificate certify(const Economy& econ, const EquilibriumPath& path,
                          const PriceDecomposition& dec, const CertifyOptions& opts = {});

// Strict welfare improvement of `better` over `path` for every generation
// t <= T (and for the initial old), with margins relative to 1e-10.
DominationWitness domination_check(const Economy& econ, const EquilibriumPath& path,
                                   const EquilibriumPath& better, long T = 0);

struct RankEntry {
    double a0 = 0.0;
    bool survived = false;
    std::string status;
    std::string error;
};

struct RankPair {
    size_t lo = 0, hi = 0;  // entry indices with a0[lo] < a0[hi]
    std::vector<double> margin;  // welfare(hi, t) - welfare(lo, t), t = 0..T
    double min_margin = 0.0;
    long argmin_t = -1;
};

struct WelfareRankReport {
    long T = 0;
    std::vector<RankEntry> entries;
    // Surviving entries from lowest to highest welfare.
    std::vector<size_t> order;
    std::vector<RankPair> pairs;
    double min_margin = 0.0;
    bool strict = false;
};

// Simulates each a0 to T + 1 (default T = series_T) and compares all pairs of
// surviving entries. Throws RankViolation when a higher a0 is worse by more
// than 1e-10 at some t.
WelfareRankReport welfare_rank(const Economy& econ, const std::vector<double>& a0_list,
                               long T = 0, const SimOptions& opts = {});

}  // namespace olg

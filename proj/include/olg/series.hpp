#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "olg/economy.hpp"

namespace olg {

enum class Verdict { Converges, Diverges, Inconclusive };

const char* verdict_name(Verdict v);

struct SeriesVerdict {
    double value_partial = 0.0;
    double tail_ratio = std::numeric_limits<double>::quiet_NaN();
    Verdict verdict = Verdict::Inconclusive;
    // Upper bound on the omitted tail; +inf unless the verdict is Converges.
    double bound = std::numeric_limits<double>::infinity();
    // Which rule fired: "zero-tail", "power-law", "ratio", "bounded-below", or "none".
    std::string method = "none";
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double r2_power = std::numeric_limits<double>::quiet_NaN();
    double r2_geometric = std::numeric_limits<double>::quiet_NaN();
    long first = 1;
    long last = 0;
    std::string note;
};

// log(term_t); may return -inf for a zero term.
using LogTermFn = std::function<double(long)>;

// Verdict for sum_{t=first}^{inf} term_t from the terms up to `last`.
SeriesVerdict series_test_range(const LogTermFn& log_term, long first, long last, long window);

// Same, with last = cfg.series_T and the window from cfg.
SeriesVerdict series_test(const LogTermFn& log_term, const ToleranceSet& cfg, long first = 1);

// Convenience overload on plain (nonnegative) term values; terms[i] is term_{first+i}.
SeriesVerdict series_test_values(const std::vector<double>& terms, long first, long window);

// Compensated (Kahan-Babuska) accumulator.
class KahanSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace olg

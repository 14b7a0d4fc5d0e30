#pragma once

#include <optional>
#include <string>

#include "olg/sequence.hpp"
#include "olg/utility.hpp"

namespace olg {

struct ToleranceSet {
    double root_tol = 1e-12;
    long series_T = 200;
    long tail_ratio_window = 50;
    double survive_eps = 1e-9;
    double bisect_tol = 1e-12;

    void validate(long horizon) const;
};

// Whether the dividend generator emits aggregate dividends D_t or per-capita
// dividends d_t = D_t / n^t.
enum class DividendBasis { Aggregate, PerCapita };

struct Economy {
    std::string name;
    Utility utility = Utility::log(1.0);
    SequenceGen endow_young = SequenceGen::constant(1.0);
    SequenceGen endow_old = SequenceGen::constant(1.0);
    SequenceGen dividend = SequenceGen::constant(0.0);
    DividendBasis basis = DividendBasis::Aggregate;
    // Optional per-period discount factors replacing utility.beta().
    std::optional<SequenceGen> beta_seq;
    double n = 1.0;
    long horizon = 200;
    ToleranceSet tol;

    double ey(long t) const;
    double eo(long t) const;
    double beta(long t) const;
    // Per-capita dividend d_t and aggregate dividend D_t.
    double d(long t) const;
    double D(long t) const;
    double log_d(long t) const;
    double log_D(long t) const;

    double aggregate_supply(long t) const;

    bool stationary_endowments() const;
    bool old_endowment_positive() const;
    // Monotone c v'(c) together with strictly positive old-age endowments.
    bool add_assum() const;
    // Horizon over which sampled checks run (covers the horizon ladder).
    long check_span() const { return 4 * horizon + 1024; }

    void validate() const;
};

inline double aggregate_supply(const Economy& econ, long t) { return econ.aggregate_supply(t); }

}  // namespace olg

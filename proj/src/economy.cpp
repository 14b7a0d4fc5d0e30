#include "olg/economy.hpp"

#include <cmath>

#include "olg/errors.hpp"

namespace olg {

void ToleranceSet::validate(long horizon) const {
    if (!(root_tol > 0) || !(survive_eps > 0) || !(bisect_tol > 0))
        throw InvalidEconomy("tolerances must be strictly positive");
    if (series_T <= 0 || tail_ratio_window <= 0)
        throw InvalidEconomy("series_T and tail_ratio_window must be positive");
    if (series_T > horizon)
        throw InvalidEconomy("series_T (" + std::to_string(series_T) + ") exceeds horizon (" +
                             std::to_string(horizon) + ")");
    if (tail_ratio_window >= series_T)
        throw InvalidEconomy("tail_ratio_window must be smaller than series_T");
}

double Economy::ey(long t) const { return eval_sequence(endow_young, t); }
double Economy::eo(long t) const { return eval_sequence(endow_old, t); }

double Economy::beta(long t) const {
    if (!beta_seq) return utility.beta();
    const double b = eval_sequence(*beta_seq, t);
    if (!(b > 0)) throw InvalidEconomy("beta_t must be > 0 at t=" + std::to_string(t));
    return b;
}

double Economy::log_D(long t) const {
    if (basis == DividendBasis::Aggregate) return dividend.log_value(t);
    return dividend.log_value(t) + static_cast<double>(t) * std::log(n);
}

double Economy::log_d(long t) const {
    if (basis == DividendBasis::PerCapita) return dividend.log_value(t);
    return dividend.log_value(t) - static_cast<double>(t) * std::log(n);
}

double Economy::d(long t) const {
    const double raw = eval_sequence(dividend, t);
    if (basis == DividendBasis::PerCapita || n == 1.0) return raw;
    const double v = raw / std::pow(n, static_cast<double>(t));
    if (std::isfinite(v) && (v > 0 || raw == 0)) return v;
    return std::exp(log_d(t));
}

double Economy::D(long t) const {
    const double raw = eval_sequence(dividend, t);
    if (basis == DividendBasis::Aggregate || n == 1.0) return raw;
    const double v = raw * std::pow(n, static_cast<double>(t));
    if (std::isfinite(v) && (v > 0 || raw == 0)) return v;
    return std::exp(log_D(t));
}

double Economy::aggregate_supply(long t) const { return ey(t) + eo(t) / n + d(t); }

bool Economy::stationary_endowments() const {
    return endow_young.is_constant() && endow_old.is_constant() &&
           (!beta_seq || beta_seq->is_constant());
}

bool Economy::old_endowment_positive() const {
    if (endow_old.is_constant()) return eo(0) > 0;
    for (long t = 0; t <= check_span(); ++t)
        if (!(eo(t) > 0)) return false;
    return true;
}

bool Economy::add_assum() const { return utility.cvp_nondecreasing() && old_endowment_positive(); }

void Economy::validate() const {
    if (!(n > 0) || !std::isfinite(n)) throw InvalidEconomy("n must be > 0");
    if (horizon < 2) throw InvalidEconomy("horizon must be >= 2");
    tol.validate(horizon);
    if (!utility.marginals_well_behaved())
        throw InvalidEconomy("u' and v' must be positive and strictly decreasing");
    for (long t = 0; t <= horizon; ++t) {
        if (!(ey(t) > 0)) throw InvalidEconomy("e^y_t must be > 0 (fails at t=" + std::to_string(t) + ")");
        eo(t);
        d(t);
        beta(t);
        if (!(aggregate_supply(t) > 0))
            throw InvalidEconomy("aggregate supply must be > 0 (fails at t=" + std::to_string(t) + ")");
    }
}

}  // namespace olg

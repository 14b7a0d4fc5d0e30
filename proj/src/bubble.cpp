#include "olg/bubble.hpp"

#include <algorithm>
#include <cmath>

#include "olg/errors.hpp"
#include "olg/euler.hpp"

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBubbleSlack = 1e-6;
constexpr double kBoundSlack = 1e-8;
constexpr double kClauseSlack = 1e-12;
constexpr int kRootScan = 256;
constexpr double kProbeThreshold = 1.0 + 1e-4;

BubbleVerdict from_series(Verdict v) {
    switch (v) {
        case Verdict::Converges: return BubbleVerdict::Bubbly;
        case Verdict::Diverges: return BubbleVerdict::Bubbleless;
        case Verdict::Inconclusive: break;
    }
    return BubbleVerdict::Inconclusive;
}

std::vector<double> eps_grid(double eps_bar) {
    std::vector<double> g;
    for (int k = 1; k <= 15; ++k) g.push_back(eps_bar * k / 16.0);
    g.push_back(eps_bar * (1.0 - 1e-9));
    return g;
}

// Cumulative sum of log R*_s for s = 1..T (index 0 holds 0).
std::vector<double> log_rstar_products(const Economy& econ, long T) {
    std::vector<double> s(static_cast<size_t>(T + 1), 0.0);
    KahanSum acc;
    for (long t = 1; t <= T; ++t) {
        acc.add(std::log(benchmark_rate(econ, t - 1)));
        s[static_cast<size_t>(t)] = acc.value();
    }
    return s;
}

double ratio_or_nan(const Economy& econ, long t, double x1, double x2) {
    try {
        return forward_rate_ratio(econ, t, x1, x2);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

SeriesVerdict low_dividend_series(const Economy& econ, const std::optional<SequenceGen>& gamma) {
    const double logn = std::log(econ.n);
    auto term = [&](long t) {
        double l = econ.log_D(t) - static_cast<double>(t) * logn - std::log(econ.ey(t));
        if (gamma) l -= std::log(eval_sequence(*gamma, t));
        return l;
    };
    return series_test(term, econ.tol);
}

void conclude(ConditionBReport& rep, bool weighted) {
    rep.all_pass = std::all_of(rep.clauses.begin(), rep.clauses.end(),
                               [](const ClauseResult& c) { return c.pass; });
    rep.saving_rate_bounded_away = rep.all_pass;
    rep.all_bubbly = rep.all_pass && rep.low_dividend.verdict == Verdict::Converges;
    rep.all_bubbleless =
        rep.all_pass && !weighted && rep.low_dividend.verdict == Verdict::Diverges;
}

}  // namespace

const char* bubble_verdict_name(BubbleVerdict v) {
    switch (v) {
        case BubbleVerdict::Bubbly: return "Bubbly";
        case BubbleVerdict::Bubbleless: return "Bubbleless";
        case BubbleVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* limit_verdict_name(LimitVerdict v) {
    switch (v) {
        case LimitVerdict::ToZero: return "ToZero";
        case LimitVerdict::NotZero: return "NotZero";
        case LimitVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::UniqueBubbleless: return "UniqueBubbleless";
        case Regime::Continuum: return "Continuum";
        case Regime::UniqueBubbly: return "UniqueBubbly";
        case Regime::KnifeEdgeRstarEqualsN: return "KnifeEdgeRstarEqualsN";
        case Regime::Undetermined: return "Undetermined";
    }
    return "?";
}

BubbleTestReport bubble_test_path(const Economy& econ, const EquilibriumPath& path,
                                  const PriceDecomposition& dec, long T) {
    BubbleTestReport rep;
    if (T <= 0) T = econ.tol.series_T;
    T = std::min<long>({T, path.last(), static_cast<long>(dec.f.size()) - 1});
    if (T < 2) throw DomainError("bubble test needs at least two periods");
    rep.T = T;
    for (long t = 0; t <= T; ++t)
        if (!(path.q[static_cast<size_t>(t)] > 0))
            throw DomainError("bubble test needs q_t > 0 (fails at t=" + std::to_string(t) + ")");

    const double logn = std::log(econ.n);
    auto term = [&](long t) {
        return econ.log_D(t) - std::log(path.a[static_cast<size_t>(t)]) -
               static_cast<double>(t) * logn;
    };
    rep.dq_series = series_test_range(term, 1, T, std::min(econ.tol.tail_ratio_window, T - 1));
    rep.series_verdict = from_series(rep.dq_series.verdict);

    rep.q0 = path.q[0];
    rep.F0 = dec.F[0];
    rep.B0 = dec.B[0];
    rep.tail_bound = dec.tail_bound;

    rep.pure_bubble = true;
    for (long t = 0; t <= T; ++t)
        if (dec.f[static_cast<size_t>(t)] != 0.0) rep.pure_bubble = false;

    rep.fq_strictly_decreasing = rep.bq_strictly_increasing = true;
    for (long t = 0; t < T; ++t) {
        const size_t i = static_cast<size_t>(t);
        const double fq0 = dec.f[i] / path.a[i], fq1 = dec.f[i + 1] / path.a[i + 1];
        const double bq0 = dec.b[i] / path.a[i], bq1 = dec.b[i + 1] / path.a[i + 1];
        if (!(fq1 < fq0)) rep.fq_strictly_decreasing = false;
        // B/q = 1 - F/q; once F/q drops below half an ulp of 1 the increase of
        // B/q is carried by the strict decrease of F/q.
        if (!(bq1 > bq0 || (bq1 >= bq0 && fq1 < fq0))) rep.bq_strictly_increasing = false;
    }

    const double slack = rep.tail_bound + kBubbleSlack * rep.q0;
    if (rep.pure_bubble && rep.q0 > 0)
        rep.monotone_verdict = BubbleVerdict::Bubbly;
    else if (rep.fq_strictly_decreasing && rep.bq_strictly_increasing && rep.B0 > slack)
        rep.monotone_verdict = BubbleVerdict::Bubbly;
    else if (std::abs(rep.B0) <= slack)
        rep.monotone_verdict = BubbleVerdict::Bubbleless;

    if (dec.possibly_infinite) {
        rep.verdict = BubbleVerdict::Inconclusive;
        rep.reason = "fundamental value possibly infinite (tail not bounded)";
    } else if (rep.series_verdict == BubbleVerdict::Inconclusive) {
        rep.verdict = rep.monotone_verdict;
        rep.reason = "dividend/price series inconclusive; monotone test used";
    } else if (rep.monotone_verdict == BubbleVerdict::Inconclusive) {
        rep.verdict = rep.series_verdict;
        rep.reason = "monotone test inconclusive; dividend/price series used";
    } else if (rep.monotone_verdict != rep.series_verdict) {
        rep.verdict = BubbleVerdict::Inconclusive;
        rep.reason = "series and monotone tests disagree";
    } else {
        rep.verdict = rep.series_verdict;
        rep.reason = "series and monotone tests agree";
    }

    rep.bound_lhs = rep.dq_series.value_partial;
    const double x = (rep.F0 + (std::isfinite(rep.tail_bound) ? rep.tail_bound : kInf)) / rep.q0;
    rep.bound_rhs = x < 1.0 ? x / (1.0 - x) : kInf;
    if (rep.verdict == BubbleVerdict::Bubbly)
        rep.bound_ok = rep.bound_lhs <= rep.bound_rhs + kBoundSlack;
    return rep;
}

LimitTest limit_zero_test(const LogTermFn& log_term, const ToleranceSet& cfg) {
    LimitTest out;
    out.series = series_test(log_term, cfg);
    out.last_log = log_term(cfg.series_T);
    const SeriesVerdict& s = out.series;
    if (s.method == "infinite-term" || out.last_log == kInf) {
        out.verdict = LimitVerdict::NotZero;
    } else if (s.verdict == Verdict::Converges) {
        out.verdict = LimitVerdict::ToZero;
    } else if (s.method == "power-law" && std::isfinite(s.alpha)) {
        out.verdict = s.alpha > 0.05 ? LimitVerdict::ToZero
                      : s.alpha < -0.05 ? LimitVerdict::NotZero
                                         : LimitVerdict::Inconclusive;
    } else if (s.method == "ratio" || s.method == "bounded-below") {
        out.verdict = LimitVerdict::NotZero;
    }
    return out;
}

NoBubbleReport no_bubble_conditions(const Economy& econ) {
    NoBubbleReport rep;
    const long T = econ.tol.series_T;
    const double logn = std::log(econ.n);
    const auto S = log_rstar_products(econ, T);
    auto at = [&](long t) { return S[static_cast<size_t>(t)]; };

    rep.non_negligible_dividend = series_test(
        [&](long t) { return econ.log_D(t) - static_cast<double>(t) * logn - std::log(econ.ey(t)); },
        econ.tol);
    rep.high_interest = limit_zero_test(
        [&](long t) { return static_cast<double>(t) * logn + std::log(econ.ey(t)) - at(t); },
        econ.tol);
    rep.not_too_low_interest =
        series_test([&](long t) { return econ.log_D(t) - at(t); }, econ.tol);

    rep.no_bubbly_equilibria = rep.non_negligible_dividend.verdict == Verdict::Diverges ||
                               rep.high_interest.verdict == LimitVerdict::ToZero;
    rep.bubbleless_exists = rep.not_too_low_interest.verdict == Verdict::Converges;
    rep.unique_bubbleless = rep.bubbleless_exists && econ.add_assum();
    rep.unique_equilibrium_bubbleless = rep.no_bubbly_equilibria && econ.add_assum();
    return rep;
}

ConditionBReport condition_B_check(const Economy& econ, const ConditionBSpec& spec) {
    if (!(spec.eps_bar > 0 && spec.eps_bar < 1))
        throw InvalidEconomy("eps_bar must lie in (0, 1)");
    ConditionBReport rep;
    const long T = econ.tol.series_T;
    auto X = [&](long t) { return eval_sequence(spec.X, t); };
    auto gam = [&](long t) { return spec.gamma ? eval_sequence(*spec.gamma, t) : 1.0; };

    {
        ClauseResult c;
        c.name = "not-too-low-dividend";
        KahanSum acc;
        std::vector<double> logX(static_cast<size_t>(T + 1), 0.0);
        for (long t = 1; t <= T; ++t) {
            const double x = X(t);
            if (!(x > 0)) throw InvalidEconomy("X_t must be > 0 (fails at t=" + std::to_string(t) + ")");
            acc.add(std::log(x));
            logX[static_cast<size_t>(t)] = acc.value();
        }
        const SeriesVerdict sv = series_test(
            [&](long t) { return econ.log_D(t) - logX[static_cast<size_t>(t)]; }, econ.tol);
        c.pass = sv.verdict == Verdict::Diverges;
        c.detail = std::string("sum D_t/(X_1...X_t): ") + verdict_name(sv.verdict) + " (" + sv.method + ")";
        rep.clauses.push_back(c);
    }
    {
        ClauseResult c;
        c.name = "low-interest-growth-bound";
        c.pass = true;
        for (long t = spec.T_start; t < T && c.pass; ++t) {
            const double bound = econ.n * econ.ey(t + 1) * gam(t + 1) / (econ.ey(t) * gam(t));
            if (X(t + 1) > bound * (1.0 + kClauseSlack)) {
                c.pass = false;
                c.t = t;
                c.X = X(t + 1);
                c.detail = "X_{t+1} exceeds n e^y_{t+1} gamma_{t+1}/(e^y_t gamma_t) = " +
                           std::to_string(bound);
            }
        }
        if (c.pass) c.detail = "X_{t+1} <= n e^y_{t+1} gamma_{t+1}/(e^y_t gamma_t) for sampled t";
        rep.clauses.push_back(c);
    }
    {
        ClauseResult c;
        c.name = "low-interest-fixed-point";
        c.pass = true;
        const auto eps = eps_grid(spec.eps_bar);
        for (long t = spec.T_start; t < T && c.pass; ++t) {
            const double g = econ.eo(t + 1) / econ.ey(t);
            const double xbar = eval_sequence(spec.Xbar, t + 1);
            const double cap = X(t + 1) * (1.0 + kClauseSlack);
            for (double e : eps) {
                const double eg = e * gam(t);
                auto F = [&](double x) { return ratio_or_nan(econ, t, 1.0 - eg, g + x * eg) - x; };
                double xp = 0.0, fp = F(0.0);
                auto report = [&](double root) {
                    if (root > cap && c.pass) {
                        c.pass = false;
                        c.t = t;
                        c.eps = e;
                        c.X = root;
                        c.detail = "fixed point X exceeds X_{t+1}";
                    }
                };
                if (fp == 0.0) report(0.0);
                for (int j = 1; j <= kRootScan; ++j) {
                    const double x = xbar * j / kRootScan;
                    const double fx = F(x);
                    if (fx == 0.0) report(x);
                    if (std::isfinite(fp) && std::isfinite(fx) && (fp < 0) != (fx < 0) && fx != 0.0 &&
                        fp != 0.0) {
                        double lo = xp, hi = x, flo = fp;
                        for (int it = 0; it < 100; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            if (mid == lo || mid == hi) break;
                            const double fm = F(mid);
                            if ((fm < 0) == (flo < 0)) {
                                lo = mid;
                                flo = fm;
                            } else {
                                hi = mid;
                            }
                        }
                        report(0.5 * (lo + hi));
                    }
                    xp = x;
                    fp = fx;
                }
                if (!c.pass) break;
            }
        }
        if (c.pass) c.detail = "every fixed point on [0, Xbar_{t+1}] lies below X_{t+1}";
        rep.clauses.push_back(c);
    }
    rep.low_dividend = low_dividend_series(econ, spec.gamma);
    conclude(rep, spec.gamma.has_value());
    return rep;
}

ConditionBReport condition_B_auto(const Economy& econ, double eps_bar1, double eps_bar2,
                                  long T_start) {
    if (!(eps_bar1 > 0 && eps_bar1 < 1) || !(eps_bar2 > 0))
        throw InvalidEconomy("eps_bar1 must lie in (0, 1) and eps_bar2 must be > 0");
    ConditionBReport rep;
    const long T = econ.tol.series_T;
    const auto e1 = eps_grid(eps_bar1), e2 = eps_grid(eps_bar2);
    double R = 0.0;
    for (long t = T_start; t < T; ++t) {
        const double g = econ.eo(t + 1) / econ.ey(t);
        for (double a : e1)
            for (double b : e2) {
                const double r = ratio_or_nan(econ, t, 1.0 - a, g + b);
                if (std::isfinite(r)) R = std::max(R, r);
            }
    }
    rep.R = R;

    {
        ClauseResult c;
        c.name = "constant-rate-growth-bound";
        c.pass = R > 0;
        for (long t = T_start; t < T && c.pass; ++t) {
            const double bound = econ.n * econ.ey(t + 1) / econ.ey(t);
            if (R > bound * (1.0 + kClauseSlack)) {
                c.pass = false;
                c.t = t;
                c.X = R;
                c.detail = "R exceeds n e^y_{t+1}/e^y_t = " + std::to_string(bound);
            }
        }
        if (c.pass) c.detail = "R <= n e^y_{t+1}/e^y_t for sampled t";
        rep.clauses.push_back(c);
    }
    {
        ClauseResult c;
        c.name = "not-too-low-dividend";
        const double logR = std::log(R);
        const SeriesVerdict sv = series_test(
            [&](long t) { return econ.log_D(t) - static_cast<double>(t) * logR; }, econ.tol);
        const double root = limsup_root(econ);
        bool growth = true;
        for (long t = T_start; t < T && growth; ++t)
            if (!(R <= std::exp(econ.log_D(t + 1) - econ.log_D(t)))) growth = false;
        c.pass = sv.verdict == Verdict::Diverges || R < root || growth;
        c.X = R;
        c.detail = std::string("sum D_s/R^s: ") + verdict_name(sv.verdict) +
                   "; limsup D_t^(1/t) = " + std::to_string(root) +
                   (growth ? "; R <= D_{t+1}/D_t on the window" : "; R > D_{t+1}/D_t somewhere");
        rep.clauses.push_back(c);
    }
    rep.low_dividend = low_dividend_series(econ, std::nullopt);
    conclude(rep, false);
    return rep;
}

double limsup_root(const Economy& econ, std::string* method) {
    const SequenceGen& g = econ.dividend;
    if (g.kind() == SequenceGen::Kind::Geometric && g.c0() > 0) {
        if (method) *method = "analytic-geometric";
        return econ.basis == DividendBasis::PerCapita ? g.ratio() * econ.n : g.ratio();
    }
    if (method) *method = "max-last-half";
    const long T = econ.tol.series_T;
    double best = 0.0;
    for (long t = std::max<long>(1, T / 2); t <= T; ++t) {
        const double l = econ.log_D(t);
        if (l == -kInf) continue;
        best = std::max(best, std::exp(l / static_cast<double>(t)));
    }
    return best;
}

RegimeDecision decide_regime(const RegimeInputs& in) {
    RegimeDecision d;
    const bool knife = std::abs(in.rstar - in.n) <= 1e-12 * in.n;
    if (!knife && in.rstar > in.n) {
        d.regime = Regime::UniqueBubbleless;
        d.citations.push_back("high-interest-rate: R* > n gives a unique, bubbleless equilibrium");
        return d;
    }
    if (in.sum_d == Verdict::Diverges) {
        d.regime = Regime::UniqueBubbleless;
        d.citations.push_back(
            "non-summable-dividends: sum D_t/n^t = inf gives a unique, bubbleless equilibrium");
        return d;
    }
    if (in.sum_d == Verdict::Inconclusive) {
        d.reason = "sum D_t/n^t is inconclusive at this horizon";
        return d;
    }
    if (knife) {
        d.regime = Regime::KnifeEdgeRstarEqualsN;
        d.citations.push_back(
            "knife-edge: R* = n and sum D_t/n^t < inf gives a unique, bubbleless equilibrium");
        return d;
    }
    if (in.sum_D_rstar == Verdict::Converges) {
        d.regime = Regime::Continuum;
        d.citations.push_back(
            "low-rate-continuum: R* < n and sum D_t/R*^t < inf gives a continuum of equilibria");
        return d;
    }
    if (in.root > in.rstar * (1.0 + 1e-9)) {
        d.regime = Regime::UniqueBubbly;
        d.citations.push_back(
            "low-rate-unique-bubbly: R* < n, sum D_t/n^t < inf and R* < limsup D_t^(1/t) gives a "
            "unique, asymptotically bubbly equilibrium");
        return d;
    }
    d.reason = in.sum_D_rstar == Verdict::Inconclusive
                   ? "sum D_t/R*^t is inconclusive and limsup D_t^(1/t) <= R*"
                   : "R* < n, sum D_t/R*^t = inf and limsup D_t^(1/t) <= R*: neither sufficient "
                     "condition applies";
    return d;
}

RegimeReport classify_regime(const Economy& econ) {
    if (!econ.stationary_endowments())
        throw NotApplicable("classification needs stationary endowments; use the condition checkers");
    if (!(econ.eo(0) > 0) || !econ.add_assum())
        throw NotApplicable("classification needs e^o > 0 and nondecreasing c v'(c)");
    RegimeReport rep;
    rep.R_star = benchmark_rate(econ, 0);
    rep.n = econ.n;
    const double logn = std::log(econ.n), logr = std::log(rep.R_star);
    rep.tests["sum_D_over_n^t"] = series_test(
        [&](long t) { return econ.log_D(t) - static_cast<double>(t) * logn; }, econ.tol);
    rep.tests["sum_D_over_Rstar^t"] = series_test(
        [&](long t) { return econ.log_D(t) - static_cast<double>(t) * logr; }, econ.tol);
    rep.root_test = limsup_root(econ, &rep.root_method);

    RegimeInputs in;
    in.rstar = rep.R_star;
    in.n = rep.n;
    in.sum_d = rep.tests["sum_D_over_n^t"].verdict;
    in.sum_D_rstar = rep.tests["sum_D_over_Rstar^t"].verdict;
    in.root = rep.root_test;
    const RegimeDecision d = decide_regime(in);
    rep.regime = d.regime;
    rep.citations = d.citations;
    rep.reason = d.reason;

    const bool high_rate = rep.R_star > rep.n && std::abs(rep.R_star - rep.n) > 1e-12 * rep.n;
    switch (rep.regime) {
        case Regime::UniqueBubbleless:
            rep.optimality.push_back({"unique", high_rate ? "Pareto optimal" : "not established"});
            break;
        case Regime::Continuum:
            rep.optimality.push_back({"lower", "not Pareto optimal"});
            rep.optimality.push_back({"interior", "not Pareto optimal"});
            rep.optimality.push_back({"maximal", "asymptotically bubbly and Pareto optimal"});
            break;
        case Regime::UniqueBubbly:
            rep.optimality.push_back({"unique", "asymptotically bubbly and Pareto optimal"});
            break;
        case Regime::KnifeEdgeRstarEqualsN:
            rep.optimality.push_back({"unique", "not established"});
            break;
        case Regime::Undetermined:
            rep.optimality.push_back({"all", "not established"});
            break;
    }
    return rep;
}

GrowthRateProbe growth_rate_probe(const Economy& econ, const EquilibriumPath& path, long T) {
    if (T <= 0) T = econ.tol.series_T;
    T = std::min(T, path.last() - 1);
    if (T < 2) throw DomainError("growth-rate probe needs a longer path");
    GrowthRateProbe out;
    out.ratio_min = out.root_min = kInf;
    double logQ = 0.0;
    KahanSum acc;
    for (long t = 1; t <= T; ++t) {
        acc.add(-std::log(path.R[static_cast<size_t>(t)]));
        logQ = acc.value();
        if (t < T / 2) continue;
        const double lD = econ.log_D(t), lD1 = econ.log_D(t + 1);
        const double ratio = std::exp(lD1 - lD - std::log(path.R[static_cast<size_t>(t + 1)]));
        const double root = std::exp((lD + logQ) / static_cast<double>(t));
        out.ratio_min = std::min(out.ratio_min, ratio);
        out.root_min = std::min(out.root_min, root);
    }
    out.ratio_pass = out.ratio_min <= kProbeThreshold;
    out.root_pass = out.root_min <= kProbeThreshold;
    return out;
}

}  // namespace olg

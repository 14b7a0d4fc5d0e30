#include "olg/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "olg/bubble.hpp"
#include "olg/errors.hpp"

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelFloor = 1e-6;
// Largest relative drift of a surrogate over the final half that still counts
// as "not trending away".
constexpr double kTrendDrift = 0.1;

long check_horizon(const Economy& econ, const EquilibriumPath& path) {
    return std::min(econ.tol.series_T, path.last());
}

double supply(const Economy& econ, long t) { return econ.ey(t) + econ.eo(t) / econ.n + econ.d(t); }

// Running extremum over t in [first, last] and the slope of the log (or the
// raw value when some entry is not positive).
template <class F>
Surrogate final_half(long first, long last, bool take_min, F value) {
    Surrogate s;
    std::vector<double> xs, ys;
    bool positive = true;
    s.value = take_min ? kInf : -kInf;
    for (long t = first; t <= last; ++t) {
        const double v = value(t);
        s.value = take_min ? std::min(s.value, v) : std::max(s.value, v);
        positive = positive && v > 0 && std::isfinite(v);
        xs.push_back(static_cast<double>(t));
        ys.push_back(v);
    }
    if (positive)
        for (double& y : ys) y = std::log(y);
    s.slope = xs.size() >= 2 ? least_squares(xs, ys).slope : 0.0;
    return s;
}

// Relative decline of a positive quantity over the window implied by a log slope.
bool not_falling(const Surrogate& s, long span) { return s.slope * span >= -kTrendDrift; }

std::vector<double> log_R_products(const EquilibriumPath& path, long T) {
    std::vector<double> out(static_cast<size_t>(T) + 1, 0.0);
    KahanSum acc;
    for (long t = 1; t <= T; ++t) {
        acc.add(std::log(path.R[static_cast<size_t>(t)]));
        out[static_cast<size_t>(t)] = acc.value();
    }
    return out;
}

bool closed_form_curvature(const Utility& u) {
    return u.family() == Family::Log || u.family() == Family::CRRA ||
           (u.family() == Family::CRRA2 && u.sigma_young() == u.sigma_old());
}

double young_sigma(const Utility& u) { return u.family() == Family::Log ? 1.0 : u.sigma_young(); }

constexpr int kInnerSamples = 33;

double sampled_extremum(double lo, double hi, bool take_min, const ScalarFn& f) {
    double best = take_min ? kInf : -kInf;
    for (int i = 0; i < kInnerSamples; ++i) {
        const double x = lo + (hi - lo) * i / (kInnerSamples - 1);
        const double v = f(x);
        best = take_min ? std::min(best, v) : std::max(best, v);
    }
    return best;
}

}  // namespace

const char* optimality_name(Optimality o) {
    switch (o) {
        case Optimality::Optimal: return "Optimal";
        case Optimality::NotOptimal: return "NotOptimal";
        case Optimality::Undetermined: return "Undetermined";
    }
    return "?";
}

SupportPriceResult support_price_test(const Economy& econ, const EquilibriumPath& path,
                                      const PriceDecomposition& dec) {
    SupportPriceResult r;
    const long T = std::min<long>(check_horizon(econ, path), static_cast<long>(dec.logP.size()) - 1);
    if (T < 2) return r;
    const long mid = T / 2;
    auto log_pc = [&](long t) {
        return dec.logP[static_cast<size_t>(t)] + std::log(path.cy[static_cast<size_t>(t)]);
    };
    Surrogate lp;
    {
        std::vector<double> xs, ys;
        lp.value = kInf;
        for (long t = mid; t <= T; ++t) {
            lp.value = std::min(lp.value, log_pc(t));
            xs.push_back(static_cast<double>(t));
            ys.push_back(log_pc(t));
        }
        lp.slope = least_squares(xs, ys).slope;
    }
    r.threshold = std::log(1e-8) + log_pc(0);
    r.level_pass = lp.value < r.threshold;
    lp.pass = r.level_pass && lp.slope < 0;
    r.liminf_Pcy = lp;
    r.liminf_Pcy.value = std::exp(lp.value);

    r.liminf_R = final_half(mid, T, true, [&](long t) { return path.R[static_cast<size_t>(t)] - econ.n; });
    double e_first = 0, e_final = 0;
    for (long t = 0; t <= T; ++t) {
        double& slot = t < mid ? e_first : e_final;
        slot = std::max(slot, supply(econ, t));
    }
    const bool bounded = e_final <= 1.1 * e_first;
    r.liminf_R.pass = r.liminf_R.value > kLevelFloor * econ.n && not_falling(r.liminf_R, T - mid);
    r.shortcut_pass = r.liminf_R.pass && bounded;
    r.liminf_R.value += econ.n;
    r.pass = lp.pass || r.shortcut_pass;
    return r;
}

SeriesVerdict cass_criterion(const EquilibriumPath& path, const Economy& econ) {
    const long T = check_horizon(econ, path);
    if (T < 2) throw DomainError("cass_criterion needs a path of at least two periods");
    const auto logR = log_R_products(path, T);
    const double logn = std::log(econ.n);
    auto term = [&](long t) {
        return logR[static_cast<size_t>(t)] - t * logn - std::log(supply(econ, t));
    };
    return series_test_range(term, 1, T, std::min(econ.tol.tail_ratio_window, T - 1));
}

double strictness_constant(const Economy& econ, const EquilibriumPath& path, double h) {
    if (!(h > 0 && h <= 1)) throw DomainError("strictness_constant needs h in (0, 1]");
    const long T = check_horizon(econ, path);
    const Utility& u = econ.utility;
    for (long t = 0; t <= T; ++t)
        if (!(path.cy[static_cast<size_t>(t)] > 0)) return 0.0;
    // -u'' is decreasing for power marginal utility, so the inner inf sits at
    // x = c and the product reduces to sigma/2.
    if (closed_form_curvature(u)) return 0.5 * young_sigma(u);

    std::vector<double> vals;
    for (long t = 0; t <= T; ++t) {
        const double c = path.cy[static_cast<size_t>(t)];
        const double inner = sampled_extremum((1 - h) * c, c, true, [&](double x) { return -0.5 * u.upp(x); });
        vals.push_back(c / u.up(c) * inner);
    }
    const double mu = *std::min_element(vals.begin(), vals.end());
    const long mid = T / 2;
    const Surrogate tail = final_half(mid, T, true, [&](long t) { return vals[static_cast<size_t>(t)]; });
    if (!(mu > 0) || !not_falling(tail, T - mid)) return 0.0;
    return mu;
}

SmoothnessConstants smoothness_constants(const Economy& econ, const EquilibriumPath& path, double x) {
    if (!(x > 0 && x < 1)) throw DomainError("smoothness_constants needs x in (0, 1)");
    const Utility& u = econ.utility;
    SmoothnessConstants sc;
    if (closed_form_curvature(u)) {
        const double s = young_sigma(u);
        sc.theta2 = 0.5 * s * (1 + 1e-6);
        sc.theta1 = 0.5 * s / std::pow(x, 1 + s) * (1 + 1e-6);
        sc.method = "crra-closed-form";
        return sc;
    }
    sc.method = "sampled-sup";
    const long T = std::min(check_horizon(econ, path), path.last() - 1);
    std::vector<double> m1(static_cast<size_t>(T) + 1), m2(static_cast<size_t>(T) + 1);
    for (long t = 0; t <= T; ++t) {
        const double cy = path.cy[static_cast<size_t>(t)];
        const double co = path.co[static_cast<size_t>(t) + 1];
        m1[static_cast<size_t>(t)] =
            cy / u.up(cy) * sampled_extremum(x * cy, cy, false, [&](double c) { return -0.5 * u.upp(c); });
        const double top = std::max(co, econ.n * supply(econ, t + 1));
        m2[static_cast<size_t>(t)] =
            co / u.vp(co) * sampled_extremum(co, top, false, [&](double c) { return -0.5 * u.vpp(c); });
    }
    auto sup_checked = [&](const std::vector<double>& m, const char* which) {
        double first = 0, last = 0;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!std::isfinite(m[i]))
                throw SmoothnessUnbounded(std::string(which) + " is not finite at t=" + std::to_string(i));
            double& slot = i < m.size() / 2 ? first : last;
            slot = std::max(slot, m[i]);
        }
        if (last > 2 * first)
            throw SmoothnessUnbounded(std::string(which) + " more than doubles over the final half of the horizon");
        return std::max(first, last);
    };
    sc.theta1 = sup_checked(m1, "M1");
    sc.theta2 = sup_checked(m2, "M2");
    return sc;
}

DominationWitness domination_check(const Economy& econ, const EquilibriumPath& path,
                                   const EquilibriumPath& better, long T) {
    DominationWitness w;
    w.a0 = path.a0();
    w.comparison_a0 = better.a0();
    const long cap = std::min(path.last(), better.last()) - 1;
    w.T = T > 0 ? std::min(T, cap) : std::min(econ.tol.series_T, cap);
    if (!path.survived() || !better.survived() || w.T < 0 || !(better.a0() > path.a0())) return w;
    // Initial old gain from the higher asset value.
    w.min_margin = econ.utility.v_gain(path.co[0], better.co[0] - path.co[0]);
    w.argmin_t = -1;
    for (long t = 0; t <= w.T; ++t) {
        const double m = welfare_difference(econ, better, path, t);
        if (m < w.min_margin) {
            w.min_margin = m;
            w.argmin_t = t;
        }
    }
    w.holds = w.min_margin > 1e-10;
    return w;
}

ParetoCertificate certify(const Economy& econ, const EquilibriumPath& path,
                          const PriceDecomposition& dec, const CertifyOptions& opts) {
    if (!path.survived()) throw DomainError("certify needs a path that survived its horizon");
    ParetoCertificate c;
    const long T = check_horizon(econ, path);
    const long mid = T / 2;
    const size_t last = static_cast<size_t>(path.last());

    c.support = support_price_test(econ, path, dec);
    c.liminf_Pcy = c.support.liminf_Pcy.value;
    c.cass_sum = cass_criterion(path, econ);
    c.mu = strictness_constant(econ, path, opts.h);
    try {
        const auto sc = smoothness_constants(econ, path, opts.x);
        c.theta1 = sc.theta1;
        c.theta2 = sc.theta2;
        c.smoothness_finite = true;
    } catch (const SmoothnessUnbounded& e) {
        c.note = e.what();
    }

    auto at = [&](const std::vector<double>& v, long t) { return v[std::min(static_cast<size_t>(t), last)]; };
    c.asset_share = final_half(mid, T, false, [&](long t) { return at(path.a, t) / supply(econ, t); });
    c.asset_share.pass = c.asset_share.value > kLevelFloor && not_falling(c.asset_share, T - mid);
    c.saving_rate = final_half(mid, T, true, [&](long t) { return at(path.a, t) / econ.ey(t); });
    c.saving_rate.pass = c.saving_rate.value > kLevelFloor && not_falling(c.saving_rate, T - mid);
    c.young_share = final_half(mid, T, true, [&](long t) { return at(path.cy, t) / supply(econ, t); });
    c.young_share.pass = c.young_share.value > kLevelFloor && not_falling(c.young_share, T - mid);
    c.old_share = final_half(mid, T, false, [&](long t) { return at(path.co, t) / (econ.n * supply(econ, t)); });
    c.old_share.pass = c.old_share.value < 1 - kLevelFloor &&
                       c.old_share.value * std::exp(std::max(0.0, c.old_share.slope) * T) < 1;
    const long Tm = std::min<long>(T, static_cast<long>(last) - 1);
    c.old_price_ratio = final_half(std::min(mid, Tm), Tm, true, [&](long t) {
        return econ.n / at(path.R, t + 1) * at(path.co, t + 1) / supply(econ, t);
    });
    c.old_price_ratio.pass = c.old_price_ratio.value > kLevelFloor && not_falling(c.old_price_ratio, Tm - mid);

    const auto bt = bubble_test_path(econ, path, dec);
    c.bubbleless = bt.verdict == BubbleVerdict::Bubbleless;

    std::vector<std::string> optimal, not_optimal;
    if (c.support.liminf_Pcy.pass) optimal.push_back("support-price-limit");
    if (c.support.shortcut_pass) optimal.push_back("interest-above-growth-shortcut");
    if (c.cass_sum.verdict == Verdict::Diverges && c.mu > 0)
        optimal.push_back("cass-divergence-with-strictness");
    if (c.asset_share.pass && c.mu > 0) optimal.push_back("significant-asset-value-with-strictness");
    if (c.bubbleless && c.saving_rate.pass) optimal.push_back("bubbleless-with-positive-saving-rate");

    if (opts.comparison) {
        c.domination = domination_check(econ, path, *opts.comparison);
        if (c.domination->holds) not_optimal.push_back("dominated-by-higher-equilibrium");
    }
    if (c.cass_sum.verdict == Verdict::Converges && c.smoothness_finite && c.young_share.pass &&
        c.old_share.pass && c.old_price_ratio.pass)
        not_optimal.push_back("cass-convergence-with-smoothness");

    if (!optimal.empty() && !not_optimal.empty()) {
        c.verdict = Optimality::Undetermined;
        c.rationale = optimal;
        c.rationale.insert(c.rationale.end(), not_optimal.begin(), not_optimal.end());
        c.note = "sufficient conditions for both verdicts fired at this horizon";
    } else if (!optimal.empty()) {
        c.verdict = Optimality::Optimal;
        c.rationale = optimal;
    } else if (!not_optimal.empty()) {
        c.verdict = Optimality::NotOptimal;
        c.rationale = not_optimal;
    }
    return c;
}

WelfareRankReport welfare_rank(const Economy& econ, const std::vector<double>& a0_list, long T,
                               const SimOptions& opts) {
    WelfareRankReport rep;
    rep.T = T > 0 ? T : econ.tol.series_T;
    std::vector<EquilibriumPath> paths(a0_list.size());
    std::vector<size_t> alive;
    for (size_t i = 0; i < a0_list.size(); ++i) {
        RankEntry e;
        e.a0 = a0_list[i];
        try {
            paths[i] = simulate(econ, e.a0, rep.T + 1, opts);
            e.status = status_name(paths[i].status);
            e.survived = paths[i].survived();
            if (!e.survived)
                e.error = "path fails at t=" + std::to_string(paths[i].violation_t) + " (" + e.status + ")";
            else
                alive.push_back(i);
        } catch (const Error& err) {
            e.status = "error";
            e.error = err.what();
        }
        rep.entries.push_back(e);
    }
    std::stable_sort(alive.begin(), alive.end(), [&](size_t x, size_t y) { return a0_list[x] < a0_list[y]; });
    rep.order = alive;
    rep.min_margin = kInf;
    for (size_t i = 0; i < alive.size(); ++i) {
        for (size_t j = i + 1; j < alive.size(); ++j) {
            RankPair p;
            p.lo = alive[i];
            p.hi = alive[j];
            p.min_margin = kInf;
            for (long t = 0; t <= rep.T; ++t) {
                const double m = welfare_difference(econ, paths[p.hi], paths[p.lo], t);
                p.margin.push_back(m);
                if (m < p.min_margin) {
                    p.min_margin = m;
                    p.argmin_t = t;
                }
            }
            if (p.min_margin < -1e-10)
                throw RankViolation("a0=" + std::to_string(a0_list[p.hi]) + " is worse than a0=" +
                                    std::to_string(a0_list[p.lo]) + " at t=" + std::to_string(p.argmin_t) +
                                    " by " + std::to_string(-p.min_margin));
            rep.min_margin = std::min(rep.min_margin, p.min_margin);
            rep.pairs.push_back(std::move(p));
        }
    }
    if (rep.pairs.empty()) rep.min_margin = 0.0;
    rep.strict = rep.pairs.empty() || rep.min_margin > 1e-10;
    return rep;
}

}  // namespace olg

#include "olg/equilibrium_set.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <exception>

#include "olg/euler.hpp"

namespace olg {

namespace {

constexpr int kSeeds = 64;
constexpr int kInteriorSamples = 16;
constexpr double kSeedMargin = 1e-6;
constexpr double kStabilityRel = 1e-3;

struct Edge {
    double inside;
    double resolution;
};

// Bisects between a non-surviving point and a surviving one.
Edge bisect_survival_edge(const Economy& econ, double outside, double inside, long T, double tol) {
    while (std::abs(inside - outside) > tol) {
        const double mid = outside + 0.5 * (inside - outside);
        if (mid == outside || mid == inside) break;
        if (fate_of(econ, mid, T) == Fate::Survive)
            inside = mid;
        else
            outside = mid;
    }
    return {inside, std::abs(inside - outside)};
}

double extrapolate(double x1, double x2, double x3, bool& used) {
    used = false;
    const double d1 = x2 - x1, d2 = x3 - x2;
    if (d1 == 0.0) return x3;
    const double r = d2 / d1;
    if (!(r > 0.0 && r < 1.0)) return x3;
    used = true;
    return x3 + d2 * r / (1.0 - r);
}

}  // namespace

const char* set_kind_name(SetKind k) {
    switch (k) {
        case SetKind::Unique: return "Unique";
        case SetKind::Continuum: return "Continuum";
        case SetKind::Empty: return "Empty";
    }
    return "?";
}

std::vector<double> seed_grid(const Economy& econ) {
    const double ey = econ.ey(0);
    const double lo = std::log(kSeedMargin * ey), hi = std::log((1.0 - kSeedMargin) * ey);
    std::vector<double> g(kSeeds);
    for (int i = 0; i < kSeeds; ++i) g[i] = std::exp(lo + (hi - lo) * i / (kSeeds - 1));
    g.front() = kSeedMargin * ey;
    g.back() = (1.0 - kSeedMargin) * ey;
    return g;
}

Fate fate_of(const Economy& econ, double a0, long T) { return probe_fate(econ, 0, a0, T); }

std::vector<Fate> seed_fates(const Economy& econ, const std::vector<double>& seeds, long T,
                             Kernel kernel) {
    const long N = static_cast<long>(seeds.size());
    std::vector<Fate> out(seeds.size(), Fate::Survive);
    if (kernel == Kernel::Serial) {
        for (long i = 0; i < N; ++i) out[i] = fate_of(econ, seeds[i], T);
        return out;
    }
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < N; ++i) {
        try {
            out[i] = fate_of(econ, seeds[i], T);
        } catch (...) {
#pragma omp critical(olg_seed_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

SurvivalInterval survival_interval(const Economy& econ, long T, Kernel kernel) {
    if (!econ.add_assum())
        throw AssumptionViolated(
            "survival bisection needs positive old-age endowments and nondecreasing c v'(c)");
    const double tol = econ.tol.bisect_tol;
    const double ey0 = econ.ey(0);
    const auto seeds = seed_grid(econ);
    const auto fates = seed_fates(econ, seeds, T, kernel);

    SurvivalInterval out;
    out.T = T;
    for (size_t i = 0; i < seeds.size(); ++i) out.probes.push_back({seeds[i], fates[i], T});

    int first = -1, last = -1;
    for (int i = 0; i < kSeeds; ++i) {
        if (fates[i] != Fate::Survive) continue;
        if (first < 0) first = i;
        last = i;
        ++out.seeds_surviving;
    }

    double resolution = 0.0;
    if (first >= 0) {
        if (out.seeds_surviving != last - first + 1)
            out.note = "surviving seeds are not contiguous";
        const Edge lo = bisect_survival_edge(econ, first > 0 ? seeds[first - 1] : 0.0, seeds[first],
                                             T, tol);
        const Edge hi = bisect_survival_edge(
            econ, last + 1 < kSeeds ? seeds[last + 1] : ey0, seeds[last], T, tol);
        out.lower = lo.inside;
        out.upper = hi.inside;
        resolution = std::max(lo.resolution, hi.resolution);
    } else {
        // No seed survives: locate the collapse/hit transition and search it.
        double c = -1.0, h = -1.0;
        if (fates.front() == Fate::Hit) {
            c = 0.0;
            h = seeds.front();
        } else if (fates.back() == Fate::Collapse) {
            c = seeds.back();
            h = ey0;
        } else {
            for (int i = 0; i + 1 < kSeeds; ++i)
                if (fates[i] == Fate::Collapse && fates[i + 1] == Fate::Hit) {
                    c = seeds[i];
                    h = seeds[i + 1];
                    break;
                }
        }
        if (c < 0) throw EmptySurvivalSet("no collapse/hit transition among the 64 seeds");
        bool found = false;
        while (h - c > tol) {
            const double mid = c + 0.5 * (h - c);
            if (mid == c || mid == h) break;
            const Fate f = fate_of(econ, mid, T);
            if (f == Fate::Collapse) {
                c = mid;
            } else if (f == Fate::Hit) {
                h = mid;
            } else {
                const Edge lo = bisect_survival_edge(econ, c, mid, T, tol);
                const Edge hi = bisect_survival_edge(econ, h, mid, T, tol);
                out.lower = lo.inside;
                out.upper = hi.inside;
                resolution = std::max(lo.resolution, hi.resolution);
                found = true;
                break;
            }
        }
        if (!found) {
            out.lower = out.upper = c + 0.5 * (h - c);
            out.degenerate = true;
            out.verified = false;
            resolution = h - c;
            out.note = "surviving set thinner than the bisection resolution";
        }
    }
    out.probes.push_back({out.lower, fate_of(econ, out.lower, T), T});
    out.probes.push_back({out.upper, fate_of(econ, out.upper, T), T});

    if (!out.degenerate) {
        std::vector<double> interior(kInteriorSamples);
        for (int k = 0; k < kInteriorSamples; ++k)
            interior[k] = out.lower + (out.upper - out.lower) * (k + 0.5) / kInteriorSamples;
        const auto f = seed_fates(econ, interior, T, kernel);
        bool ok = out.probes[out.probes.size() - 2].fate == Fate::Survive &&
                  out.probes.back().fate == Fate::Survive;
        for (int k = 0; k < kInteriorSamples; ++k) {
            out.probes.push_back({interior[k], f[k], T});
            if (f[k] != Fate::Survive) ok = false;
        }
        out.verified = ok;
        if (!ok && out.note.empty()) out.note = "interior sample failed to survive";
    }
    out.resolution = resolution;
    return out;
}

EquilibriumSetResult equilibrium_set(const Economy& econ, long T0, Kernel kernel) {
    if (T0 <= 0) T0 = econ.horizon;
    const double tol = econ.tol.bisect_tol;
    const double ey0 = econ.ey(0);
    EquilibriumSetResult res;
    if (econ.stationary_endowments()) {
        try {
            res.steady_state = steady_state_a_hat(econ);
        } catch (const NoPositiveSteadyState&) {
        }
    }

    std::vector<SurvivalInterval> ivs;
    for (long T : {T0, 2 * T0, 4 * T0}) {
        res.horizon_used = T;
        try {
            ivs.push_back(survival_interval(econ, T, kernel));
        } catch (const EmptySurvivalSet& e) {
            res.kind = SetKind::Empty;
            res.note = e.what();
            return res;
        }
        const auto& iv = ivs.back();
        res.rungs.push_back({T, iv.lower, iv.upper, iv.upper - iv.lower, iv.verified});
    }
    const auto& r1 = res.rungs[0];
    const auto& r2 = res.rungs[1];
    const auto& r3 = res.rungs[2];
    res.probes = ivs.back().probes;
    res.note = ivs.back().note;

    double lo = extrapolate(r1.lower, r2.lower, r3.lower, res.lower_extrapolated);
    double hi = extrapolate(r1.upper, r2.upper, r3.upper, res.upper_extrapolated);
    lo = std::clamp(lo, r3.lower, r3.upper);
    hi = std::clamp(hi, r3.lower, r3.upper);
    if (hi < lo) hi = lo;
    res.lower = lo;
    res.upper = hi;
    res.bracket_width = ivs.back().resolution;
    res.width = r3.width;

    const double floor = 1e-9 * ey0;
    auto unstable = [&](double x2, double x3) {
        return std::abs(x3 - x2) > kStabilityRel * std::max(std::abs(x3), floor);
    };
    bool any_unverified = false;
    for (const auto& r : res.rungs) any_unverified = any_unverified || !r.verified;
    const bool unique = r3.width <= 2 * tol &&
                        (r1.width <= 2 * tol || r1.width >= 10 * r3.width || any_unverified);
    res.kind = unique ? SetKind::Unique : SetKind::Continuum;

    if (unstable(r2.lower, r3.lower) || unstable(r2.upper, r3.upper))
        throw NonConvergedSet("endpoints moved by more than 1e-3 (relative) between the last two rungs",
                              res);
    return res;
}

double steady_state_a_hat(const Economy& econ) {
    if (!econ.stationary_endowments())
        throw NotApplicable("the steady state is defined for stationary endowments only");
    const double rstar = benchmark_rate(econ, 0);
    const double n = econ.n;
    if (std::abs(rstar - n) <= 1e-12 * n) return 0.0;
    if (rstar > n) throw NoPositiveSteadyState("R* >= n: no positive steady state");
    const double ey = econ.ey(0), eo = econ.eo(0), beta = econ.beta(0);
    const Utility& U = econ.utility;
    auto phi = [&](double a) { return U.up(ey - a) - beta * n * U.vp(eo + n * a); };
    double lo = eo > 0 ? 0.0 : 1e-12 * ey;
    double hi = std::nextafter(ey, 0.0);
    double flo = phi(lo), fhi = phi(hi);
    if (!(flo < 0) || !(fhi > 0))
        throw NoPositiveSteadyState("steady-state equation has no sign change on (0, e^y)");
    std::uintmax_t iters = 300;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
    const auto r = boost::math::tools::toms748_solve(phi, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
}

TiroleQuantities tirole_quantities(const Economy& econ) {
    const auto& g = econ.dividend;
    if (econ.utility.family() != Family::Log)
        throw ModelPreconditionFailed("the explicit model needs Log utility");
    if (g.kind() != SequenceGen::Kind::ClosedForm || g.closed_form_id() != kTiroleExplicitD)
        throw ModelPreconditionFailed("the dividend must be the tirole-explicit-d generator");
    if (!econ.stationary_endowments() || !(econ.eo(0) > 0))
        throw ModelPreconditionFailed("the explicit model needs constant endowments with e^o > 0");
    TiroleQuantities q{};
    q.x = g.param("x");
    q.d0 = g.param("d0");
    const double beta = econ.beta(0), ey = econ.ey(0), eo = econ.eo(0), n = econ.n;
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (!same(g.param("beta"), beta) || !same(g.param("ey"), ey) || !same(g.param("eo"), eo) ||
        !same(g.param("n"), n))
        throw ModelPreconditionFailed("dividend generator parameters differ from the economy");
    q.rstar = eo / (beta * ey);
    q.h = n * (1.0 + beta) / eo;
    if (!(q.rstar < n)) throw ModelPreconditionFailed("violated: R* < n");
    const double slack = 1.0 - q.x * (n / q.rstar - 1.0);
    if (!(slack > 0)) throw ModelPreconditionFailed("violated: 1 - x(n/R* - 1) > 0");
    q.K = q.h * q.x * (1.0 + q.x) / slack;
    q.rho = (q.x + 1.0) / q.x * q.rstar / n;
    q.d0_bound = 1.0 / q.K;
    if (!(q.d0 > 0 && q.d0 < q.d0_bound))
        throw ModelPreconditionFailed("violated: 0 < d0 < (1 - x(n/R* - 1))/(h x (1 + x)) = " +
                                      std::to_string(q.d0_bound));
    q.a_inf = (n / q.rstar - 1.0) / q.h;
    return q;
}

EquilibriumPath closed_form_path(const Economy& econ, const std::string& model_id, long T) {
    if (model_id == "tirole-explicit") {
        const TiroleQuantities tq = tirole_quantities(econ);
        EquilibriumPath path;
        path.horizon = T;
        path.source = "closed-form:tirole-explicit";
        path.a.reserve(static_cast<size_t>(T + 1));
        path.R.reserve(static_cast<size_t>(T + 1));
        for (long t = 0; t <= T; ++t) {
            const double d = econ.d(t);
            const double a = tq.a_inf + tq.x * d;
            path.R.push_back(t == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : econ.n * (a + d) / path.a.back());
            path.a.push_back(a);
        }
        path.survived_to = T;
        fill_path_quantities(econ, path);
        return path;
    }
    if (model_id == "log-no-old-endowment") {
        if (econ.utility.family() != Family::Log)
            throw ModelPreconditionFailed("log-no-old-endowment needs Log utility");
        for (long t = 0; t <= T + 1; ++t)
            if (econ.eo(t) != 0.0)
                throw ModelPreconditionFailed("violated: e^o_t = 0 for all t (fails at t=" +
                                              std::to_string(t) + ")");
        const double b = econ.beta(0);
        return simulate_no_old_endowment(econ, b * econ.ey(0) / (1.0 + b), T);
    }
    throw ModelPreconditionFailed("unknown closed-form model '" + model_id + "'");
}

}  // namespace olg

#include "olg/path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "olg/errors.hpp"
#include "olg/euler.hpp"

namespace olg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnderflowGuard = 1e-300;

bool collapsed(const Economy& econ, long t, double a) {
    return !(a > 0) || a < kUnderflowGuard * econ.ey(t);
}

// Bisects [x_bad, x_good] (either order) on `bad`, returning the point of the
// final pair that is not bad.
template <class Pred>
double bisect_edge(double x_bad, double x_good, Pred bad) {
    for (int it = 0; it < 200; ++it) {
        const double mid = x_bad + 0.5 * (x_good - x_bad);
        if (mid == x_bad || mid == x_good) break;
        if (bad(mid))
            x_bad = mid;
        else
            x_good = mid;
    }
    return x_good;
}

// Moves the raw iterate p (at period s) onto the boundary between survival
// and failure when such a boundary lies within delta of p. The kind of
// boundary (collapse or hit) comes from the shortest window over which the
// two ends of the bracket differ; the bisection then runs at the longest
// window that still separates them on that kind of failure.
double shadow(const Economy& econ, long s, double p, double delta, const SimOptions& opts) {
    const double lo = p - delta;
    const double hi = std::min(p + delta, std::nextafter(econ.ey(s), 0.0));
    if (!(lo > 0) || !(hi > lo)) return p;
    long best = -1;
    bool collapse_edge = false;
    for (long H : opts.windows) {
        const Fate flo = probe_fate(econ, s, lo, H);
        const Fate fhi = probe_fate(econ, s, hi, H);
        if (best < 0) {
            if (flo == fhi) {
                if (flo == Fate::Survive) continue;
                return p;
            }
            collapse_edge = flo == Fate::Collapse && fhi == Fate::Survive;
            best = H;
            continue;
        }
        const bool separated = collapse_edge ? (flo == Fate::Collapse && fhi != Fate::Collapse)
                                             : (flo != Fate::Hit && fhi == Fate::Hit);
        if (!separated) break;
        best = H;
    }
    if (best < 0) return p;
    if (collapse_edge) {
        return bisect_edge(lo, hi, [&](double v) {
            return probe_fate(econ, s, v, best) == Fate::Collapse;
        });
    }
    return bisect_edge(hi, lo, [&](double v) {
        return probe_fate(econ, s, v, best) == Fate::Hit;
    });
}

void mark_failure(EquilibriumPath& path, long t, PathStatus st) {
    path.status = st;
    path.violation_t = t;
}

}  // namespace

const char* status_name(PathStatus s) {
    switch (s) {
        case PathStatus::SurvivedHorizon: return "SurvivedHorizon";
        case PathStatus::CollapsedBelowZero: return "CollapsedBelowZero";
        case PathStatus::HitEndowmentBound: return "HitEndowmentBound";
    }
    return "?";
}

std::pair<double, double> forward_step(const Economy& econ, long t, double a) {
    const double R = g_solve(econ, t, a);
    return {R, a * R / econ.n - econ.d(t + 1)};
}

Fate probe_fate(const Economy& econ, long t, double a, long steps) {
    double x = a;
    for (long k = 0; k <= steps; ++k) {
        const long s = t + k;
        if (collapsed(econ, s, x)) return Fate::Collapse;
        if (!(x < econ.ey(s))) return Fate::Hit;
        if (k == steps) break;
        try {
            x = forward_step(econ, s, x).second;
        } catch (const NoFiniteRate&) {
            return Fate::Hit;
        }
    }
    return Fate::Survive;
}

EquilibriumPath simulate(const Economy& econ, double a0, long T, const SimOptions& opts) {
    if (!econ.old_endowment_positive() && econ.utility.family() == Family::Log)
        return simulate_no_old_endowment(econ, a0, T);

    EquilibriumPath path;
    path.horizon = T;
    path.source = opts.mode == SimMode::Shadowed ? "simulate:shadowed" : "simulate:raw";
    path.a.push_back(a0);
    path.R.push_back(kNaN);

    if (opts.mode == SimMode::Shadowed && opts.initial_snap_abs > 0 && a0 > 0 && a0 < econ.ey(0)) {
        const double snapped = shadow(econ, 0, a0, opts.initial_snap_abs, opts);
        if (snapped != a0) {
            ++path.snaps;
            path.max_correction = std::abs(snapped - a0) / a0;
            path.a.front() = snapped;
        }
    }
    const double start = path.a.front();
    if (collapsed(econ, 0, start)) {
        mark_failure(path, 0, PathStatus::CollapsedBelowZero);
    } else if (!(start < econ.ey(0))) {
        mark_failure(path, 0, PathStatus::HitEndowmentBound);
    } else {
        for (long t = 0; t < T; ++t) {
            const double a = path.a.back();
            double R, next;
            try {
                std::tie(R, next) = forward_step(econ, t, a);
            } catch (const NoFiniteRate&) {
                mark_failure(path, t + 1, PathStatus::HitEndowmentBound);
                break;
            }
            if (opts.mode == SimMode::Shadowed && next > 0 && next < econ.ey(t + 1)) {
                const double snapped = shadow(econ, t + 1, next, opts.snap_rel * next, opts);
                if (snapped != next) {
                    ++path.snaps;
                    path.max_correction =
                        std::max(path.max_correction, std::abs(snapped - next) / next);
                    next = snapped;
                    R = econ.n * (next + econ.d(t + 1)) / a;
                    const double scale = std::max(1.0, econ.utility.up(econ.ey(t) - a));
                    path.max_euler_residual = std::max(
                        path.max_euler_residual, std::abs(euler_residual(econ, t, a, R)) / scale);
                }
            }
            if (collapsed(econ, t + 1, next)) {
                mark_failure(path, t + 1, PathStatus::CollapsedBelowZero);
                break;
            }
            if (!(next < econ.ey(t + 1))) {
                mark_failure(path, t + 1, PathStatus::HitEndowmentBound);
                break;
            }
            path.a.push_back(next);
            path.R.push_back(R);
        }
    }
    path.survived_to = path.last();
    if (path.status != PathStatus::SurvivedHorizon && path.violation_t == 0) path.survived_to = -1;
    fill_path_quantities(econ, path);
    return path;
}

EquilibriumPath simulate_no_old_endowment(const Economy& econ, double a0, long T) {
    if (econ.utility.family() != Family::Log)
        throw AssumptionViolated("closed-form branch without old-age endowment needs Log utility");
    auto forced = [&](long t) {
        const double b = econ.beta(t);
        return b * econ.ey(t) / (1.0 + b);
    };
    EquilibriumPath path;
    path.horizon = T;
    path.source = "closed-form:log-no-old-endowment";
    const double f0 = forced(0);
    if (std::abs(a0 - f0) > 1e-12 * f0) {
        path.a.push_back(a0);
        path.R.push_back(kNaN);
        mark_failure(path, 0,
                     a0 < f0 ? PathStatus::CollapsedBelowZero : PathStatus::HitEndowmentBound);
        path.survived_to = -1;
        fill_path_quantities(econ, path);
        return path;
    }
    path.a.reserve(static_cast<size_t>(T + 1));
    path.R.reserve(static_cast<size_t>(T + 1));
    path.a.push_back(f0);
    path.R.push_back(kNaN);
    for (long t = 1; t <= T; ++t) {
        const double a = forced(t);
        path.R.push_back(econ.n * (a + econ.d(t)) / path.a.back());
        path.a.push_back(a);
    }
    path.survived_to = T;
    fill_path_quantities(econ, path);
    return path;
}

void fill_path_quantities(const Economy& econ, EquilibriumPath& path) {
    const size_t N = path.a.size();
    path.cy.resize(N);
    path.co.resize(N);
    path.q.resize(N);
    const double logn = std::log(econ.n);
    for (size_t i = 0; i < N; ++i) {
        const long t = static_cast<long>(i);
        path.cy[i] = econ.ey(t) - path.a[i];
        path.co[i] = econ.eo(t) + econ.n * (path.a[i] + econ.d(t));
        path.q[i] = econ.n == 1.0 ? path.a[i] : path.a[i] * std::exp(static_cast<double>(t) * logn);
    }
}

double PriceDecomposition::Q(long t) const { return std::exp(logQ.at(static_cast<size_t>(t))); }
double PriceDecomposition::P(long t) const { return std::exp(logP.at(static_cast<size_t>(t))); }
double PriceDecomposition::tail_bound_at(long t) const {
    if (!std::isfinite(tail_bound)) return tail_bound;
    return tail_bound * std::exp(-logQ.at(static_cast<size_t>(t)));
}

PriceDecomposition decompose(const Economy& econ, const EquilibriumPath& path) {
    if (!path.survived()) throw DomainError("decompose needs a path that survived its horizon");
    const long T = path.last();
    if (T < 2) throw DomainError("decompose needs at least two periods");
    const size_t N = static_cast<size_t>(T + 1);
    const double logn = std::log(econ.n);

    PriceDecomposition dec;
    dec.logQ.assign(N, 0.0);
    dec.logP.assign(N, 0.0);
    KahanSum acc;
    for (size_t i = 1; i < N; ++i) {
        acc.add(-std::log(path.R[i]));
        dec.logQ[i] = acc.value();
        dec.logP[i] = static_cast<double>(i) * logn + dec.logQ[i];
    }

    dec.f.assign(N, 0.0);
    for (long t = T - 1; t >= 0; --t) {
        const size_t i = static_cast<size_t>(t);
        dec.f[i] = (econ.n / path.R[i + 1]) * (dec.f[i + 1] + econ.d(t + 1));
    }
    dec.F.resize(N);
    dec.b.resize(N);
    dec.B.resize(N);
    for (size_t i = 0; i < N; ++i) {
        const double scale = econ.n == 1.0 ? 1.0 : std::exp(static_cast<double>(i) * logn);
        dec.F[i] = dec.f[i] * scale;
        dec.b[i] = path.a[i] - dec.f[i];
        dec.B[i] = path.q[i] - dec.F[i];
    }

    auto log_term = [&](long s) { return dec.logQ[static_cast<size_t>(s)] + econ.log_D(s); };
    const long window = std::min<long>(econ.tol.tail_ratio_window, T - 1);
    dec.tail_series = series_test_range(log_term, 1, T, window);
    dec.tail_ratio = dec.tail_series.tail_ratio;
    dec.tail_method = dec.tail_series.method;
    switch (dec.tail_series.verdict) {
        case Verdict::Converges:
            dec.tail_bound = dec.tail_series.bound;
            break;
        case Verdict::Diverges:
            dec.tail_bound = kInf;
            dec.possibly_infinite = true;
            break;
        case Verdict::Inconclusive:
            if (dec.tail_ratio < 1.0) {
                const double last = std::exp(log_term(T));
                dec.tail_bound = last * dec.tail_ratio / (1.0 - dec.tail_ratio);
                dec.tail_method = "ratio-fallback";
            } else {
                dec.tail_bound = kInf;
                dec.possibly_infinite = true;
            }
            break;
    }
    return dec;
}

double telescoping_residual(const Economy& econ, const EquilibriumPath& path,
                            const PriceDecomposition& dec) {
    const long T = path.last();
    KahanSum s;
    for (long t = 1; t <= T; ++t) {
        const double lD = econ.log_D(t);
        if (lD == -kInf) continue;
        s.add(std::exp(dec.logQ[static_cast<size_t>(t)] + lD));
    }
    s.add(std::exp(dec.logP[static_cast<size_t>(T)]) * path.a[static_cast<size_t>(T)]);
    const double q0 = path.q.front();
    return std::abs(s.value() - q0) / q0;
}

double welfare(const Economy& econ, const EquilibriumPath& path, long t) {
    if (t < 0 || t >= path.last())
        throw DomainError("welfare needs 0 <= t < survived_to (t=" + std::to_string(t) + ")");
    const size_t i = static_cast<size_t>(t);
    return econ.utility.u(path.cy[i]) + econ.beta(t) * econ.utility.v(path.co[i + 1]);
}

double welfare_difference(const Economy& econ, const EquilibriumPath& hi, const EquilibriumPath& lo,
                          long t) {
    if (t < 0 || t >= hi.last() || t >= lo.last())
        throw DomainError("welfare_difference needs t below both survival horizons");
    const size_t i = static_cast<size_t>(t);
    const double dcy = -(hi.a[i] - lo.a[i]);
    const double dco = econ.n * (hi.a[i + 1] - lo.a[i + 1]);
    return econ.utility.u_gain(lo.cy[i], dcy) +
           econ.beta(t) * econ.utility.v_gain(lo.co[i + 1], dco);
}

void write_path_csv(std::ostream& os, const EquilibriumPath& path, const PriceDecomposition* dec) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "t,a,R,q,cy,co,f,b,logQ,logP\n";
    for (size_t i = 0; i < path.a.size(); ++i) {
        os << i << ',' << num(path.a[i]) << ',' << num(path.R[i]) << ',' << num(path.q[i]) << ','
           << num(path.cy[i]) << ',' << num(path.co[i]) << ',';
        if (dec && i < dec->f.size())
            os << num(dec->f[i]) << ',' << num(dec->b[i]) << ',' << num(dec->logQ[i]) << ','
               << num(dec->logP[i]);
        else
            os << "nan,nan,nan,nan";
        os << '\n';
    }
}

}  // namespace olg

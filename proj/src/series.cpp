#include "olg/series.hpp"

#include <algorithm>
#include <cmath>

#include "olg/errors.hpp"

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRatioMargin = 1e-3;
constexpr double kPowerR2 = 0.999;
constexpr double kAlphaDiverge = 1.0 + 1e-6;
constexpr double kAlphaConverge = 1.05;
constexpr double kBoundedBelowSpread = 0.9;

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Converges: return "Converges";
        case Verdict::Diverges: return "Diverges";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

void KahanSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit f;
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) return f;
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy)
                                : std::numeric_limits<double>::quiet_NaN();
    return f;
}

SeriesVerdict series_test_range(const LogTermFn& log_term, long first, long last, long window) {
    SeriesVerdict out;
    out.first = first;
    out.last = last;
    if (last <= first) throw InvalidSeries("series needs at least two terms");

    std::vector<double> lt;
    lt.reserve(static_cast<size_t>(last - first + 1));
    KahanSum sum;
    for (long t = first; t <= last; ++t) {
        const double l = log_term(t);
        if (std::isnan(l)) throw InvalidSeries("NaN term at t=" + std::to_string(t));
        lt.push_back(l);
        sum.add(std::exp(l));
    }
    out.value_partial = sum.value();

    const long N = static_cast<long>(lt.size());
    const long W = std::min(window, N - 1);
    const size_t iw = static_cast<size_t>(N - 1 - W), il = static_cast<size_t>(N - 1);

    if (std::any_of(lt.begin(), lt.end(), [](double l) { return l == kInf; })) {
        out.verdict = Verdict::Diverges;
        out.method = "infinite-term";
        return out;
    }

    bool all_zero = true, any_zero = false;
    for (size_t i = iw; i <= il; ++i) {
        if (lt[i] == -kInf)
            any_zero = true;
        else
            all_zero = false;
    }
    if (all_zero) {
        out.verdict = Verdict::Converges;
        out.method = "zero-tail";
        out.bound = 0.0;
        out.tail_ratio = 0.0;
        return out;
    }
    if (any_zero) {
        out.note = "zero terms inside the tail window";
        return out;
    }

    // Power-law against geometric model selection over the second half.
    const long first_fit = std::max<long>(first + N / 2, 1);
    std::vector<double> xs_log, xs_lin, ys;
    for (long t = first_fit; t <= last; ++t) {
        const double l = lt[static_cast<size_t>(t - first)];
        if (l == -kInf) continue;
        xs_log.push_back(std::log(static_cast<double>(t)));
        xs_lin.push_back(static_cast<double>(t));
        ys.push_back(l);
    }
    if (ys.size() >= 8) {
        const LinearFit pw = least_squares(xs_log, ys);
        const LinearFit gm = least_squares(xs_lin, ys);
        out.r2_power = pw.r2;
        out.r2_geometric = gm.r2;
        const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
        const bool varies = (*mx - *mn) > 1e-9 * std::max(1.0, std::abs(*mx));
        const bool geo_better = std::isfinite(gm.r2) && gm.r2 > pw.r2;
        if (varies && std::isfinite(pw.r2) && pw.r2 > kPowerR2 && !geo_better) {
            out.alpha = -pw.slope;
            if (out.alpha < kAlphaDiverge) {
                out.verdict = Verdict::Diverges;
                out.method = "power-law";
                return out;
            }
            if (out.alpha > kAlphaConverge) {
                out.verdict = Verdict::Converges;
                out.method = "power-law";
                out.bound = std::exp(lt[il]) * static_cast<double>(last) / (out.alpha - 1.0);
                out.tail_ratio = std::exp((lt[il] - lt[iw]) / static_cast<double>(W));
                return out;
            }
            out.method = "power-law";
            out.note = "power-law exponent too close to 1";
            return out;
        }
    }

    const double log_rho = (lt[il] - lt[iw]) / static_cast<double>(W);
    const double rho = std::exp(log_rho);
    out.tail_ratio = rho;
    if (rho > 1.0 + kRatioMargin) {
        out.verdict = Verdict::Diverges;
        out.method = "ratio";
        return out;
    }
    if (rho < 1.0 - kRatioMargin) {
        out.verdict = Verdict::Converges;
        out.method = "ratio";
        out.bound = std::exp(lt[il]) * rho / (1.0 - rho);
        return out;
    }
    double wmin = kInf, wmax = -kInf;
    for (size_t i = iw; i <= il; ++i) {
        wmin = std::min(wmin, lt[i]);
        wmax = std::max(wmax, lt[i]);
    }
    if (std::abs(log_rho) <= kRatioMargin && std::exp(wmin - wmax) >= kBoundedBelowSpread) {
        out.verdict = Verdict::Diverges;
        out.method = "bounded-below";
        return out;
    }
    out.note = "tail ratio within the indeterminate band";
    return out;
}

SeriesVerdict series_test(const LogTermFn& log_term, const ToleranceSet& cfg, long first) {
    return series_test_range(log_term, first, cfg.series_T, cfg.tail_ratio_window);
}

SeriesVerdict series_test_values(const std::vector<double>& terms, long first, long window) {
    for (double v : terms)
        if (v < 0) throw InvalidSeries("negative term");
    auto f = [&](long t) {
        const double v = terms.at(static_cast<size_t>(t - first));
        return std::log(v);
    };
    return series_test_range(f, first, first + static_cast<long>(terms.size()) - 1, window);
}

}  // namespace olg

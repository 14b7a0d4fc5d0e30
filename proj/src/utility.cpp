#include "olg/utility.hpp"

#include <cmath>
#include <vector>

#include "olg/errors.hpp"

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_marginal(double c, double s) { return s == 1.0 ? 1.0 / c : std::pow(c, -s); }
double pow_second(double c, double s) { return -s * std::pow(c, -s - 1.0); }
double pow_level(double c, double s) {
    return s == 1.0 ? std::log(c) : std::pow(c, 1.0 - s) / (1.0 - s);
}

double pow_gain(double c1, double dc, double s) {
    const double lr = std::log1p(dc / c1);
    if (s == 1.0) return lr;
    const double k = 1.0 - s;
    return std::pow(c1, k) * std::expm1(k * lr) / k;
}

std::vector<double> sample_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 120; ++i) g.push_back(std::pow(10.0, -3.0 + 6.0 * i / 120.0));
    return g;
}

void check_positive(double x, const char* what) {
    if (!(x > 0) || !std::isfinite(x)) throw InvalidEconomy(std::string(what) + " must be > 0");
}

}  // namespace

Utility Utility::log(double beta) {
    check_positive(beta, "beta");
    Utility u;
    u.family_ = Family::Log;
    u.beta_ = beta;
    return u;
}

Utility Utility::crra(double sigma, double beta) {
    check_positive(sigma, "sigma");
    check_positive(beta, "beta");
    Utility u;
    u.family_ = Family::CRRA;
    u.beta_ = beta;
    u.s1_ = u.s2_ = sigma;
    return u;
}

Utility Utility::crra2(double sigma1, double sigma2, double beta) {
    check_positive(sigma1, "sigma1");
    check_positive(sigma2, "sigma2");
    check_positive(beta, "beta");
    Utility u;
    u.family_ = Family::CRRA2;
    u.beta_ = beta;
    u.s1_ = sigma1;
    u.s2_ = sigma2;
    return u;
}

Utility Utility::custom(CustomFunctions fns, double beta) {
    check_positive(beta, "beta");
    if (!fns.up || !fns.upp || !fns.vp || !fns.vpp)
        throw InvalidEconomy("custom utility needs u', u'', v', v''");
    if (std::isnan(fns.lim_cvp) || fns.lim_cvp < 0)
        throw InvalidEconomy("custom utility needs lim_cvp (lim c v'(c)) >= 0");
    Utility u;
    u.family_ = Family::Custom;
    u.beta_ = beta;
    u.fns_ = std::move(fns);
    double prev = -kInf;
    u.custom_cvp_monotone_ = true;
    for (double c : sample_grid()) {
        const double cur = c * u.fns_.vp(c);
        if (cur < prev * (1.0 - 1e-12)) u.custom_cvp_monotone_ = false;
        prev = cur;
    }
    return u;
}

std::string Utility::family_name() const {
    switch (family_) {
        case Family::Log: return "log";
        case Family::CRRA: return "crra";
        case Family::CRRA2: return "crra2";
        case Family::Custom: return "custom";
    }
    return "?";
}

double Utility::up(double c) const {
    return family_ == Family::Custom ? fns_.up(c) : pow_marginal(c, s1_);
}
double Utility::upp(double c) const {
    return family_ == Family::Custom ? fns_.upp(c) : pow_second(c, s1_);
}
double Utility::vp(double c) const {
    return family_ == Family::Custom ? fns_.vp(c) : pow_marginal(c, s2_);
}
double Utility::vpp(double c) const {
    return family_ == Family::Custom ? fns_.vpp(c) : pow_second(c, s2_);
}

bool Utility::has_levels() const {
    return family_ != Family::Custom || (fns_.u && fns_.v);
}

double Utility::u(double c) const {
    if (family_ != Family::Custom) return pow_level(c, s1_);
    if (!fns_.u) throw NotApplicable("custom utility has no level function u");
    return fns_.u(c);
}
double Utility::v(double c) const {
    if (family_ != Family::Custom) return pow_level(c, s2_);
    if (!fns_.v) throw NotApplicable("custom utility has no level function v");
    return fns_.v(c);
}

double Utility::u_diff(double c1, double c2) const { return u_gain(c1, c2 - c1); }
double Utility::v_diff(double c1, double c2) const { return v_gain(c1, c2 - c1); }

double Utility::u_gain(double c, double dc) const {
    if (family_ != Family::Custom) return pow_gain(c, dc, s1_);
    return u(c + dc) - u(c);
}
double Utility::v_gain(double c, double dc) const {
    if (family_ != Family::Custom) return pow_gain(c, dc, s2_);
    return v(c + dc) - v(c);
}

bool Utility::vp_infinite_at_zero() const {
    if (family_ != Family::Custom) return true;
    return !std::isfinite(fns_.vp(0.0));
}

double Utility::lim_cvp() const {
    if (family_ == Family::Custom) return fns_.lim_cvp;
    if (s2_ < 1.0) return kInf;
    if (s2_ == 1.0) return 1.0;
    return 0.0;
}

bool Utility::cvp_nondecreasing() const {
    if (family_ != Family::Custom) return s2_ <= 1.0;
    return custom_cvp_monotone_;
}

bool Utility::marginals_well_behaved() const {
    double pu = kInf, pv = kInf;
    for (double c : sample_grid()) {
        const double a = up(c), b = vp(c);
        if (!(a > 0) || !(b > 0) || !(a < pu) || !(b < pv)) return false;
        pu = a;
        pv = b;
    }
    return true;
}

double Utility::rate_peak(double eo, double a) const {
    if (family_ == Family::Custom || s2_ <= 1.0) return kInf;
    return eo / ((s2_ - 1.0) * a);
}

}  // namespace olg

#include "olg/sequence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "olg/errors.hpp"

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonneg(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidSequence(std::string(what) + " must be finite and >= 0");
}

double log_add_exp(double x, double y) {
    if (x < y) std::swap(x, y);
    if (y == -kInf) return x;
    return x + std::log1p(std::exp(y - x));
}

struct TiroleCoefficients {
    double K;
    double rho;
    double c;  // 1/d0 - K
};

TiroleCoefficients tirole_coefficients(const SequenceGen& g) {
    const double d0 = g.param("d0"), x = g.param("x"), n = g.param("n");
    const double beta = g.param("beta"), ey = g.param("ey"), eo = g.param("eo");
    if (!(d0 > 0 && x > 0 && n > 0 && beta > 0 && ey > 0 && eo > 0))
        throw InvalidSequence("tirole-explicit-d needs positive d0, x, n, beta, ey, eo");
    const double rstar = eo / (beta * ey);
    const double h = n * (1.0 + beta) / eo;
    const double slack = 1.0 - x * (n / rstar - 1.0);
    if (!(slack > 0))
        throw InvalidSequence("tirole-explicit-d needs 1 - x(n/R* - 1) > 0");
    TiroleCoefficients k;
    k.K = h * x * (1.0 + x) / slack;
    k.rho = (x + 1.0) / x * rstar / n;
    k.c = 1.0 / d0 - k.K;
    return k;
}

}  // namespace

SequenceGen SequenceGen::constant(double c) {
    require_nonneg(c, "constant value");
    SequenceGen g;
    g.kind_ = Kind::Constant;
    g.c0_ = c;
    return g;
}

SequenceGen SequenceGen::geometric(double c0, double ratio) {
    require_nonneg(c0, "geometric c0");
    if (!(ratio > 0) || !std::isfinite(ratio)) throw InvalidSequence("geometric ratio must be > 0");
    SequenceGen g;
    g.kind_ = Kind::Geometric;
    g.c0_ = c0;
    g.ratio_ = ratio;
    return g;
}

SequenceGen SequenceGen::power_law(double c0, double alpha) {
    require_nonneg(c0, "power-law c0");
    if (!std::isfinite(alpha)) throw InvalidSequence("power-law alpha must be finite");
    SequenceGen g;
    g.kind_ = Kind::PowerLaw;
    g.c0_ = c0;
    g.alpha_ = alpha;
    return g;
}

SequenceGen SequenceGen::explicit_list(std::vector<double> values, TailRule rule, double tail_ratio) {
    if (values.empty()) throw InvalidSequence("explicit list must be nonempty");
    for (double v : values) require_nonneg(v, "list entry");
    if (rule == TailRule::GeometricExtrapolate && !(tail_ratio > 0))
        throw InvalidSequence("geometric tail ratio must be > 0");
    SequenceGen g;
    g.kind_ = Kind::ExplicitList;
    g.values_ = std::move(values);
    g.tail_ = rule;
    g.tail_ratio_ = rule == TailRule::GeometricExtrapolate ? tail_ratio : 1.0;
    return g;
}

SequenceGen SequenceGen::closed_form(std::string id, std::map<std::string, double> params) {
    SequenceGen g;
    g.kind_ = Kind::ClosedForm;
    g.id_ = std::move(id);
    g.params_ = std::move(params);
    if (g.id_ == kTiroleExplicitD) {
        tirole_coefficients(g);
    } else {
        throw InvalidSequence("unknown closed-form generator '" + g.id_ + "'");
    }
    return g;
}

double SequenceGen::param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) throw InvalidSequence("missing parameter '" + key + "' for " + id_);
    return it->second;
}

bool SequenceGen::is_constant() const {
    switch (kind_) {
        case Kind::Constant: return true;
        case Kind::Geometric: return ratio_ == 1.0 || c0_ == 0.0;
        case Kind::PowerLaw: return alpha_ == 0.0 || c0_ == 0.0;
        case Kind::ExplicitList: {
            if (tail_ == TailRule::GeometricExtrapolate && tail_ratio_ != 1.0) return false;
            for (double v : values_)
                if (v != values_.front()) return false;
            return true;
        }
        case Kind::ClosedForm: return false;
    }
    return false;
}

double SequenceGen::value(long t) const {
    if (t < 0) throw InvalidSequence("sequence index must be >= 0");
    switch (kind_) {
        case Kind::Constant: return c0_;
        case Kind::Geometric: return c0_ * std::pow(ratio_, static_cast<double>(t));
        case Kind::PowerLaw:
            return t == 0 ? c0_ : c0_ * std::pow(static_cast<double>(t), -alpha_);
        case Kind::ExplicitList: {
            const long len = static_cast<long>(values_.size());
            if (t < len) return values_[static_cast<size_t>(t)];
            if (tail_ == TailRule::RepeatLast) return values_.back();
            return values_.back() * std::pow(tail_ratio_, static_cast<double>(t - len + 1));
        }
        case Kind::ClosedForm: {
            const auto k = tirole_coefficients(*this);
            const double inv = k.K + std::pow(k.rho, static_cast<double>(t)) * k.c;
            if (!(inv > 0))
                throw InvalidSequence("tirole-explicit-d emits a negative value at t=" + std::to_string(t));
            return 1.0 / inv;
        }
    }
    return 0.0;
}

double SequenceGen::log_value(long t) const {
    if (t < 0) throw InvalidSequence("sequence index must be >= 0");
    switch (kind_) {
        case Kind::Constant: return std::log(c0_);
        case Kind::Geometric:
            return c0_ == 0.0 ? -kInf : std::log(c0_) + static_cast<double>(t) * std::log(ratio_);
        case Kind::PowerLaw:
            if (c0_ == 0.0) return -kInf;
            return t == 0 ? std::log(c0_) : std::log(c0_) - alpha_ * std::log(static_cast<double>(t));
        case Kind::ExplicitList: {
            const long len = static_cast<long>(values_.size());
            if (t < len || tail_ == TailRule::RepeatLast) return std::log(value(t));
            if (values_.back() == 0.0) return -kInf;
            return std::log(values_.back()) + static_cast<double>(t - len + 1) * std::log(tail_ratio_);
        }
        case Kind::ClosedForm: {
            const auto k = tirole_coefficients(*this);
            if (k.c > 0) {
                const double lt = static_cast<double>(t) * std::log(k.rho) + std::log(k.c);
                return -log_add_exp(std::log(k.K), lt);
            }
            return std::log(value(t));
        }
    }
    return -kInf;
}

std::string SequenceGen::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::Geometric: return "geometric";
        case Kind::PowerLaw: return "power-law";
        case Kind::ExplicitList: return "list";
        case Kind::ClosedForm: return "closed-form";
    }
    return "?";
}

std::string SequenceGen::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::Constant: os << "constant(" << c0_ << ")"; break;
        case Kind::Geometric: os << "geometric(c0=" << c0_ << ", ratio=" << ratio_ << ")"; break;
        case Kind::PowerLaw: os << "power-law(c0=" << c0_ << ", alpha=" << alpha_ << ")"; break;
        case Kind::ExplicitList:
            os << "list(len=" << values_.size() << ", tail="
               << (tail_ == TailRule::RepeatLast ? "repeat-last" : "geometric-extrapolate");
            if (tail_ == TailRule::GeometricExtrapolate) os << "(" << tail_ratio_ << ")";
            os << ")";
            break;
        case Kind::ClosedForm: {
            os << "closed-form(" << id_;
            for (const auto& [k, v] : params_) os << ", " << k << "=" << v;
            os << ")";
            break;
        }
    }
    return os.str();
}

double eval_sequence(const SequenceGen& gen, long t) {
    const double v = gen.value(t);
    if (!(v >= 0.0)) throw InvalidSequence("negative value emitted at t=" + std::to_string(t));
    return v;
}

}  // namespace olg

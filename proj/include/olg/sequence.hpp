#pragma once

#include <map>
#include <string>
#include <vector>

namespace olg {

enum class TailRule { RepeatLast, GeometricExtrapolate };

// A sequence of nonnegative reals indexed by t >= 0, evaluated lazily.
class SequenceGen {
public:
    enum class Kind { Constant, Geometric, PowerLaw, ExplicitList, ClosedForm };

    SequenceGen() = default;

    static SequenceGen constant(double c);
    static SequenceGen geometric(double c0, double ratio);
    // c0 * t^(-alpha) for t >= 1; the value at t = 0 is c0.
    static SequenceGen power_law(double c0, double alpha);
    static SequenceGen explicit_list(std::vector<double> values,
                                     TailRule rule = TailRule::RepeatLast,
                                     double tail_ratio = 1.0);
    static SequenceGen closed_form(std::string id, std::map<std::string, double> params);

    double operator()(long t) const { return value(t); }
    double value(long t) const;
    // Natural log of value(t), computed without forming value(t) where possible
    // so that geometric tails stay representable; -inf for a zero value.
    double log_value(long t) const;

    Kind kind() const noexcept { return kind_; }
    std::string kind_name() const;
    std::string describe() const;

    double c0() const noexcept { return c0_; }
    double ratio() const noexcept { return ratio_; }
    double alpha() const noexcept { return alpha_; }
    const std::vector<double>& values() const noexcept { return values_; }
    TailRule tail_rule() const noexcept { return tail_; }
    double tail_ratio() const noexcept { return tail_ratio_; }
    const std::string& closed_form_id() const noexcept { return id_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    double param(const std::string& key) const;
    bool has_param(const std::string& key) const { return params_.count(key) > 0; }

    // True when value(t) is the same for all t (Constant, or a one-element
    // list repeating its last entry).
    bool is_constant() const;

private:
    Kind kind_ = Kind::Constant;
    double c0_ = 0.0;
    double ratio_ = 1.0;
    double alpha_ = 0.0;
    std::vector<double> values_;
    TailRule tail_ = TailRule::RepeatLast;
    double tail_ratio_ = 1.0;
    std::string id_;
    std::map<std::string, double> params_;
};

double eval_sequence(const SequenceGen& gen, long t);

// Supported closed-form generator ids.
inline constexpr const char* kTiroleExplicitD = "tirole-explicit-d";

}  // namespace olg

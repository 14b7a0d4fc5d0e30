#pragma once

#include <stdexcept>
#include <string>

namespace olg {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define OLG_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

OLG_DEFINE_ERROR(DomainError)
OLG_DEFINE_ERROR(InvalidSequence)
OLG_DEFINE_ERROR(InvalidEconomy)
OLG_DEFINE_ERROR(NoFiniteRate)
OLG_DEFINE_ERROR(BracketFailure)
OLG_DEFINE_ERROR(AssumptionViolated)
OLG_DEFINE_ERROR(EmptySurvivalSet)
OLG_DEFINE_ERROR(NoPositiveSteadyState)
OLG_DEFINE_ERROR(ModelPreconditionFailed)
OLG_DEFINE_ERROR(InvalidSeries)
OLG_DEFINE_ERROR(NotApplicable)
OLG_DEFINE_ERROR(SmoothnessUnbounded)
OLG_DEFINE_ERROR(RankViolation)

#undef OLG_DEFINE_ERROR

// Carries the file line that triggered the failure (0 when not tied to a line).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("ParseError", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace olg

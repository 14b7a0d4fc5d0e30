#pragma once

#include <optional>
#include <string>
#include <vector>

#include "olg/economy.hpp"
#include "olg/errors.hpp"
#include "olg/path.hpp"

namespace olg {

// Which implementation evaluates the seed grid. Both give identical results;
// Serial is the reference used to check Parallel.
enum class Kernel { Serial, Parallel };

struct SurvivalProbe {
    double a0 = 0.0;
    Fate fate = Fate::Survive;
    long T = 0;
};

struct SurvivalInterval {
    double lower = 0.0;
    double upper = 0.0;
    long T = 0;
    // Endpoints survive and the 16 interior samples survive. False also when the
    // surviving set is thinner than the bisection could resolve and the
    // reported endpoints are the midpoint of the last collapse/hit bracket.
    bool verified = false;
    bool degenerate = false;
    // Size of the final bisection bracket around either endpoint.
    double resolution = 0.0;
    int seeds_surviving = 0;
    std::vector<SurvivalProbe> probes;
    std::string note;
};

// 64 log-uniform seeds in (1e-6 e^y_0, (1 - 1e-6) e^y_0).
std::vector<double> seed_grid(const Economy& econ);
// Fate of each seed after T periods of raw iteration.
std::vector<Fate> seed_fates(const Economy& econ, const std::vector<double>& seeds, long T,
                             Kernel kernel);
// Raw-iteration fate of a0 over T periods.
Fate fate_of(const Economy& econ, double a0, long T);

SurvivalInterval survival_interval(const Economy& econ, long T, Kernel kernel = Kernel::Parallel);

enum class SetKind { Unique, Continuum, Empty };
const char* set_kind_name(SetKind k);

struct LadderRung {
    long T = 0;
    double lower = 0.0;
    double upper = 0.0;
    double width = 0.0;
    bool verified = false;
};

struct EquilibriumSetResult {
    double lower = 0.0;
    double upper = 0.0;
    long horizon_used = 0;
    // Final bisection bracket at the last rung; width is upper - lower there.
    double bracket_width = 0.0;
    double width = 0.0;
    SetKind kind = SetKind::Empty;
    std::optional<double> steady_state;
    std::vector<LadderRung> rungs;
    std::vector<SurvivalProbe> probes;
    bool lower_extrapolated = false;
    bool upper_extrapolated = false;
    std::string note;
};

class NonConvergedSet : public Error {
public:
    NonConvergedSet(const std::string& what, EquilibriumSetResult partial)
        : Error("NonConvergedSet", what), partial_(std::move(partial)) {}
    const EquilibriumSetResult& partial() const noexcept { return partial_; }

private:
    EquilibriumSetResult partial_;
};

// Ladder T, 2T, 4T with T = T0 (default: econ.horizon).
EquilibriumSetResult equilibrium_set(const Economy& econ, long T0 = 0,
                                     Kernel kernel = Kernel::Parallel);

// Solves u'(e^y - a) = beta n v'(e^o + n a) for a stationary economy.
double steady_state_a_hat(const Economy& econ);

// "tirole-explicit" or "log-no-old-endowment".
EquilibriumPath closed_form_path(const Economy& econ, const std::string& model_id, long T);

struct TiroleQuantities {
    double rstar, h, x, d0, K, rho, d0_bound, a_inf;
};
// Parameters of the explicit model derived from an economy whose dividend is the
// tirole-explicit-d generator; throws ModelPreconditionFailed on any violated inequality.
TiroleQuantities tirole_quantities(const Economy& econ);

}  // namespace olg

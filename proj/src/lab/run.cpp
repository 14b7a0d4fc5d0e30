#include "olg/lab.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olg/bubble.hpp"
#include "olg/equilibrium_set.hpp"
#include "olg/errors.hpp"
#include "olg/euler.hpp"
#include "olg/pareto.hpp"
#include "olg/path.hpp"
#include "olg/scenario.hpp"

namespace fs = std::filesystem;

namespace olg {

namespace {

using json = nlohmann::ordered_json;

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json to_json(const SeriesVerdict& s) {
    return json{{"verdict", verdict_name(s.verdict)},
                {"method", s.method},
                {"value_partial", num(s.value_partial)},
                {"tail_ratio", num(s.tail_ratio)},
                {"bound", num(s.bound)},
                {"alpha", num(s.alpha)},
                {"r2_power", num(s.r2_power)},
                {"r2_geometric", num(s.r2_geometric)},
                {"first", s.first},
                {"last", s.last},
                {"note", s.note}};
}

json to_json(const Surrogate& s) {
    return json{{"value", num(s.value)}, {"slope", num(s.slope)}, {"pass", s.pass}};
}

json sequence_json(const SequenceGen& g) {
    json j{{"kind", g.kind_name()}, {"describe", g.describe()}};
    if (g.kind() == SequenceGen::Kind::ExplicitList)
        j["tail_rule"] = g.tail_rule() == TailRule::RepeatLast ? "repeat-last" : "geometric-extrapolate";
    return j;
}

json economy_json(const Economy& e) {
    const Utility& u = e.utility;
    json util{{"family", u.family_name()}, {"beta", num(u.beta())}};
    if (u.family() == Family::CRRA) util["sigma"] = num(u.sigma_young());
    if (u.family() == Family::CRRA2) {
        util["sigma1"] = num(u.sigma_young());
        util["sigma2"] = num(u.sigma_old());
    }
    if (e.beta_seq) util["beta_t"] = sequence_json(*e.beta_seq);
    return json{{"name", e.name},
                {"utility", util},
                {"endow_young", sequence_json(e.endow_young)},
                {"endow_old", sequence_json(e.endow_old)},
                {"dividend", sequence_json(e.dividend)},
                {"dividend_basis", e.basis == DividendBasis::Aggregate ? "aggregate" : "per-capita"},
                {"n", num(e.n)},
                {"horizon", e.horizon},
                {"add_assum", e.add_assum()},
                {"tolerances",
                 {{"root_tol", num(e.tol.root_tol)},
                  {"series_T", e.tol.series_T},
                  {"tail_ratio_window", e.tol.tail_ratio_window},
                  {"survive_eps", num(e.tol.survive_eps)},
                  {"bisect_tol", num(e.tol.bisect_tol)}}}};
}

json table_json(const ScenarioTable& t) {
    json j = json::object();
    for (const auto& [section, entries] : t) {
        json s = json::object();
        for (const auto& [k, v] : entries) s[k] = v.value;
        j[section] = s;
    }
    return j;
}

json to_json(const RegimeReport& r) {
    json tests = json::object();
    for (const auto& [k, v] : r.tests) tests[k] = to_json(v);
    json labels = json::array();
    for (const auto& l : r.optimality) labels.push_back({{"applies_to", l.applies_to}, {"label", l.label}});
    return json{{"applicable", true},
                {"regime", regime_name(r.regime)},
                {"R_star", num(r.R_star)},
                {"n", num(r.n)},
                {"tests", tests},
                {"root_test", num(r.root_test)},
                {"root_method", r.root_method},
                {"citations", r.citations},
                {"reason", r.reason},
                {"optimality", labels}};
}

json to_json(const EquilibriumSetResult& s) {
    json rungs = json::array();
    for (const auto& r : s.rungs)
        rungs.push_back({{"T", r.T},
                         {"lower", num(r.lower)},
                         {"upper", num(r.upper)},
                         {"width", num(r.width)},
                         {"verified", r.verified}});
    return json{{"kind", set_kind_name(s.kind)},
                {"lower", num(s.lower)},
                {"upper", num(s.upper)},
                {"width", num(s.width)},
                {"bracket_width", num(s.bracket_width)},
                {"horizon_used", s.horizon_used},
                {"steady_state", s.steady_state ? num(*s.steady_state) : json(nullptr)},
                {"lower_extrapolated", s.lower_extrapolated},
                {"upper_extrapolated", s.upper_extrapolated},
                {"probes", s.probes.size()},
                {"rungs", rungs},
                {"note", s.note}};
}

json to_json(const BubbleTestReport& b) {
    return json{{"verdict", bubble_verdict_name(b.verdict)},
                {"series_verdict", bubble_verdict_name(b.series_verdict)},
                {"monotone_verdict", bubble_verdict_name(b.monotone_verdict)},
                {"T", b.T},
                {"dq_series", to_json(b.dq_series)},
                {"fq_strictly_decreasing", b.fq_strictly_decreasing},
                {"bq_strictly_increasing", b.bq_strictly_increasing},
                {"pure_bubble", b.pure_bubble},
                {"q0", num(b.q0)},
                {"F0", num(b.F0)},
                {"B0", num(b.B0)},
                {"tail_bound", num(b.tail_bound)},
                {"bound_lhs", num(b.bound_lhs)},
                {"bound_rhs", num(b.bound_rhs)},
                {"bound_ok", b.bound_ok},
                {"reason", b.reason}};
}

json to_json(const ParetoCertificate& c) {
    json j{{"verdict", optimality_name(c.verdict)},
           {"rationale", c.rationale},
           {"liminf_Pcy", num(c.liminf_Pcy)},
           {"support_price",
            {{"liminf_Pcy", to_json(c.support.liminf_Pcy)},
             {"threshold_log", num(c.support.threshold)},
             {"liminf_R", to_json(c.support.liminf_R)},
             {"shortcut_pass", c.support.shortcut_pass},
             {"pass", c.support.pass}}},
           {"cass_sum", to_json(c.cass_sum)},
           {"mu", num(c.mu)},
           {"theta1", num(c.theta1)},
           {"theta2", num(c.theta2)},
           {"smoothness_finite", c.smoothness_finite},
           {"asset_share", to_json(c.asset_share)},
           {"saving_rate", to_json(c.saving_rate)},
           {"young_share", to_json(c.young_share)},
           {"old_share", to_json(c.old_share)},
           {"old_price_ratio", to_json(c.old_price_ratio)},
           {"bubbleless", c.bubbleless},
           {"note", c.note}};
    if (c.domination)
        j["domination"] = {{"a0", num(c.domination->a0)},
                           {"comparison_a0", num(c.domination->comparison_a0)},
                           {"T", c.domination->T},
                           {"min_margin", num(c.domination->min_margin)},
                           {"argmin_t", c.domination->argmin_t},
                           {"holds", c.domination->holds}};
    else
        j["domination"] = nullptr;
    return j;
}

json to_json(const WelfareRankReport& w) {
    json entries = json::array();
    for (const auto& e : w.entries)
        entries.push_back({{"a0", num(e.a0)}, {"survived", e.survived}, {"status", e.status}, {"error", e.error}});
    json pairs = json::array();
    for (const auto& p : w.pairs) {
        json m = json::array();
        for (double v : p.margin) m.push_back(num(v));
        pairs.push_back({{"lo", p.lo}, {"hi", p.hi}, {"min_margin", num(p.min_margin)}, {"argmin_t", p.argmin_t}, {"margins", m}});
    }
    return json{{"T", w.T}, {"strict", w.strict}, {"min_margin", num(w.min_margin)},
                {"entries", entries}, {"order", w.order}, {"pairs", pairs}};
}

json to_json(const ConditionBReport& r) {
    json clauses = json::array();
    for (const auto& c : r.clauses)
        clauses.push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"detail", c.detail},
                           {"t", c.t},
                           {"eps", num(c.eps)},
                           {"X", num(c.X)}});
    return json{{"all_pass", r.all_pass},
                {"all_bubbly", r.all_bubbly},
                {"all_bubbleless", r.all_bubbleless},
                {"saving_rate_bounded_away", r.saving_rate_bounded_away},
                {"low_dividend", to_json(r.low_dividend)},
                {"R", r.R ? num(*r.R) : json(nullptr)},
                {"clauses", clauses}};
}

json to_json(const NoBubbleReport& r) {
    return json{{"non_negligible_dividend", to_json(r.non_negligible_dividend)},
                {"high_interest", {{"verdict", limit_verdict_name(r.high_interest.verdict)},
                                   {"last_log", num(r.high_interest.last_log)},
                                   {"series", to_json(r.high_interest.series)}}},
                {"not_too_low_interest", to_json(r.not_too_low_interest)},
                {"no_bubbly_equilibria", r.no_bubbly_equilibria},
                {"bubbleless_exists", r.bubbleless_exists},
                {"unique_bubbleless", r.unique_bubbleless},
                {"unique_equilibrium_bubbleless", r.unique_equilibrium_bubbleless}};
}

json error_json(const std::exception& e) {
    const auto* oe = dynamic_cast<const Error*>(&e);
    return json{{"kind", oe ? oe->kind() : std::string("std::exception")}, {"message", e.what()}};
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Output {
public:
    explicit Output(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    void write(const std::string& rel, const std::string& content) {
        const fs::path p = root_ / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << content;
        if (!out) throw Error("IOError", "cannot write " + p.string());
        files_.push_back({rel, sha256_hex(content), content.size()});
    }
    const std::vector<ManifestEntry>& files() const { return files_; }
    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    std::vector<ManifestEntry> files_;
};

struct EqRun {
    std::string label;
    EquilibriumPath path;
    std::optional<PriceDecomposition> dec;
    std::optional<BubbleTestReport> bubble;
    std::optional<ParetoCertificate> cert;
    json files = json::object();
    std::string error;
};

struct Analysis {
    json regime;
    std::optional<Regime> regime_value;
    json set;
    std::optional<EquilibriumSetResult> set_value;
    std::vector<EqRun> eqs;
    json welfare;
    json tirole;
};

bool is_tirole(const Economy& e) {
    return e.dividend.kind() == SequenceGen::Kind::ClosedForm && e.dividend.closed_form_id() == kTiroleExplicitD;
}

double snap_radius(const Economy& e, const EquilibriumSetResult& s) {
    return std::max(2 * e.tol.bisect_tol, s.bracket_width);
}

void analyse_regime(const Economy& e, Analysis& a) {
    try {
        const auto r = classify_regime(e);
        a.regime = to_json(r);
        a.regime_value = r.regime;
    } catch (const NotApplicable& err) {
        a.regime = json{{"applicable", false}, {"reason", err.what()}};
    }
}

void add_path(const Economy& e, Analysis& a, const std::string& label, EquilibriumPath p) {
    EqRun r;
    r.label = label;
    r.path = std::move(p);
    if (r.path.survived()) {
        r.dec = decompose(e, r.path);
        r.bubble = bubble_test_path(e, r.path, *r.dec);
    } else {
        r.error = std::string("path did not survive: ") + status_name(r.path.status) + " at t=" +
                  std::to_string(r.path.violation_t);
    }
    a.eqs.push_back(std::move(r));
}

void analyse_set(const Scenario& sc, Analysis& a) {
    const Economy& e = sc.economy;
    const long T = e.horizon;
    if (!e.old_endowment_positive()) {
        if (e.utility.family() != Family::Log)
            throw NotApplicable("zero old-age endowment is supported for log utility only");
        const double a0 = e.beta(0) * e.ey(0) / (1 + e.beta(0));
        a.set = json{{"kind", "Unique"}, {"source", "closed-form"}, {"lower", num(a0)}, {"upper", num(a0)},
                     {"width", 0.0}, {"note", "zero old-age endowment: a_t = beta_t e^y_t / (1 + beta_t)"}};
        add_path(e, a, "unique", simulate_no_old_endowment(e, a0, T));
        return;
    }
    try {
        a.set_value = equilibrium_set(e);
    } catch (const NonConvergedSet& err) {
        const auto& part = err.partial();
        a.set = to_json(part);
        a.set["kind"] = "NonConverged";
        a.set["partial_kind"] = set_kind_name(part.kind);
        a.set["error"] = error_json(err);
        SimOptions snap;
        snap.initial_snap_abs = snap_radius(e, part);
        add_path(e, a, "extrapolated", simulate(e, part.upper, T, snap));
        return;
    } catch (const AssumptionViolated& err) {
        a.set = json{{"kind", "NotApplicable"}, {"error", error_json(err)}};
        return;
    }
    const auto& s = *a.set_value;
    a.set = to_json(s);
    a.set["source"] = "bisection";
    if (s.kind == SetKind::Empty) return;
    SimOptions snap;
    snap.initial_snap_abs = snap_radius(e, s);
    if (s.kind == SetKind::Unique) {
        add_path(e, a, "unique", simulate(e, s.upper, T, snap));
    } else {
        add_path(e, a, "lower", simulate(e, s.lower, T, snap));
        add_path(e, a, "interior", simulate(e, 0.5 * (s.lower + s.upper), T));
        add_path(e, a, "upper", simulate(e, s.upper, T, snap));
    }
}

void analyse_start(const Scenario& sc, Analysis& a) {
    if (!sc.a0) return;
    const Economy& e = sc.economy;
    EquilibriumPath p = e.old_endowment_positive() ? simulate(e, *sc.a0, e.horizon)
                                                   : simulate_no_old_endowment(e, *sc.a0, e.horizon);
    add_path(e, a, "start", std::move(p));
}

void analyse_tirole(const Economy& e, Analysis& a) {
    if (!is_tirole(e)) return;
    try {
        const auto q = tirole_quantities(e);
        a.tirole = json{{"R_star", num(q.rstar)}, {"h", num(q.h)}, {"x", num(q.x)}, {"d0", num(q.d0)},
                        {"K", num(q.K)}, {"rho", num(q.rho)}, {"d0_bound", num(q.d0_bound)},
                        {"a_inf", num(q.a_inf)}, {"a0_closed_form", num(q.a_inf + q.x * q.d0)}};
    } catch (const ModelPreconditionFailed& err) {
        a.tirole = json{{"error", error_json(err)}};
    }
}

void analyse_pareto(const Economy& e, Analysis& a) {
    const EquilibriumPath* best = nullptr;
    for (const auto& r : a.eqs)
        if (r.path.survived() && r.label != "start" && (!best || r.path.a0() > best->a0())) best = &r.path;
    for (auto& r : a.eqs) {
        if (!r.dec) continue;
        CertifyOptions opts;
        if (best && best->a0() > r.path.a0() && a.set_value && a.set_value->kind == SetKind::Continuum)
            opts.comparison = best;
        r.cert = certify(e, r.path, *r.dec, opts);
    }
    if (a.set_value && a.set_value->kind == SetKind::Continuum) {
        const auto& s = *a.set_value;
        SimOptions snap;
        snap.initial_snap_abs = snap_radius(e, s);
        const std::vector<double> a0s{s.lower + 0.01 * (s.upper - s.lower), 0.5 * (s.lower + s.upper), s.upper};
        try {
            a.welfare = to_json(welfare_rank(e, a0s, e.tol.series_T, snap));
        } catch (const RankViolation& err) {
            a.welfare = json{{"error", error_json(err)}};
        }
    }
}

void emit_path_files(Output& out, const std::string& prefix, EqRun& r) {
    std::ostringstream csv;
    write_path_csv(csv, r.path, r.dec ? &*r.dec : nullptr);
    const std::string csv_name = prefix + "paths/" + r.label + ".csv";
    out.write(csv_name, csv.str());
    r.files["csv"] = csv_name;
    auto series = [&](const std::string& what, auto value) {
        std::ostringstream os;
        for (size_t t = 0; t < r.path.a.size(); ++t) os << t << ' ' << fmt17(value(t)) << '\n';
        const std::string name = prefix + "plots/" + r.label + "_" + what + ".dat";
        out.write(name, os.str());
        r.files[what] = name;
    };
    series("a", [&](size_t t) { return r.path.a[t]; });
    if (r.dec) {
        const auto& d = *r.dec;
        series("F_over_q", [&](size_t t) { return d.F[t] / r.path.q[t]; });
        series("B_over_q", [&](size_t t) { return d.B[t] / r.path.q[t]; });
        series("logP", [&](size_t t) { return d.logP[t]; });
    }
}

json eq_json(const EqRun& r, bool with_bubble, bool with_pareto) {
    const auto& p = r.path;
    json j{{"label", r.label},
           {"a0", num(p.a0())},
           {"source", p.source},
           {"status", status_name(p.status)},
           {"survived_to", p.survived_to},
           {"violation_t", p.violation_t},
           {"snaps", p.snaps},
           {"max_correction", num(p.max_correction)},
           {"max_euler_residual", num(p.max_euler_residual)},
           {"a_T", num(p.a.back())},
           {"R_T", num(p.R.back())}};
    if (r.dec) j["tail_bound"] = num(r.dec->tail_bound);
    if (with_bubble) j["bubble_test"] = r.bubble ? to_json(*r.bubble) : json(nullptr);
    if (with_pareto) j["pareto"] = r.cert ? to_json(*r.cert) : json(nullptr);
    if (!r.error.empty()) j["error"] = r.error;
    j["files"] = r.files;
    return j;
}

// Which verdicts count toward the "undetermined only" exit status.
struct Determinations {
    int determined = 0;
    int undetermined = 0;
    void add(bool d) { (d ? determined : undetermined) += 1; }
    bool undetermined_only() const { return undetermined > 0 && determined == 0; }
};

void tally(const Analysis& a, Determinations& det, bool regime, bool bubble, bool pareto) {
    if (regime && a.regime_value) det.add(*a.regime_value != Regime::Undetermined);
    for (const auto& r : a.eqs) {
        if (bubble && r.bubble) det.add(r.bubble->verdict != BubbleVerdict::Inconclusive);
        if (pareto && r.cert) det.add(r.cert->verdict != Optimality::Undetermined);
    }
}

json oracle(const std::string& name, bool pass, double value, double tol, const std::string& detail) {
    return json{{"name", name}, {"pass", pass}, {"value", num(value)}, {"tolerance", num(tol)}, {"detail", detail}};
}

json run_oracles(const Scenario& sc, const Analysis& a, bool& all_pass) {
    const Economy& e = sc.economy;
    json list = json::array();
    auto push = [&](json o) {
        all_pass = all_pass && o["pass"].get<bool>();
        list.push_back(std::move(o));
    };
    for (const auto& r : a.eqs) {
        if (!r.dec) continue;
        const auto& p = r.path;
        double replay = 0;
        for (long t = 0; t < p.last(); ++t) {
            const size_t i = static_cast<size_t>(t);
            const double lhs = p.a[i + 1] + e.d(t + 1);
            replay = std::max(replay, std::abs(lhs - p.a[i] * p.R[i + 1] / e.n) / std::max(lhs, 1e-300));
        }
        push(oracle("recursion-replay/" + r.label, replay <= 1e-12, replay, 1e-12,
                    "max relative |a_{t+1} + d_{t+1} - a_t R_{t+1}/n|"));
        const double tel = telescoping_residual(e, p, *r.dec);
        push(oracle("telescoping/" + r.label, tel <= 1e-10, tel, 1e-10, "q_0 = sum Q_s D_s + Q_T q_T"));
        double growth = 0;
        const long half = std::min(e.tol.series_T, p.last()) / 2;
        for (long t = 0; t < half; ++t) {
            const size_t i = static_cast<size_t>(t);
            if (!(r.dec->B[i] > 1e-6 * p.q[i])) continue;
            growth = std::max(growth, std::abs(r.dec->B[i + 1] - p.R[i + 1] * r.dec->B[i]) / p.q[i + 1]);
        }
        push(oracle("bubble-growth/" + r.label, growth <= 1e-9, growth, 1e-9,
                    "|B_{t+1} - R_{t+1} B_t| / q_{t+1} over the first half of the series window"));
    }
    if (e.utility.family() == Family::Log && e.old_endowment_positive() && !a.eqs.empty()) {
        const auto& base = a.eqs.back().path;
        SimOptions raw;
        raw.mode = SimMode::Raw;
        const auto p = simulate(e, base.a0(), std::min(100L, e.horizon), raw);
        double worst = 0;
        for (long t = 0; t < p.last(); ++t) {
            const size_t i = static_cast<size_t>(t);
            const double beta = e.beta(t), eo1 = e.eo(t + 1);
            const double inv = e.n * beta * e.ey(t) / eo1 / p.a[i] - e.n * (1 + beta) / eo1;
            const double next = 1.0 / inv - e.d(t + 1);
            worst = std::max(worst, std::abs(next - p.a[i + 1]) / std::max(1.0, std::abs(p.a[i + 1])));
        }
        push(oracle("log-reciprocal-map", worst <= 1e-10, worst, 1e-10,
                    "one-step agreement with 1/(a_{t+1}+d_{t+1}) = (n beta e^y_t / e^o_{t+1})/a_t - n(1+beta)/e^o_{t+1}, " +
                        std::to_string(p.last()) + " steps"));
    }
    if (is_tirole(e) && !a.tirole.contains("error")) {
        const long T = std::min(200L, e.horizon);
        const auto cf = closed_form_path(e, "tirole-explicit", T);
        const auto p = simulate(e, cf.a0(), T);
        double err = p.survived() ? 0.0 : std::numeric_limits<double>::infinity();
        for (long t = 0; t <= std::min(p.last(), cf.last()); ++t)
            err = std::max(err, std::abs(p.a[static_cast<size_t>(t)] - cf.a[static_cast<size_t>(t)]));
        push(oracle("tirole-closed-form", err < 1e-8, err, 1e-8, "max |a_t - closed form| over t <= " + std::to_string(T)));
    }
    if (!e.old_endowment_positive()) {
        for (const auto& r : a.eqs) {
            double err = 0;
            for (long t = 0; t <= r.path.last(); ++t) {
                const double b = e.beta(t);
                err = std::max(err, std::abs(r.path.a[static_cast<size_t>(t)] - b * e.ey(t) / (1 + b)));
            }
            push(oracle("no-old-endowment-closed-form/" + r.label, err == 0.0, err, 0.0, "a_t = beta_t e^y_t/(1+beta_t)"));
        }
    }
    if (a.set_value && a.set_value->kind == SetKind::Continuum && a.set_value->steady_state) {
        for (const auto& r : a.eqs) {
            if (r.label != "upper" || !r.path.survived()) continue;
            const double gap = std::abs(r.path.a.back() - *a.set_value->steady_state);
            push(oracle("steady-state", gap < 1e-3, gap, 1e-3, "|a_T - a_hat| on the maximal equilibrium"));
        }
    }
    if (e.add_assum()) {
        const long T = std::min(64L, e.horizon);
        const auto seeds = seed_grid(e);
        const bool same = seed_fates(e, seeds, T, Kernel::Serial) == seed_fates(e, seeds, T, Kernel::Parallel);
        push(oracle("serial-parallel-kernels", same, same ? 0.0 : 1.0, 0.0, "seed fates agree between kernels"));
    }
    return list;
}

json scenario_json(const Scenario& sc, const RunConfig& cfg) {
    return json{{"source", sc.source},
                {"overrides", cfg.overrides},
                {"config", table_json(sc.table)},
                {"economy", economy_json(sc.economy)},
                {"start_a0", sc.a0 ? num(*sc.a0) : json(nullptr)}};
}

void fill_analysis(const Scenario& sc, Analysis& a, bool pareto) {
    analyse_regime(sc.economy, a);
    analyse_set(sc, a);
    analyse_start(sc, a);
    analyse_tirole(sc.economy, a);
    if (pareto) analyse_pareto(sc.economy, a);
}

void put_analysis(json& rep, Analysis& a, Output& out, const std::string& prefix, bool bubble, bool pareto) {
    rep["regime"] = a.regime;
    rep["equilibrium_set"] = a.set;
    if (!a.tirole.is_null()) rep["explicit_model"] = a.tirole;
    json eqs = json::array();
    for (auto& r : a.eqs) {
        emit_path_files(out, prefix, r);
        eqs.push_back(eq_json(r, bubble, pareto));
    }
    rep["equilibria"] = eqs;
    if (pareto && !a.welfare.is_null()) rep["welfare_rank"] = a.welfare;
}

void run_command(const RunConfig& cfg, json& rep, Output& out, Determinations& det, bool& oracles_ok) {
    const std::string& cmd = cfg.command;
    const Scenario sc = load_scenario(cfg.scenario, cfg.overrides, cfg.horizon);
    rep["scenario"] = scenario_json(sc, cfg);
    out.write("scenario.ini", render_table(sc.table));

    if (cmd == "classify") {
        Analysis a;
        analyse_regime(sc.economy, a);
        rep["regime"] = a.regime;
        try {
            rep["no_bubble_conditions"] = to_json(no_bubble_conditions(sc.economy));
        } catch (const Error& err) {
            rep["no_bubble_conditions"] = json{{"error", error_json(err)}};
        }
        try {
            rep["condition_B_auto"] = to_json(condition_B_auto(sc.economy));
        } catch (const Error& err) {
            rep["condition_B_auto"] = json{{"error", error_json(err)}};
        }
        tally(a, det, true, false, false);
        return;
    }
    if (cmd == "sweep") {
        if (!sc.sweep) throw ParseError(0, "sweep needs a [sweep] section with parameter and values");
        json points = json::array();
        for (size_t k = 0; k < sc.sweep->values.size(); ++k) {
            auto ov = cfg.overrides;
            ov.push_back(sc.sweep->parameter + "=" + sc.sweep->values[k]);
            const Scenario pt = load_scenario(cfg.scenario, ov, cfg.horizon);
            Analysis a;
            fill_analysis(pt, a, true);
            json pj{{"index", k}, {"parameter", sc.sweep->parameter}, {"value", sc.sweep->values[k]}};
            put_analysis(pj, a, out, "sweep/" + std::to_string(k) + "/", true, true);
            points.push_back(pj);
            tally(a, det, true, true, true);
        }
        rep["sweep"] = points;
        return;
    }

    const bool bubble = cmd != "pareto";
    const bool pareto = cmd == "solve" || cmd == "pareto" || cmd == "demo";
    Analysis a;
    fill_analysis(sc, a, pareto);
    put_analysis(rep, a, out, "", bubble, pareto);
    if (cmd == "oracle-check" || cmd == "demo") {
        rep["oracles"] = run_oracles(sc, a, oracles_ok);
    }
    if (cmd == "oracle-check") return;
    tally(a, det, cmd != "bubble-test" && cmd != "pareto", bubble, pareto);
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("HashError", "SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve", "classify", "bubble-test", "pareto",
                                                "sweep", "oracle-check", "demo"};
    return names;
}

RunReport run(const RunConfig& cfg) {
    RunReport result;
    json& rep = result.report;
    const auto t0 = std::chrono::steady_clock::now();
    rep["tool"] = "olg";
    rep["schema_version"] = 1;
    rep["command"] = cfg.command;

    const auto& cmds = command_names();
    if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end()) {
        result.exit_code = 1;
        result.error = "unknown command '" + cfg.command + "'";
        return result;
    }

    std::optional<Output> out;
    Determinations det;
    bool oracles_ok = true;
    try {
        out.emplace(cfg.output_dir);
        run_command(cfg, rep, *out, det, oracles_ok);
        if (!oracles_ok) {
            result.exit_code = 1;
            result.error = "one or more oracle checks failed";
        } else {
            result.exit_code = det.undetermined_only() ? 2 : 0;
        }
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = e.what();
        rep["error"] = error_json(e);
    }
    rep["outcome"] = {{"exit_code", result.exit_code},
                      {"determined", det.determined},
                      {"undetermined", det.undetermined},
                      {"undetermined_only", det.undetermined_only()},
                      {"error", result.error}};
    if (!out) return result;

    json files = json::array();
    for (const auto& f : out->files())
        files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    rep["files"] = files;
    if (!cfg.deterministic) {
        rep["run"] = {{"generated_at", timestamp()},
                      {"elapsed_seconds",
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    }
    try {
        out->write("report.json", rep.dump(2) + "\n");
        std::ostringstream man;
        for (const auto& f : out->files()) man << f.sha256 << "  " << f.path << '\n';
        result.manifest = out->files();
        out->write("manifest.sha256", man.str());
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = e.what();
    }
    return result;
}

}  // namespace olg

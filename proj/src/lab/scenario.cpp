#include "olg/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "olg/errors.hpp"

namespace olg {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = [] {
        const std::vector<std::string> seq_fields{"kind", "value", "c0", "ratio", "alpha", "values", "tail", "tail_ratio"};
        std::set<std::string> endow{"young", "old"};
        for (const auto& f : seq_fields) {
            endow.insert("young." + f);
            endow.insert("old." + f);
        }
        std::set<std::string> div(seq_fields.begin(), seq_fields.end());
        div.insert({"d0", "x", "basis"});
        return std::map<std::string, std::set<std::string>>{
            {"utility", {"family", "beta", "sigma", "sigma1", "sigma2", "beta_t"}},
            {"endowments", endow},
            {"dividends", div},
            {"economy", {"name", "n", "horizon", "a0"}},
            {"tolerances", {"root_tol", "series_T", "tail_ratio_window", "survive_eps", "bisect_tol"}},
            {"sweep", {"parameter", "values"}},
        };
    }();
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const ScenarioEntry& e, const std::string& where, const std::string& what) {
    if (e.line > 0) throw ParseError(e.line, where + ": " + what);
    throw ParseError(0, "override " + where + ": " + what);
}

double to_number(const ScenarioEntry& e, const std::string& where) {
    const std::string s = trim(e.value);
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != last)
        fail(e, where, "expected a decimal number, got '" + e.value + "'");
    return v;
}

long to_integer(const ScenarioEntry& e, const std::string& where) {
    const std::string s = trim(e.value);
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(e, where, "expected an integer, got '" + e.value + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> to_list(const ScenarioEntry& e, const std::string& where) {
    std::vector<double> out;
    for (const auto& item : split_list(e.value)) {
        ScenarioEntry one{item, e.line};
        out.push_back(to_number(one, where));
    }
    if (out.empty()) fail(e, where, "expected a comma-separated list of numbers");
    return out;
}

class Section {
public:
    Section(const ScenarioTable& t, const std::string& name) : name_(name) {
        auto it = t.find(name);
        if (it != t.end()) entries_ = &it->second;
    }
    const ScenarioEntry* get(const std::string& key) const {
        if (!entries_) return nullptr;
        auto it = entries_->find(key);
        return it == entries_->end() ? nullptr : &it->second;
    }
    bool has(const std::string& key) const { return get(key) != nullptr; }
    std::string where(const std::string& key) const { return name_ + "." + key; }
    double number(const std::string& key) const {
        const auto* e = get(key);
        if (!e) throw ParseError(0, "missing required key " + where(key));
        return to_number(*e, where(key));
    }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    std::string text_or(const std::string& key, const std::string& fallback) const {
        const auto* e = get(key);
        return e ? trim(e->value) : fallback;
    }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    const std::map<std::string, ScenarioEntry>* entries_ = nullptr;
};

SequenceGen parse_sequence(const Section& s, const std::string& prefix, bool required) {
    const std::string base = prefix.empty() ? "" : prefix.substr(0, prefix.size() - 1);
    if (!prefix.empty() && s.has(base)) {
        for (const char* f : {"kind", "value", "c0", "ratio", "alpha", "values", "tail", "tail_ratio"})
            if (s.has(prefix + f))
                fail(*s.get(prefix + f), s.where(prefix + f), "cannot be combined with the shorthand " + s.where(base));
        return SequenceGen::constant(s.number(base));
    }
    const auto* kind_e = s.get(prefix + "kind");
    if (!kind_e) {
        if (required) throw ParseError(0, "missing " + s.where(base) + " (or " + s.where(prefix + "kind") + ")");
        return SequenceGen::constant(0.0);
    }
    const std::string kind = trim(kind_e->value);
    try {
        if (kind == "constant") return SequenceGen::constant(s.number(prefix + "value"));
        if (kind == "zero") return SequenceGen::constant(0.0);
        if (kind == "geometric") return SequenceGen::geometric(s.number(prefix + "c0"), s.number(prefix + "ratio"));
        if (kind == "power-law") return SequenceGen::power_law(s.number(prefix + "c0"), s.number(prefix + "alpha"));
        if (kind == "list") {
            const auto* ve = s.get(prefix + "values");
            if (!ve) throw ParseError(kind_e->line, "list needs " + s.where(prefix + "values"));
            const std::string tail = s.text_or(prefix + "tail", "repeat-last");
            if (tail == "repeat-last") return SequenceGen::explicit_list(to_list(*ve, s.where(prefix + "values")));
            if (tail == "geometric")
                return SequenceGen::explicit_list(to_list(*ve, s.where(prefix + "values")),
                                                  TailRule::GeometricExtrapolate, s.number(prefix + "tail_ratio"));
            fail(*s.get(prefix + "tail"), s.where(prefix + "tail"), "expected repeat-last or geometric");
        }
    } catch (const InvalidSequence& err) {
        fail(*kind_e, s.where(prefix + "kind"), err.what());
    }
    fail(*kind_e, s.where(prefix + "kind"),
         "unknown sequence kind '" + kind + "' (constant, zero, geometric, power-law, list" +
             (prefix.empty() ? std::string(", ") + kTiroleExplicitD : std::string()) + ")");
}

Utility parse_utility(const Section& s) {
    const auto* fam = s.get("family");
    if (!fam) throw ParseError(0, "missing required key utility.family");
    const std::string f = trim(fam->value);
    const double beta = s.number_or("beta", 1.0);
    try {
        if (f == "log") return Utility::log(beta);
        if (f == "crra") return Utility::crra(s.number("sigma"), beta);
        if (f == "crra2") return Utility::crra2(s.number("sigma1"), s.number("sigma2"), beta);
    } catch (const DomainError& err) {
        fail(*fam, "utility.family", err.what());
    } catch (const InvalidEconomy& err) {
        fail(*fam, "utility.family", err.what());
    }
    fail(*fam, "utility.family", "unknown family '" + f + "' (log, crra, crra2)");
}

}  // namespace

ScenarioTable parse_scenario_table(const std::string& text) {
    ScenarioTable table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto cut = raw.find_first_of("#;");
        const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!known_keys().count(section)) throw ParseError(line, "unknown section [" + section + "]");
            table[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value', got '" + s + "'");
        if (section.empty()) throw ParseError(line, "key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "empty key");
        if (!known_keys().at(section).count(key))
            throw ParseError(line, "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) throw ParseError(line, "empty value for " + section + "." + key);
        auto& slot = table[section];
        if (slot.count(key))
            throw ParseError(line, "duplicate key " + section + "." + key + " (first set on line " +
                                       std::to_string(slot[key].line) + ")");
        slot[key] = ScenarioEntry{value, line};
    }
    return table;
}

void apply_overrides(ScenarioTable& table, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        const auto dot = o.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ParseError(0, "override '" + o + "' must look like section.key=value");
        const std::string section = trim(o.substr(0, dot));
        const std::string key = trim(o.substr(dot + 1, eq - dot - 1));
        const std::string value = trim(o.substr(eq + 1));
        auto known = known_keys().find(section);
        if (known == known_keys().end()) throw ParseError(0, "override '" + o + "': unknown section [" + section + "]");
        if (!known->second.count(key)) throw ParseError(0, "override '" + o + "': unknown key '" + key + "'");
        if (value.empty()) throw ParseError(0, "override '" + o + "': empty value");
        table[section][key] = ScenarioEntry{value, 0};
    }
}

Scenario build_scenario(const ScenarioTable& table, std::string source) {
    Scenario sc;
    sc.source = std::move(source);
    sc.table = table;
    Economy& e = sc.economy;

    const Section util(table, "utility"), endow(table, "endowments"), div(table, "dividends"),
        eco(table, "economy"), tol(table, "tolerances"), sweep(table, "sweep");

    e.utility = parse_utility(util);
    if (const auto* bt = util.get("beta_t")) e.beta_seq = SequenceGen::explicit_list(to_list(*bt, "utility.beta_t"));

    e.endow_young = parse_sequence(endow, "young.", true);
    e.endow_old = parse_sequence(endow, "old.", true);

    e.name = eco.text_or("name", "scenario");
    e.n = eco.number_or("n", 1.0);
    if (const auto* h = eco.get("horizon")) e.horizon = to_integer(*h, "economy.horizon");
    if (eco.has("a0")) sc.a0 = eco.number("a0");

    const std::string basis = div.text_or("basis", "aggregate");
    if (basis == "aggregate") e.basis = DividendBasis::Aggregate;
    else if (basis == "per-capita") e.basis = DividendBasis::PerCapita;
    else fail(*div.get("basis"), "dividends.basis", "expected aggregate or per-capita");

    const std::string dkind = div.text_or("kind", "zero");
    if (dkind == kTiroleExplicitD) {
        const auto* ke = div.get("kind");
        if (e.utility.family() != Family::Log || !e.endow_young.is_constant() || !e.endow_old.is_constant())
            fail(*ke, "dividends.kind", std::string(kTiroleExplicitD) + " needs log utility and constant endowments");
        std::map<std::string, double> p{{"d0", div.number("d0")}, {"x", div.number("x")}, {"n", e.n},
                                        {"beta", e.utility.beta()}, {"ey", e.ey(0)}, {"eo", e.eo(0)}};
        try {
            e.dividend = SequenceGen::closed_form(kTiroleExplicitD, p);
            e.dividend.value(0);
        } catch (const InvalidSequence& err) {
            fail(*ke, "dividends.kind", err.what());
        }
    } else {
        for (const char* k : {"d0", "x"})
            if (div.has(k)) fail(*div.get(k), div.where(k), std::string("only used by kind = ") + kTiroleExplicitD);
        e.dividend = parse_sequence(div, "", false);
    }

    if (const auto* x = tol.get("root_tol")) e.tol.root_tol = to_number(*x, "tolerances.root_tol");
    if (const auto* x = tol.get("series_T")) e.tol.series_T = to_integer(*x, "tolerances.series_T");
    if (const auto* x = tol.get("tail_ratio_window")) e.tol.tail_ratio_window = to_integer(*x, "tolerances.tail_ratio_window");
    if (const auto* x = tol.get("survive_eps")) e.tol.survive_eps = to_number(*x, "tolerances.survive_eps");
    if (const auto* x = tol.get("bisect_tol")) e.tol.bisect_tol = to_number(*x, "tolerances.bisect_tol");

    if (sweep.has("parameter") || sweep.has("values")) {
        SweepSpec sp;
        sp.parameter = sweep.text_or("parameter", "");
        const auto* ve = sweep.get("values");
        if (sp.parameter.empty() || !ve) throw ParseError(0, "[sweep] needs both parameter and values");
        const auto dot = sp.parameter.find('.');
        const std::string sec = dot == std::string::npos ? "" : sp.parameter.substr(0, dot);
        const std::string key = dot == std::string::npos ? "" : sp.parameter.substr(dot + 1);
        if (!known_keys().count(sec) || !known_keys().at(sec).count(key) || sec == "sweep")
            fail(*sweep.get("parameter"), "sweep.parameter", "'" + sp.parameter + "' is not a scenario key");
        sp.values = split_list(ve->value);
        sc.sweep = sp;
    }

    e.validate();
    return sc;
}

Scenario load_scenario(const std::string& path_or_preset, const std::vector<std::string>& overrides,
                       std::optional<long> horizon) {
    std::string text, source;
    const auto& names = preset_names();
    const bool is_preset_name = std::find(names.begin(), names.end(), path_or_preset) != names.end();
    if (std::filesystem::is_regular_file(path_or_preset)) {
        std::ifstream in(path_or_preset);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        source = path_or_preset;
    } else if (is_preset_name) {
        text = preset_text(path_or_preset);
        source = "preset:" + path_or_preset;
    } else {
        throw ParseError(0, "scenario '" + path_or_preset + "' is neither a readable file nor a preset");
    }
    ScenarioTable table = parse_scenario_table(text);
    apply_overrides(table, overrides);
    if (horizon) {
        if (*horizon < 2) throw ParseError(0, "--horizon must be at least 2");
        table["economy"]["horizon"] = ScenarioEntry{std::to_string(*horizon), 0};
        // Keep the series window inside a shortened horizon.
        Section tol(table, "tolerances");
        const long series_T = tol.has("series_T") ? to_integer(*tol.get("series_T"), "tolerances.series_T") : 200;
        if (series_T > *horizon) {
            const long window = tol.has("tail_ratio_window")
                                    ? to_integer(*tol.get("tail_ratio_window"), "tolerances.tail_ratio_window")
                                    : 50;
            table["tolerances"]["series_T"] = ScenarioEntry{std::to_string(*horizon), 0};
            table["tolerances"]["tail_ratio_window"] =
                ScenarioEntry{std::to_string(std::max(1L, std::min(window, *horizon / 4))), 0};
        }
    }
    return build_scenario(table, source);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"tirole-explicit", "log-pure-bubble", "claim1-continuum",
                                                "claim2-unique",   "high-interest",   "knife-edge"};
    return names;
}

std::string preset_text(const std::string& name) {
    static const std::map<std::string, std::string> presets{
        {"tirole-explicit", R"([economy]
name = tirole-explicit
n = 1
horizon = 200
a0 = 0.30

[utility]
family = log
beta = 1

[endowments]
young = 1
old = 0.5

[dividends]
kind = tirole-explicit-d
d0 = 0.1
x = 0.5

[sweep]
parameter = dividends.d0
values = 0.05, 0.1, 0.15
)"},
        {"log-pure-bubble", R"([economy]
name = log-pure-bubble
n = 1
horizon = 200

[utility]
family = log
beta = 1

[endowments]
young = 2
old = 1

[dividends]
kind = zero
)"},
        {"claim1-continuum", R"([economy]
name = claim1-continuum
n = 1
horizon = 200

[utility]
family = log
beta = 1

[endowments]
young = 2
old = 1

[dividends]
kind = geometric
c0 = 0.01
ratio = 0.4
)"},
        {"claim2-unique", R"([economy]
name = claim2-unique
n = 1
horizon = 200

[utility]
family = log
beta = 1

[endowments]
young = 2
old = 1

[dividends]
kind = geometric
c0 = 0.01
ratio = 0.8
)"},
        {"high-interest", R"([economy]
name = high-interest
n = 1
horizon = 200

[utility]
family = log
beta = 1

[endowments]
young = 2
old = 3

[dividends]
kind = geometric
c0 = 0.01
ratio = 0.5
)"},
        {"knife-edge", R"([economy]
name = knife-edge
n = 1
horizon = 200

[utility]
family = log
beta = 1

[endowments]
young = 1
old = 1

[dividends]
kind = geometric
c0 = 0.01
ratio = 0.5
)"},
    };
    auto it = presets.find(name);
    if (it == presets.end()) throw ParseError(0, "unknown preset '" + name + "'");
    return it->second;
}

std::string render_table(const ScenarioTable& table) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [section, entries] : table) {
        if (!first) os << '\n';
        first = false;
        os << '[' << section << "]\n";
        for (const auto& [key, entry] : entries) os << key << " = " << entry.value << '\n';
    }
    return os.str();
}

}  // namespace olg

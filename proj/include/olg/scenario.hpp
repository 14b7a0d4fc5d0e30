#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "olg/economy.hpp"

namespace olg {

// One `key = value` entry of a scenario file, remembering where it came from.
struct ScenarioEntry {
    std::string value;
    int line = 0;  // 0 for entries set by an override
};

// section -> key -> entry, kept sorted so that echoes are stable.
using ScenarioTable = std::map<std::string, std::map<std::string, ScenarioEntry>>;

struct SweepSpec {
    std::string parameter;  // "section.key"
    std::vector<std::string> values;
};

struct Scenario {
    std::string source;  // file path or "preset:<name>"
    ScenarioTable table;
    Economy economy;
    // Optional starting value for an explicitly simulated path.
    std::optional<double> a0;
    std::optional<SweepSpec> sweep;
};

// Parses the key-value text into a table. Throws ParseError with the offending line.
ScenarioTable parse_scenario_table(const std::string& text);

// Applies "section.key=value" overrides to a table; unknown sections or keys
// are rejected when the economy is built.
void apply_overrides(ScenarioTable& table, const std::vector<std::string>& overrides);

// Builds and validates the economy described by a table.
Scenario build_scenario(const ScenarioTable& table, std::string source);

// Reads a file, or a built-in preset when `path_or_preset` names one and no
// such file exists. Overrides are applied before validation.
Scenario load_scenario(const std::string& path_or_preset, const std::vector<std::string>& overrides = {},
                       std::optional<long> horizon = std::nullopt);

const std::vector<std::string>& preset_names();
// Scenario text of a preset; throws ParseError for unknown names.
std::string preset_text(const std::string& name);

// Canonical text of a table (sections and keys sorted).
std::string render_table(const ScenarioTable& table);

}  // namespace olg

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace olg {

struct RunConfig {
    // solve, classify, bubble-test, pareto, sweep, oracle-check or demo.
    std::string command;
    std::string scenario;
    std::string output_dir = "olg-out";
    std::vector<std::string> overrides;
    std::optional<long> horizon;
    bool deterministic = false;
};

struct ManifestEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunReport {
    nlohmann::ordered_json report;
    std::vector<ManifestEntry> manifest;
    // 0 success, 2 when every verdict is undetermined, 1 on error.
    int exit_code = 0;
    std::string error;
};

const std::vector<std::string>& command_names();

// Never throws for model or parse failures: they become exit code 1 with the
// message in `error` (and in the report when one could be written).
RunReport run(const RunConfig& cfg);

std::string sha256_hex(const std::string& bytes);

}  // namespace olg

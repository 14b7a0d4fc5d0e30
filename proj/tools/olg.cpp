#include <CLI11.hpp>

#include <iostream>

#include "olg/lab.hpp"
#include "olg/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Equilibria, bubbles and optimality in two-period OLG economies with a dividend-paying asset"};
    app.set_version_flag("--version", "olg 1.0");

    olg::RunConfig cfg;
    long horizon = 0;
    std::string presets;
    for (const auto& p : olg::preset_names()) presets += (presets.empty() ? "" : ", ") + p;

    app.add_option("command", cfg.command, "solve | classify | bubble-test | pareto | sweep | oracle-check | demo")
        ->required()
        ->check(CLI::IsMember(olg::command_names()));
    app.add_option("--scenario", cfg.scenario, "scenario file, or a preset name (" + presets + ")")->required();
    app.add_option("--override", cfg.overrides, "section.key=value applied before validation (repeatable)");
    app.add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
    auto* h = app.add_option("--horizon", horizon, "simulation horizon T (overrides economy.horizon)");
    app.add_flag("--deterministic", cfg.deterministic, "omit timestamps and timings from the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (h->count() > 0) cfg.horizon = horizon;

    const olg::RunReport r = olg::run(cfg);
    if (r.exit_code == 1) std::cerr << "olg: " << r.error << '\n';
    const auto& rep = r.report;
    if (rep.contains("regime") && rep["regime"].contains("regime"))
        std::cout << "regime: " << rep["regime"]["regime"].get<std::string>() << '\n';
    if (rep.contains("equilibrium_set") && rep["equilibrium_set"].contains("kind"))
        std::cout << "equilibrium set: " << rep["equilibrium_set"]["kind"].get<std::string>() << " ["
                  << rep["equilibrium_set"]["lower"].dump() << ", " << rep["equilibrium_set"]["upper"].dump() << "]\n";
    if (rep.contains("equilibria"))
        for (const auto& e : rep["equilibria"]) {
            std::cout << "  " << e["label"].get<std::string>() << ": a0=" << e["a0"].dump() << " "
                      << e["status"].get<std::string>();
            if (e.contains("bubble_test") && !e["bubble_test"].is_null())
                std::cout << " bubble=" << e["bubble_test"]["verdict"].get<std::string>();
            if (e.contains("pareto") && !e["pareto"].is_null())
                std::cout << " pareto=" << e["pareto"]["verdict"].get<std::string>();
            std::cout << '\n';
        }
    if (rep.contains("oracles"))
        for (const auto& o : rep["oracles"])
            std::cout << (o["pass"].get<bool>() ? "  PASS " : "  FAIL ") << o["name"].get<std::string>() << " ("
                      << o["value"].dump() << ")\n";
    if (rep.contains("sweep"))
        for (const auto& p : rep["sweep"]) {
            std::cout << "  " << p["parameter"].get<std::string>() << "=" << p["value"].get<std::string>();
            if (p.contains("equilibrium_set") && p["equilibrium_set"].contains("upper"))
                std::cout << " a0=" << p["equilibrium_set"]["upper"].dump();
            std::cout << '\n';
        }
    if (!r.manifest.empty()) std::cout << "wrote " << r.manifest.size() << " files to " << cfg.output_dir << '\n';
    return r.exit_code;
}

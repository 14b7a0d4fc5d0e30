#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "olg/errors.hpp"
#include "olg/lab.hpp"
#include "olg/scenario.hpp"

using namespace olg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("olg-test-" + name);
    fs::remove_all(p);
    return p;
}

int parse_error_line(const std::string& text) {
    try {
        parse_scenario_table(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

RunReport run_cmd(const std::string& command, const std::string& scenario, const fs::path& out,
                  std::vector<std::string> overrides = {}) {
    RunConfig cfg;
    cfg.command = command;
    cfg.scenario = scenario;
    cfg.output_dir = out.string();
    cfg.overrides = std::move(overrides);
    cfg.deterministic = true;
    return run(cfg);
}

}  // namespace

TEST_CASE("SHA-256 matches the standard test vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("scenario files in the repository equal the built-in presets") {
    for (const auto& name : preset_names()) {
        const fs::path file = fs::path(OLG_SOURCE_DIR) / "scenarios" / (name + ".ini");
        REQUIRE(fs::exists(file));
        CHECK(render_table(parse_scenario_table(slurp(file))) == render_table(parse_scenario_table(preset_text(name))));
    }
    for (const auto& entry : fs::directory_iterator(fs::path(OLG_SOURCE_DIR) / "scenarios"))
        CHECK_NOTHROW(load_scenario(entry.path().string()));
}

TEST_CASE("parse errors carry the offending line") {
    CHECK(parse_error_line("[economy]\nn = 1\nbogus = 2\n") == 3);
    CHECK(parse_error_line("[economy]\nn = 1\n\n# comment\nn = 2\n") == 5);
    CHECK(parse_error_line("[nowhere]\n") == 1);
    CHECK(parse_error_line("[economy\n") == 1);
    CHECK(parse_error_line("[economy]\njust text\n") == 2);
    CHECK(parse_error_line("n = 1\n") == 1);
    CHECK(parse_error_line("[economy]\nn =\n") == 2);
    CHECK(parse_error_line("[economy] ; trailing comment\nn = 1 # also fine\n") == -1);

    auto bad_number = [](const std::string& text) {
        try {
            build_scenario(parse_scenario_table(text), "inline");
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    const std::string head = "[utility]\nfamily = log\n[endowments]\nyoung = 1\nold = 1\n";
    CHECK(bad_number(head + "[economy]\nn = 1.0x\n") == 7);
    CHECK(bad_number(head + "[dividends]\nkind = wobbly\n") == 7);
    CHECK(bad_number(head + "[dividends]\nkind = geometric\nc0 = 0.01\nratio = -2\n") == 7);
}

TEST_CASE("overrides are applied before validation") {
    const auto sc = load_scenario("claim1-continuum", {"dividends.ratio=0.8", "economy.name = changed"});
    CHECK(sc.economy.dividend.ratio() == doctest::Approx(0.8));
    CHECK(sc.economy.name == "changed");
    CHECK(sc.table.at("dividends").at("ratio").line == 0);

    auto message = [](const std::string& o) {
        try {
            load_scenario("claim1-continuum", {o});
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("dividends.ratio").find("override") != std::string::npos);
    CHECK(message("dividends.wobble=1").find("override") != std::string::npos);
    CHECK(message("nowhere.key=1").find("override") != std::string::npos);
    CHECK_THROWS_AS(load_scenario("claim1-continuum", {"economy.n=-1"}), Error);
}

TEST_CASE("explicit-model preset") {
    const auto sc = load_scenario("tirole-explicit");
    REQUIRE(sc.a0);
    CHECK(*sc.a0 == doctest::Approx(0.30));
    CHECK(sc.economy.d(1) == doctest::Approx(1.0 / 12.0));
    REQUIRE(sc.sweep);
    CHECK(sc.sweep->parameter == "dividends.d0");
    CHECK(sc.sweep->values.size() == 3);
}

TEST_CASE("horizon flag shortens the series window") {
    const auto sc = load_scenario("claim1-continuum", {}, 80);
    CHECK(sc.economy.horizon == 80);
    CHECK(sc.economy.tol.series_T == 80);
    CHECK(sc.economy.tol.tail_ratio_window == 20);
    CHECK_THROWS_AS(load_scenario("claim1-continuum", {}, 1), ParseError);
    CHECK_THROWS_AS(load_scenario("no-such-preset-or-file"), ParseError);
}

TEST_CASE("demo on the explicit model writes consistent files") {
    const auto out = scratch("demo");
    const auto r = run_cmd("demo", "tirole-explicit", out);
    REQUIRE(r.exit_code == 0);
    for (const auto& o : r.report["oracles"]) CHECK_MESSAGE(o["pass"].get<bool>(), o["name"].get<std::string>());

    std::istringstream csv(slurp(out / "paths" / "start.csv"));
    std::string line, last;
    std::getline(csv, line);
    CHECK(line == "t,a,R,q,cy,co,f,b,logQ,logP");
    std::getline(csv, line);
    CHECK(std::stod(line.substr(line.find(',') + 1)) == doctest::Approx(0.30).epsilon(1e-15));
    while (std::getline(csv, line)) last = line;
    CHECK(last.rfind("200,", 0) == 0);
    CHECK(std::abs(std::stod(last.substr(4)) - 0.25) < 1e-6);

    // the bubbly path has a strictly decreasing fundamental share
    std::istringstream fq(slurp(out / "plots" / "start_F_over_q.dat"));
    long t;
    double v, prev = 2;
    int rows = 0;
    while (fq >> t >> v) {
        CHECK(v < prev);
        prev = v;
        ++rows;
    }
    CHECK(rows == 201);

    // every listed file exists with the recorded hash, and the manifest file agrees
    const std::string manifest = slurp(out / "manifest.sha256");
    for (const auto& m : r.manifest) {
        CHECK(sha256_hex(slurp(out / m.path)) == m.sha256);
        CHECK(fs::file_size(out / m.path) == m.bytes);
        CHECK(manifest.find(m.sha256 + "  " + m.path + "\n") != std::string::npos);
    }
    long files = 0;
    for (const auto& f : fs::recursive_directory_iterator(out)) files += f.is_regular_file();
    CHECK(r.manifest.size() == static_cast<size_t>(files - 1));
}

TEST_CASE("deterministic reruns are byte-identical") {
    const auto a = scratch("det-a"), b = scratch("det-b");
    REQUIRE(run_cmd("solve", "claim1-continuum", a).exit_code == 0);
    REQUIRE(run_cmd("solve", "claim1-continuum", b).exit_code == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "manifest.sha256") == slurp(b / "manifest.sha256"));
    CHECK(slurp(a / "report.json").find("generated_at") == std::string::npos);
}

TEST_CASE("pure bubble plots have zero fundamental share") {
    const auto out = scratch("pure");
    REQUIRE(run_cmd("solve", "log-pure-bubble", out).exit_code == 0);
    std::istringstream fq(slurp(out / "plots" / "upper_F_over_q.dat"));
    long t;
    double v;
    int rows = 0;
    while (fq >> t >> v) {
        CHECK(v == 0.0);
        ++rows;
    }
    CHECK(rows > 100);
}

// Near the horizon the fundamental value is a truncated sum, so only the first half is checked here.
TEST_CASE("bubbleless path in the unique regime has a vanishing bubble share") {
    const auto out = scratch("hi");
    const auto r = run_cmd("bubble-test", "high-interest", out);
    REQUIRE(r.exit_code == 0);
    std::istringstream bq(slurp(out / "plots" / "unique_B_over_q.dat"));
    long t;
    double v;
    while (bq >> t >> v)
        if (t <= 100) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("classify on the continuum preset") {
    const auto r = run_cmd("classify", "claim1-continuum", scratch("classify"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["regime"]["regime"] == "Continuum");
}

TEST_CASE("sweep over the explicit-model dividend") {
    const auto out = scratch("sweep");
    const auto r = run_cmd("sweep", "tirole-explicit", out);
    REQUIRE(r.exit_code == 0);
    const auto& pts = r.report["sweep"];
    REQUIRE(pts.size() == 3);
    const double d0[] = {0.05, 0.1, 0.15};
    for (size_t i = 0; i < 3; ++i)
        CHECK(pts[i]["equilibrium_set"]["upper"].get<double>() == doctest::Approx(0.25 + 0.5 * d0[i]).epsilon(1e-6));
}

TEST_CASE("exit codes") {
    CHECK(run_cmd("solve", "claim1-continuum", scratch("ok")).exit_code == 0);
    // sum D_t / R*^t diverges while limsup D_t^(1/t) equals R*: no regime can be assigned
    CHECK(run_cmd("classify", "claim1-continuum", scratch("und"), {"dividends.ratio=0.5"}).exit_code == 2);

    const auto bad_dir = scratch("bad");
    const fs::path file = fs::temp_directory_path() / "olg-test-bad.ini";
    std::ofstream(file) << "[economy]\nn = 1\nbogus = 3\n";
    const auto bad = run_cmd("solve", file.string(), bad_dir);
    CHECK(bad.exit_code == 1);
    CHECK(bad.error.find("line 3") != std::string::npos);
    CHECK(run_cmd("no-such-command", "claim1-continuum", scratch("cmd")).exit_code == 1);
}

#include "catch_amalgamated.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = NADIR_CLI_PATH;

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("nadir_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int sh(const std::string& args) {
    const int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string l;
    std::getline(in, l);
    return l;
}

}  // namespace

TEST_CASE("solve writes trajectory and metrics") {
    const auto d = scratch("solve");
    REQUIRE(sh("solve --preset two_machine --out " + d.string()) == 0);
    CHECK(first_line(d / "trajectory.csv") == "t_s,df_hz,df_pu,dpe_pu,de_pus,dpm_pu");
    const auto j = load(d / "solve.json");
    CHECK(j["trajectory"]["alpha"].get<double>() == Catch::Approx(1.186).margin(0.05));
    CHECK(j["trajectory"]["K"] == 60);

    const auto d30 = scratch("solve30");
    REQUIRE(sh("solve --preset two_machine --nodes 30 --out " + d30.string()) == 0);
    CHECK(load(d30 / "solve.json")["trajectory"]["K"] == 30);
}

TEST_CASE("synthesize reports the gain and factors") {
    const auto d = scratch("synth");
    REQUIRE(sh("synthesize --preset two_machine --out " + d.string()) == 0);
    const auto c = load(d / "controller.json")["controller"];
    CHECK(c["K_w"].get<double>() == Catch::Approx(-14.1).margin(0.5));
    REQUIRE(c["factors"].size() == 1);
    CHECK(c["factors"][0]["c"].get<double>() == 1.0);

    const auto m = scratch("synth_multi");
    REQUIRE(sh("synthesize --preset multi_machine --out " + m.string()) == 0);
    const auto cm = load(m / "controller.json")["controller"];
    CHECK(cm["factors"].size() == 5);
    CHECK(cm["factor_sum"].get<double>() == 1.0);
}

TEST_CASE("simulate, compare and sweep") {
    const auto d = scratch("sim");
    REQUIRE(sh("simulate --preset two_machine --out " + d.string()) == 0);
    CHECK(first_line(d / "trace.csv") == "t_s,df_hz,df_pu,dpm_pu,dpe_pu,pd_pu,WF1_pe_mw,WF1_omega_pu,WF1_de_pus");
    CHECK(load(d / "metrics.json").contains("metrics"));

    const auto c = scratch("cmp");
    REQUIRE(sh("compare --preset two_machine --out " + c.string()) == 0);
    CHECK(load(c / "compare.json")["ordering_optimal_vic_none"] == true);
    for (const char* f : {"compare.csv", "trace_none.csv", "trace_classic_vic.csv", "trace_optimal_aapc.csv"})
        CHECK(fs::exists(c / f));

    const auto s = scratch("sweep");
    REQUIRE(sh("sweep --preset two_machine --out " + s.string()) == 0);
    CHECK(first_line(s / "sweep.csv") == "P_d_pu,nadir_pu,nadir_hz,nadir_ref_pu,e_r_pct,limits_hit");
    const auto j = load(s / "sweep.json");
    CHECK(j["nadir_monotone"] == true);
    CHECK(j["P_d_max_pu"].get<double>() > 0.0);
}

TEST_CASE("outputs are byte-reproducible") {
    const auto a = scratch("rep_a"), b = scratch("rep_b");
    REQUIRE(sh("simulate --preset two_machine --seedless --out " + a.string()) == 0);
    REQUIRE(sh("simulate --preset two_machine --seedless --out " + b.string()) == 0);
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
    CHECK(slurp(a / "metrics.json") == slurp(b / "metrics.json"));
    const auto sa = scratch("rep_sa"), sb = scratch("rep_sb");
    REQUIRE(sh("solve --preset two_machine --out " + sa.string()) == 0);
    REQUIRE(sh("solve --preset two_machine --out " + sb.string()) == 0);
    CHECK(slurp(sa / "solve.json") == slurp(sb / "solve.json"));
}

TEST_CASE("dumped presets run as scenario files") {
    const auto d = scratch("dump");
    const auto file = d / "two.json";
    REQUIRE(sh("--dump-preset two_machine --dump-out " + file.string()) == 0);
    REQUIRE(sh("synthesize --scenario " + file.string() + " --out " + (d / "a").string()) == 0);
    REQUIRE(sh("synthesize --preset two_machine --out " + (d / "b").string()) == 0);
    CHECK(load(d / "a" / "controller.json")["controller"] == load(d / "b" / "controller.json")["controller"]);

    // zero disturbance still solves
    auto doc = load(file);
    doc["solver"]["hypothetical_P_d"] = 0.0;
    std::ofstream(d / "zero.json") << doc.dump(2);
    REQUIRE(sh("solve --scenario " + (d / "zero.json").string() + " --out " + (d / "z").string()) == 0);
    CHECK(load(d / "z" / "solve.json")["trajectory"]["zero_disturbance"] == true);
}

TEST_CASE("exit codes") {
    const auto d = scratch("codes");
    CHECK(sh("solve --preset nowhere --out " + d.string()) == 2);
    CHECK(sh("solve --scenario " + (d / "missing.json").string()) == 2);
    CHECK(sh("frobnicate") == 2);

    auto doc = json::parse(R"({"schema_version": 1})");
    std::ofstream(d / "bad.json") << doc.dump();
    CHECK(sh("simulate --scenario " + (d / "bad.json").string() + " --out " + d.string()) == 2);
    CHECK(sh("--list-presets") == 0);
}

TEST_CASE("centre-of-inertia tool") {
    const auto d = scratch("coi");
    std::ofstream(d / "f.csv") << "time,G1,G2\n0,50,49\n1,49.9,49.5\n";
    std::ofstream(d / "w.json") << R"({"machines": [{"name": "G1", "H": 1, "S": 1}, {"name": "G2", "H": 1, "S": 1}]})";
    REQUIRE(sh("coi --traces " + (d / "f.csv").string() + " --weights " + (d / "w.json").string() + " --out " +
               (d / "coi.csv").string()) == 0);
    const auto text = slurp(d / "coi.csv");
    CHECK(text.find("49.5") != std::string::npos);
    CHECK(text.find("49.7") != std::string::npos);
}

#include "catch_amalgamated.hpp"

#include "nadir/error.hpp"
#include "nadir/presets.hpp"
#include "nadir/scenario.hpp"

#include <algorithm>

using namespace nadir;
using Catch::Approx;
using nlohmann::json;

namespace {

bool mentions(const ValidationError& e, const std::string& what) {
    return std::any_of(e.issues().begin(), e.issues().end(), [&](const std::string& s) { return s.find(what) != std::string::npos; });
}

}  // namespace

TEST_CASE("presets validate and round-trip") {
    for (const auto& name : preset_names()) {
        const auto s = load_preset(name);
        CHECK(validate_scenario(s).empty());
        const auto doc = to_json(s);
        CHECK(parse_scenario(doc) == s);
        CHECK(to_json(parse_scenario(doc)) == doc);
        CHECK(preset_checksum(name) == preset_checksum(name));
    }
    CHECK(preset_checksum("two_machine") != preset_checksum("multi_machine"));
    CHECK_THROWS_WITH(load_preset("nope"), Catch::Matchers::ContainsSubstring("two_machine"));
    CHECK_THROWS_AS(load_preset("nope"), ParameterError);
}

TEST_CASE("two-machine preset data") {
    const auto s = load_preset("two_machine");
    REQUIRE(s.governors.size() == 1);
    const auto& g = s.governors.front().spec;
    CHECK(g.rating_mva == 200.0);
    CHECK(-g.dc_gain() == Approx(17.0));
    CHECK(s.grid.H == 4.2);
    CHECK(s.grid.P_L * s.grid.S_b == Approx(150.0));
    REQUIRE(s.events.size() == 1);
    CHECK(s.events.front().magnitude * s.grid.S_b == Approx(15.0));
    CHECK(s.solver.hypothetical_P_d == Approx(0.1 * s.grid.P_L));
    REQUIRE(s.turbines.size() == 1);
    CHECK(s.turbines.front().spec.N_agg == 20);
    CHECK(s.turbines.front().spec.P_n == 5.0);
}

TEST_CASE("multi-machine preset data") {
    const auto s = load_preset("multi_machine");
    CHECK(s.governors.size() == 10);
    REQUIRE(s.turbines.size() == 5);
    const double v[] = {6.5, 7.5, 8.5, 9.5, 10.5};
    for (int j = 0; j < 5; ++j) {
        CHECK(s.turbines[j].v_w == v[j]);
        CHECK(s.turbines[j].spec.N_agg == 80);
    }
    CHECK(s.aggregate().order() == 10);
}

TEST_CASE("unknown keys and bad values are located") {
    auto doc = to_json(load_preset("two_machine"));
    doc["grid"]["inertia"] = 3.0;
    doc["solver"]["K"] = 0;
    doc["turbines"][0]["v_w"] = -2.0;
    doc["bogus"] = true;
    try {
        parse_scenario(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.issues().size() >= 4);
        CHECK(mentions(e, "/grid/inertia"));
        CHECK(mentions(e, "/solver/K"));
        CHECK(mentions(e, "/turbines/0/v_w"));
        CHECK(mentions(e, "/bogus"));
    }

    auto wrong = to_json(load_preset("two_machine"));
    wrong["schema_version"] = 99;
    CHECK_THROWS_AS(parse_scenario(wrong), ValidationError);

    auto gt = to_json(load_preset("two_machine"));
    gt["governors"][0]["type"] = "diesel";
    CHECK_THROWS_AS(parse_scenario(gt), ValidationError);
}

TEST_CASE("transfer-function governors and turbine presets") {
    json doc = to_json(load_preset("two_machine"));
    doc["governors"] = json::array({json{{"name", "T1"}, {"type", "transfer_function"}, {"rating_mva", 100.0}, {"R", 0.05},
                                         {"num", {-20.0}}, {"den", {2.0, 1.0}}}});
    doc["turbines"][0] = json{{"name", "W"}, {"preset", "dfig5mw"}, {"N_agg", 3}, {"v_w", 9.0}, {"controller", "none"}};
    const auto s = parse_scenario(doc);
    CHECK(s.K_g() == Approx(10.0));
    CHECK(s.turbines[0].spec.J == dfig5mw().J);
    CHECK(s.turbines[0].spec.N_agg == 3);
    CHECK(s.turbines[0].controller == ControllerKind::None);

    doc["turbines"][0]["preset"] = "vestas";
    CHECK_THROWS_AS(parse_scenario(doc), ValidationError);
}

TEST_CASE("checksum is canonical") {
    const json a = json::parse(R"({"b": 1, "a": [1, 2]})");
    const json b = json::parse(R"({"a": [1, 2], "b": 1})");
    CHECK(checksum(a) == checksum(b));
    CHECK(checksum(a).size() == 16);
    CHECK(checksum(a) != checksum(json::parse(R"({"a": [2, 1], "b": 1})")));
}

TEST_CASE("shipped preset files match the built-in catalogue") {
    for (const auto& name : preset_names()) {
        const auto s = load_scenario_file(std::string(NADIR_PRESET_DIR) + "/" + name + ".json");
        CHECK(s == load_preset(name));
    }
}

#include "nadir/presets.hpp"

#include "nadir/error.hpp"

#include <map>

namespace nadir {

namespace {

// 20 x 5 MW fleet against one 200 MVA reheat unit. D and S_b are calibration choices.
const char* kTwoMachine = R"json({
  "schema_version": 1,
  "name": "two_machine",
  "grid": {"H": 4.2, "D": 1.0, "f_B": 50.0, "S_b": 200.0, "P_L": 0.75},
  "governors": [
    {"name": "G1", "rating_mva": 200.0, "type": "reheat_steam",
     "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05}
  ],
  "turbines": [
    {"name": "WF1", "preset": "dfig5mw", "N_agg": 20, "R_t": 45.0, "v_w": 9.0, "beta": 0.0,
     "controller": "optimal_aapc"}
  ],
  "controllers": {"vic": {"k_f": 20.0, "k_in": 10.0, "tau": 0.1}, "allocation": "capability"},
  "events": [
    {"t": 1.0, "kind": "load_surge", "magnitude_pu": 0.075}
  ],
  "solver": {"K": 60, "t_f": 30.0, "hypothetical_P_d": 0.075, "dt": 0.01, "horizon": 240.0},
  "output": {"dir": "out", "formats": ["csv", "json"]}
})json";

// Ten linear governor surrogates on a 1000 MVA base and five aggregated farms.
// H and D are lumped guesses for the whole system; G7 is the unit tripped in the second scenario.
const char* kMultiMachine = R"json({
  "schema_version": 1,
  "name": "multi_machine",
  "grid": {"H": 78.27, "D": 6.15, "f_B": 60.0, "S_b": 1000.0, "P_L": 6.15},
  "governors": [
    {"name": "G1", "rating_mva": 1100.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G2", "rating_mva": 700.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G3", "rating_mva": 800.0, "type": "hydro", "R": 0.05, "r_t": 0.38, "T_R": 5.0},
    {"name": "G4", "rating_mva": 800.0, "type": "gas", "K_m": 0.9, "R": 0.05, "T_g": 1.0},
    {"name": "G5", "rating_mva": 600.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G6", "rating_mva": 800.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G7", "rating_mva": 700.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G8", "rating_mva": 700.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G9", "rating_mva": 1000.0, "type": "reheat_steam", "K_m": 0.85, "F_H": 0.3, "T_R": 8.0, "R": 0.05},
    {"name": "G10", "rating_mva": 1000.0, "type": "hydro", "R": 0.05, "r_t": 0.38, "T_R": 5.0}
  ],
  "turbines": [
    {"name": "WT1", "preset": "dfig5mw", "N_agg": 80, "R_t": 45.0, "v_w": 6.5, "controller": "optimal_aapc"},
    {"name": "WT2", "preset": "dfig5mw", "N_agg": 80, "R_t": 45.0, "v_w": 7.5, "controller": "optimal_aapc"},
    {"name": "WT3", "preset": "dfig5mw", "N_agg": 80, "R_t": 45.0, "v_w": 8.5, "controller": "optimal_aapc"},
    {"name": "WT4", "preset": "dfig5mw", "N_agg": 80, "R_t": 45.0, "v_w": 9.5, "controller": "optimal_aapc"},
    {"name": "WT5", "preset": "dfig5mw", "N_agg": 80, "R_t": 45.0, "v_w": 10.5, "controller": "optimal_aapc"}
  ],
  "controllers": {"vic": {"k_f": 20.0, "k_in": 10.0, "tau": 0.1}, "allocation": "capability"},
  "events": [
    {"t": 1.0, "kind": "load_surge", "magnitude_pu": 0.615}
  ],
  "solver": {"K": 60, "t_f": 30.0, "hypothetical_P_d": 0.615, "dt": 0.01, "horizon": 240.0},
  "output": {"dir": "out", "formats": ["csv", "json"]}
})json";

const std::map<std::string, const char*>& catalog() {
    static const std::map<std::string, const char*> c{{"two_machine", kTwoMachine}, {"multi_machine", kMultiMachine}};
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : catalog()) out.push_back(k);
    return out;
}

nlohmann::json preset_document(const std::string& name) {
    const auto it = catalog().find(name);
    if (it == catalog().end()) {
        std::string list;
        for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
        throw ParameterError("unknown preset '" + name + "'; available: " + list);
    }
    return nlohmann::json::parse(it->second);
}

Scenario load_preset(const std::string& name) {
    return parse_scenario(preset_document(name));
}

std::string preset_checksum(const std::string& name) {
    return checksum(preset_document(name));
}

}  // namespace nadir

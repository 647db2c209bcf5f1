#include "nadir/scenario.hpp"

#include "nadir/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nadir {

using nlohmann::json;

std::string to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::None: return "none";
        case ControllerKind::OptimalAapc: return "optimal_aapc";
        case ControllerKind::ClassicVic: return "classic_vic";
    }
    return "none";
}

std::string to_string(EventKind k) { return k == EventKind::LoadSurge ? "load_surge" : "generation_trip"; }
std::string to_string(AllocationMode m) { return m == AllocationMode::Capability ? "capability" : "uniform"; }

std::vector<GovernorSpec> Scenario::governor_specs() const {
    std::vector<GovernorSpec> out;
    for (const auto& g : governors) out.push_back(g.spec);
    return out;
}

StateSpace Scenario::aggregate() const {
    std::vector<StateSpace> parts;
    for (const auto& g : governors) parts.push_back(governor_realization(g.spec, grid.S_b));
    return aggregate_governors(parts);
}

double Scenario::K_g() const { return governor_dc_gain_total(governor_specs(), grid.S_b); }

namespace {

// Walks a JSON object, recording type errors and unknown keys against a location path.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string>& issues)
        : j_(j), path_(std::move(path)), issues_(issues) {
        if (!j_.is_object()) issues_.push_back(path_ + ": expected an object");
    }

    bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

    double num(const char* key, double def, bool required = false) {
        seen_.insert(key);
        if (!has(key)) {
            if (required) issues_.push_back(at(key) + ": missing required number");
            return def;
        }
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            issues_.push_back(at(key) + ": expected a number");
            return def;
        }
        return v.get<double>();
    }

    int integer(const char* key, int def, bool required = false) {
        seen_.insert(key);
        if (!has(key)) {
            if (required) issues_.push_back(at(key) + ": missing required integer");
            return def;
        }
        const auto& v = j_.at(key);
        if (!v.is_number_integer()) {
            issues_.push_back(at(key) + ": expected an integer");
            return def;
        }
        return v.get<int>();
    }

    std::string str(const char* key, const std::string& def, bool required = false) {
        seen_.insert(key);
        if (!has(key)) {
            if (required) issues_.push_back(at(key) + ": missing required string");
            return def;
        }
        const auto& v = j_.at(key);
        if (!v.is_string()) {
            issues_.push_back(at(key) + ": expected a string");
            return def;
        }
        return v.get<std::string>();
    }

    std::vector<double> nums(const char* key, bool required = false) {
        seen_.insert(key);
        std::vector<double> out;
        if (!has(key)) {
            if (required) issues_.push_back(at(key) + ": missing required array");
            return out;
        }
        const auto& v = j_.at(key);
        if (!v.is_array()) {
            issues_.push_back(at(key) + ": expected an array of numbers");
            return out;
        }
        for (size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                issues_.push_back(at(key) + "/" + std::to_string(i) + ": expected a number");
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::string> strs(const char* key) {
        seen_.insert(key);
        std::vector<std::string> out;
        if (!has(key)) return out;
        const auto& v = j_.at(key);
        if (!v.is_array()) {
            issues_.push_back(at(key) + ": expected an array of strings");
            return out;
        }
        for (size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) {
                issues_.push_back(at(key) + "/" + std::to_string(i) + ": expected a string");
                continue;
            }
            out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    const json* child(const char* key, bool required = false) {
        seen_.insert(key);
        if (!has(key)) {
            if (required) issues_.push_back(at(key) + ": missing required section");
            return nullptr;
        }
        return &j_.at(key);
    }

    void mark(const char* key) { seen_.insert(key); }

    void finish() {
        if (!j_.is_object()) return;
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) issues_.push_back(path_ + "/" + it.key() + ": unknown key");
    }

    std::string at(const char* key) const { return path_ + "/" + key; }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string>& issues_;
    std::set<std::string> seen_;
};

GovernorEntry read_governor(const json& j, const std::string& path, std::vector<std::string>& issues) {
    Reader r(j, path, issues);
    GovernorEntry e;
    e.spec.name = r.str("name", "", true);
    e.spec.rating_mva = r.num("rating_mva", 0.0, true);
    e.kind = r.str("type", "transfer_function", true);
    if (e.kind == "reheat_steam") {
        ReheatSteam p;
        p.K_m = r.num("K_m", p.K_m, true);
        p.F_H = r.num("F_H", p.F_H, true);
        p.T_R = r.num("T_R", p.T_R, true);
        p.R = r.num("R", p.R, true);
        try {
            auto g = reheat_governor(p);
            g.name = e.spec.name;
            g.rating_mva = e.spec.rating_mva;
            e.spec = g;
        } catch (const ParameterError& ex) {
            issues.push_back(path + ": " + ex.what());
        }
    } else if (e.kind == "hydro") {
        HydroTemplate h;
        h.R = r.num("R", h.R, true);
        h.r_t = r.num("r_t", h.r_t, true);
        h.T_R = r.num("T_R", h.T_R, true);
        try {
            auto g = hydro_governor(h.R, h.r_t, h.T_R);
            g.name = e.spec.name;
            g.rating_mva = e.spec.rating_mva;
            e.spec = g;
            e.hydro = h;
        } catch (const ParameterError& ex) {
            issues.push_back(path + ": " + ex.what());
        }
    } else if (e.kind == "gas") {
        GasTemplate h;
        h.K_m = r.num("K_m", h.K_m, true);
        h.R = r.num("R", h.R, true);
        h.T_g = r.num("T_g", h.T_g, true);
        try {
            auto g = gas_governor(h.K_m, h.R, h.T_g);
            g.name = e.spec.name;
            g.rating_mva = e.spec.rating_mva;
            e.spec = g;
            e.gas = h;
        } catch (const ParameterError& ex) {
            issues.push_back(path + ": " + ex.what());
        }
    } else if (e.kind == "transfer_function") {
        e.spec.R = r.num("R", 0.05, true);
        e.spec.num = r.nums("num", true);
        e.spec.den = r.nums("den", true);
    } else {
        issues.push_back(r.at("type") + ": unknown governor type '" + e.kind + "'");
    }
    r.finish();
    return e;
}

ControllerKind read_controller(const std::string& s, const std::string& where, std::vector<std::string>& issues) {
    if (s == "none") return ControllerKind::None;
    if (s == "optimal_aapc") return ControllerKind::OptimalAapc;
    if (s == "classic_vic") return ControllerKind::ClassicVic;
    issues.push_back(where + ": unknown controller '" + s + "'");
    return ControllerKind::None;
}

TurbineEntry read_turbine(const json& j, const std::string& path, std::vector<std::string>& issues) {
    Reader r(j, path, issues);
    TurbineEntry t;
    t.name = r.str("name", "", true);
    const std::string preset = r.str("preset", "");
    if (!preset.empty() && preset != "dfig5mw") issues.push_back(r.at("preset") + ": unknown turbine preset '" + preset + "'");
    auto& s = t.spec;
    s = dfig5mw();
    const bool need = preset.empty();
    s.S_n = r.num("S_n", s.S_n, need);
    s.P_n = r.num("P_n", s.P_n, need);
    s.P_e_max = r.num("P_e_max", s.P_e_max, need);
    s.P_e_min = r.num("P_e_min", s.P_e_min, need);
    s.omega_n_rpm = r.num("omega_n_rpm", s.omega_n_rpm, need);
    s.omega_min_pu = r.num("omega_min_pu", s.omega_min_pu, need);
    s.J = r.num("J", s.J, need);
    s.R_t = r.num("R_t", s.R_t, need);
    s.rho = r.num("rho", s.rho, need);
    s.N_agg = r.integer("N_agg", s.N_agg, true);
    t.v_w = r.num("v_w", t.v_w, true);
    t.beta = r.num("beta", 0.0);
    t.controller = read_controller(r.str("controller", "optimal_aapc"), r.at("controller"), issues);
    r.finish();
    return t;
}

Event read_event(const json& j, const std::string& path, std::vector<std::string>& issues) {
    Reader r(j, path, issues);
    Event e;
    e.t = r.num("t", 0.0, true);
    const std::string k = r.str("kind", "load_surge", true);
    if (k == "load_surge") e.kind = EventKind::LoadSurge;
    else if (k == "generation_trip") e.kind = EventKind::GenerationTrip;
    else issues.push_back(r.at("kind") + ": unknown event kind '" + k + "'");
    e.magnitude = r.num("magnitude_pu", 0.0, true);
    e.unit = r.str("unit", "");
    r.finish();
    return e;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> issues;
    auto guard = [&](const std::string& where, auto&& fn) {
        try {
            fn();
        } catch (const ParameterError& e) {
            issues.push_back(where + ": " + e.what());
        }
    };
    if (s.schema_version != kSchemaVersion)
        issues.push_back("/schema_version: unsupported version " + std::to_string(s.schema_version));
    guard("/grid", [&] { s.grid.validate(); });
    std::set<std::string> gov_names;
    for (size_t i = 0; i < s.governors.size(); ++i) {
        const std::string where = "/governors/" + std::to_string(i);
        guard(where, [&] { s.governors[i].spec.validate(); });
        if (!gov_names.insert(s.governors[i].spec.name).second) issues.push_back(where + "/name: duplicate governor name");
    }
    std::set<std::string> wt_names;
    for (size_t i = 0; i < s.turbines.size(); ++i) {
        const auto& t = s.turbines[i];
        const std::string where = "/turbines/" + std::to_string(i);
        guard(where, [&] { t.spec.validate(); });
        if (!wt_names.insert(t.name).second) issues.push_back(where + "/name: duplicate turbine name");
        if (!(t.v_w > 0)) issues.push_back(where + "/v_w: wind speed must be positive");
        if (t.beta < 0) issues.push_back(where + "/beta: pitch must be non-negative");
        if (t.v_w > 0 && t.beta >= 0 && t.spec.R_t > 0 && t.spec.omega_n_rpm > 0) {
            guard(where, [&] {
                const auto eq = mppt_equilibrium(t.spec, t.v_w, t.beta);
                if (eq.omega < t.spec.omega_min())
                    issues.push_back(where + "/v_w: MPPT speed lies below the rotor speed floor");
            });
        }
    }
    double last = -1e300;
    for (size_t i = 0; i < s.events.size(); ++i) {
        const auto& e = s.events[i];
        const std::string where = "/events/" + std::to_string(i);
        if (e.t < 0) issues.push_back(where + "/t: event time must be non-negative");
        if (e.t < last) issues.push_back(where + "/t: events must be sorted by time");
        last = e.t;
        if (e.magnitude < 0) issues.push_back(where + "/magnitude_pu: must be non-negative");
        if (!e.unit.empty()) {
            if (e.kind != EventKind::GenerationTrip) issues.push_back(where + "/unit: only generation trips name a unit");
            else if (!gov_names.count(e.unit)) issues.push_back(where + "/unit: no governor named '" + e.unit + "'");
        }
        if (e.t > s.solver.horizon) issues.push_back(where + "/t: event after the simulation horizon");
    }
    const auto& sv = s.solver;
    if (sv.K < 10) issues.push_back("/solver/K: at least 10 nodes are required");
    if (!(sv.t_f > 0)) issues.push_back("/solver/t_f: must be positive");
    if (!(sv.hypothetical_P_d >= 0)) issues.push_back("/solver/hypothetical_P_d: must be non-negative");
    if (!(sv.dt > 0 && sv.dt <= 0.02)) issues.push_back("/solver/dt: step must lie in (0, 0.02] s");
    if (!(sv.horizon >= sv.t_f)) issues.push_back("/solver/horizon: must be at least t_f");
    const auto& c = s.controllers;
    if (c.vic.k_f < 0 || c.vic.k_in < 0) issues.push_back("/controllers/vic: gains must be non-negative");
    if (!(c.vic.tau > 0)) issues.push_back("/controllers/vic/tau: must be positive");
    if (c.alpha && !(*c.alpha >= 1.0)) issues.push_back("/controllers/alpha: must be at least 1");
    if (!c.allocation_override.empty()) {
        if (c.allocation_override.size() != s.turbines.size())
            issues.push_back("/controllers/allocation_override: one factor per turbine required");
        double sum = 0.0;
        for (double v : c.allocation_override) {
            if (v < 0 || v > 1) issues.push_back("/controllers/allocation_override: factors must lie in [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) issues.push_back("/controllers/allocation_override: factors must sum to 1");
    }
    for (size_t i = 0; i < s.output.formats.size(); ++i) {
        const auto& f = s.output.formats[i];
        if (f != "csv" && f != "json") issues.push_back("/output/formats/" + std::to_string(i) + ": unknown format '" + f + "'");
    }
    return issues;
}

Scenario parse_scenario(const json& doc) {
    std::vector<std::string> issues;
    Scenario s;
    Reader top(doc, "", issues);
    if (!doc.is_object()) throw ValidationError(issues);
    s.schema_version = top.integer("schema_version", kSchemaVersion, true);
    s.name = top.str("name", "");
    if (const json* g = top.child("grid", true)) {
        Reader r(*g, "/grid", issues);
        s.grid.H = r.num("H", 0.0, true);
        s.grid.D = r.num("D", 0.0, true);
        s.grid.f_B = r.num("f_B", 50.0, true);
        s.grid.S_b = r.num("S_b", 0.0, true);
        s.grid.P_L = r.num("P_L", 0.0, true);
        r.finish();
    }
    if (const json* g = top.child("governors")) {
        if (!g->is_array()) issues.push_back("/governors: expected an array");
        else
            for (size_t i = 0; i < g->size(); ++i)
                s.governors.push_back(read_governor((*g)[i], "/governors/" + std::to_string(i), issues));
    }
    if (const json* t = top.child("turbines")) {
        if (!t->is_array()) issues.push_back("/turbines: expected an array");
        else
            for (size_t i = 0; i < t->size(); ++i)
                s.turbines.push_back(read_turbine((*t)[i], "/turbines/" + std::to_string(i), issues));
    }
    if (const json* c = top.child("controllers")) {
        Reader r(*c, "/controllers", issues);
        if (const json* v = r.child("vic")) {
            Reader rv(*v, "/controllers/vic", issues);
            s.controllers.vic.k_f = rv.num("k_f", s.controllers.vic.k_f);
            s.controllers.vic.k_in = rv.num("k_in", s.controllers.vic.k_in);
            s.controllers.vic.tau = rv.num("tau", s.controllers.vic.tau);
            rv.finish();
        }
        const std::string a = r.str("allocation", "capability");
        if (a == "capability") s.controllers.allocation = AllocationMode::Capability;
        else if (a == "uniform") s.controllers.allocation = AllocationMode::Uniform;
        else issues.push_back("/controllers/allocation: unknown allocation '" + a + "'");
        s.controllers.allocation_override = r.nums("allocation_override");
        if (r.has("alpha")) s.controllers.alpha = r.num("alpha", 1.0);
        r.finish();
    }
    if (const json* e = top.child("events")) {
        if (!e->is_array()) issues.push_back("/events: expected an array");
        else
            for (size_t i = 0; i < e->size(); ++i)
                s.events.push_back(read_event((*e)[i], "/events/" + std::to_string(i), issues));
    }
    if (const json* v = top.child("solver")) {
        Reader r(*v, "/solver", issues);
        s.solver.K = r.integer("K", s.solver.K);
        s.solver.t_f = r.num("t_f", s.solver.t_f);
        s.solver.hypothetical_P_d = r.num("hypothetical_P_d", 0.1 * s.grid.P_L);
        s.solver.dt = r.num("dt", s.solver.dt);
        s.solver.horizon = r.num("horizon", s.solver.horizon);
        r.finish();
    } else {
        s.solver.hypothetical_P_d = 0.1 * s.grid.P_L;
    }
    if (const json* o = top.child("output")) {
        Reader r(*o, "/output", issues);
        s.output.dir = r.str("dir", s.output.dir);
        if (r.has("formats")) s.output.formats = r.strs("formats");
        else r.mark("formats");
        r.finish();
    }
    top.finish();
    // semantic checks too, skipping locations that already failed to read
    const auto structural = issues;
    for (auto& m : validate_scenario(s)) {
        const std::string where = m.substr(0, m.find(':'));
        const bool seen = std::any_of(structural.begin(), structural.end(), [&](const std::string& x) {
            return x.compare(0, where.size(), where) == 0;
        });
        if (!seen) issues.push_back(std::move(m));
    }
    if (!issues.empty()) throw ValidationError(issues);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({path + ": cannot open scenario file"});
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError({path + ": " + e.what()});
    }
    return parse_scenario(doc);
}

json to_json(const Scenario& s) {
    json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["grid"] = {{"H", s.grid.H}, {"D", s.grid.D}, {"f_B", s.grid.f_B}, {"S_b", s.grid.S_b}, {"P_L", s.grid.P_L}};
    json govs = json::array();
    for (const auto& g : s.governors) {
        json e = {{"name", g.spec.name}, {"rating_mva", g.spec.rating_mva}, {"type", g.kind}};
        if (g.kind == "reheat_steam" && g.spec.reheat) {
            const auto& p = *g.spec.reheat;
            e["K_m"] = p.K_m;
            e["F_H"] = p.F_H;
            e["T_R"] = p.T_R;
            e["R"] = p.R;
        } else if (g.kind == "hydro" && g.hydro) {
            e["R"] = g.hydro->R;
            e["r_t"] = g.hydro->r_t;
            e["T_R"] = g.hydro->T_R;
        } else if (g.kind == "gas" && g.gas) {
            e["K_m"] = g.gas->K_m;
            e["R"] = g.gas->R;
            e["T_g"] = g.gas->T_g;
        } else {
            e["type"] = "transfer_function";
            e["R"] = g.spec.R;
            e["num"] = g.spec.num;
            e["den"] = g.spec.den;
        }
        govs.push_back(e);
    }
    j["governors"] = govs;
    json wts = json::array();
    for (const auto& t : s.turbines) {
        const auto& p = t.spec;
        wts.push_back({{"name", t.name},
                       {"S_n", p.S_n},
                       {"P_n", p.P_n},
                       {"P_e_max", p.P_e_max},
                       {"P_e_min", p.P_e_min},
                       {"omega_n_rpm", p.omega_n_rpm},
                       {"omega_min_pu", p.omega_min_pu},
                       {"J", p.J},
                       {"R_t", p.R_t},
                       {"rho", p.rho},
                       {"N_agg", p.N_agg},
                       {"v_w", t.v_w},
                       {"beta", t.beta},
                       {"controller", to_string(t.controller)}});
    }
    j["turbines"] = wts;
    json c = {{"vic", {{"k_f", s.controllers.vic.k_f}, {"k_in", s.controllers.vic.k_in}, {"tau", s.controllers.vic.tau}}},
              {"allocation", to_string(s.controllers.allocation)}};
    if (!s.controllers.allocation_override.empty()) c["allocation_override"] = s.controllers.allocation_override;
    if (s.controllers.alpha) c["alpha"] = *s.controllers.alpha;
    j["controllers"] = c;
    json ev = json::array();
    for (const auto& e : s.events) {
        json x = {{"t", e.t}, {"kind", to_string(e.kind)}, {"magnitude_pu", e.magnitude}};
        if (!e.unit.empty()) x["unit"] = e.unit;
        ev.push_back(x);
    }
    j["events"] = ev;
    j["solver"] = {{"K", s.solver.K},
                   {"t_f", s.solver.t_f},
                   {"hypothetical_P_d", s.solver.hypothetical_P_d},
                   {"dt", s.solver.dt},
                   {"horizon", s.solver.horizon}};
    j["output"] = {{"dir", s.output.dir}, {"formats", s.output.formats}};
    return j;
}

std::string checksum(const json& doc) {
    const std::string text = doc.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nadir

#pragma once

#include "nadir/grid.hpp"
#include "nadir/turbine.hpp"

#include "json.hpp"
#include <optional>
#include <string>
#include <vector>

namespace nadir {

inline constexpr int kSchemaVersion = 1;

enum class ControllerKind { None, OptimalAapc, ClassicVic };
enum class EventKind { LoadSurge, GenerationTrip };
enum class AllocationMode { Capability, Uniform };

std::string to_string(ControllerKind k);
std::string to_string(EventKind k);
std::string to_string(AllocationMode m);

struct HydroTemplate {
    double R = 0.05, r_t = 0.38, T_R = 5.0;
    bool operator==(const HydroTemplate&) const = default;
};
struct GasTemplate {
    double K_m = 1.0, R = 0.05, T_g = 1.0;
    bool operator==(const GasTemplate&) const = default;
};

struct GovernorEntry {
    GovernorSpec spec;
    std::string kind = "transfer_function";  // reheat_steam | hydro | gas | transfer_function
    std::optional<HydroTemplate> hydro;
    std::optional<GasTemplate> gas;
    bool operator==(const GovernorEntry&) const = default;
};

struct TurbineEntry {
    std::string name;
    TurbineSpec spec;
    double v_w = 9.0;
    double beta = 0.0;
    ControllerKind controller = ControllerKind::OptimalAapc;
    bool operator==(const TurbineEntry&) const = default;
};

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::LoadSurge;
    double magnitude = 0.0;  // pu on S_b
    std::string unit;        // governor tripped with the infeed; empty for a non-regulating source
    bool operator==(const Event&) const = default;
};

struct VicSettings {
    double k_f = 20.0;
    double k_in = 10.0;
    double tau = 0.1;
    bool operator==(const VicSettings&) const = default;
};

struct ControllerSettings {
    VicSettings vic;
    AllocationMode allocation = AllocationMode::Capability;
    std::vector<double> allocation_override;
    std::optional<double> alpha;  // skip the trajectory solve when given
    bool operator==(const ControllerSettings&) const = default;
};

struct SolverSettings {
    int K = 60;
    double t_f = 30.0;
    double hypothetical_P_d = 0.075;
    double dt = 0.01;
    double horizon = 240.0;
    bool operator==(const SolverSettings&) const = default;
};

struct OutputSettings {
    std::string dir = "out";
    std::vector<std::string> formats{"csv", "json"};
    bool operator==(const OutputSettings&) const = default;
};

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string name;
    GridParameters grid;
    std::vector<GovernorEntry> governors;
    std::vector<TurbineEntry> turbines;
    ControllerSettings controllers;
    std::vector<Event> events;
    SolverSettings solver;
    OutputSettings output;

    std::vector<GovernorSpec> governor_specs() const;
    StateSpace aggregate() const;  // per unit on S_b
    double K_g() const;
    bool operator==(const Scenario&) const = default;
};

// Parses and validates; throws ValidationError listing every problem with its JSON location.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);
nlohmann::json to_json(const Scenario& s);
std::vector<std::string> validate_scenario(const Scenario& s);

// 64-bit FNV-1a over the canonical serialisation, as hex.
std::string checksum(const nlohmann::json& doc);

}  // namespace nadir

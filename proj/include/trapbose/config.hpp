#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trapbose/errors.hpp"
#include "trapbose/potential.hpp"

namespace trapbose {

enum class Command { solve, sweep, converge };

std::string command_name(Command c);

struct TrapConfig {
    bool oscillator_units = true;
    double mass = 2.0;       // total mass of the pair when given explicitly
    double frequency = 1.0;
};

struct BasisConfig {
    int l = 0;
    int size = 20;
    int order = 0;  // 0 = defaulted to size + margin
};

struct SolveConfig {
    int levels = 1;
    int wavefunctions = 0;
    int grid_points = 600;
    double grid_rmax = 8.0;  // in units of the trap length b
};

struct SweepConfig {
    std::string variable;        // g | sigma | V0 | a | N
    std::vector<double> values;  // strictly monotone; integral when variable = N
    int levels = 1;
};

struct ConvergeConfig {
    std::vector<int> ladder;
    double epsilon = 1e-8;  // in hbar omega
    int levels = 1;
};

struct OutputConfig {
    std::string directory = ".";
    std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
    TrapConfig trap;
    BasisConfig basis;
    Potential potential = Potential::zero();
    SolveConfig solve;
    SweepConfig sweep;
    ConvergeConfig converge;
    OutputConfig output;

    bool wants(const std::string& format) const;
};

// Reads either the sectioned key=value text format or a JSON mirror of it; a
// run.json produced by a previous run is accepted as-is (its "config" object
// is used), which makes every run replayable from its own artifacts.
RunConfig load_config(const std::filesystem::path& path);

// Full validation for one command; throws ConfigError naming section and key.
void validate(const RunConfig& cfg, Command cmd);

// JSON mirror of the resolved configuration (the round-trippable echo).
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

} // namespace trapbose

#include "trapbose/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "trapbose/format.hpp"

namespace trapbose {

std::string command_name(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::sweep: return "sweep";
        case Command::converge: return "converge";
    }
    return "?";
}

bool RunConfig::wants(const std::string& format) const {
    return std::find(output.formats.begin(), output.formats.end(), format) !=
           output.formats.end();
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double parse_double(const std::string& sec, const std::string& key, const std::string& v) {
    if (v.empty()) throw ConfigError(sec, key, "empty value");
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw ConfigError(sec, key, "not a number: '" + v + "'");
    return x;
}

int parse_int(const std::string& sec, const std::string& key, const std::string& v) {
    if (v.empty()) throw ConfigError(sec, key, "empty value");
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size())
        throw ConfigError(sec, key, "not an integer: '" + v + "'");
    if (x < -1000000000L || x > 1000000000L)
        throw ConfigError(sec, key, "integer out of range: '" + v + "'");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& sec, const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(sec, key, "not a boolean: '" + v + "'");
}

// "a,b,c" or "start:stop:count" (inclusive linear grid)
std::vector<double> parse_grid(const std::string& sec, const std::string& key,
                               const std::string& v) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3)
            throw ConfigError(sec, key, "grid syntax is start:stop:count, got '" + v + "'");
        const double start = parse_double(sec, key, parts[0]);
        const double stop = parse_double(sec, key, parts[1]);
        const int count = parse_int(sec, key, parts[2]);
        if (count < 1) throw ConfigError(sec, key, "grid count must be >= 1");
        if (count == 1 && start != stop)
            throw ConfigError(sec, key, "grid count 1 requires start == stop");
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
        return out;
    }
    for (const auto& item : split(v, ','))
        out.push_back(parse_double(sec, key, item));
    return out;
}

struct Parser {
    RunConfig cfg;
    std::set<std::string> seen;
    // potential keys remembered so shapes can reject parameters that are not theirs
    std::set<std::string> potential_keys;
    std::string shape_value;

    void mark(const std::string& sec, const std::string& key) {
        if (!seen.insert(sec + "." + key).second)
            throw ConfigError(sec, key, "duplicate key");
    }

    void set(const std::string& sec, const std::string& key, const std::string& v) {
        mark(sec, key);
        if (sec == "trap") {
            if (key == "oscillator_units") cfg.trap.oscillator_units = parse_bool(sec, key, v);
            else if (key == "mass") cfg.trap.mass = parse_double(sec, key, v);
            else if (key == "frequency") cfg.trap.frequency = parse_double(sec, key, v);
            else throw ConfigError(sec, key, "unknown key");
        } else if (sec == "basis") {
            if (key == "l") cfg.basis.l = parse_int(sec, key, v);
            else if (key == "size") cfg.basis.size = parse_int(sec, key, v);
            else if (key == "order") cfg.basis.order = parse_int(sec, key, v);
            else throw ConfigError(sec, key, "unknown key");
        } else if (sec == "potential") {
            if (key == "shape") shape_value = v;
            else if (key == "strength") cfg.potential.strength = parse_double(sec, key, v);
            else if (key == "range") cfg.potential.range = parse_double(sec, key, v);
            else if (key == "depth") cfg.potential.depth = parse_double(sec, key, v);
            else if (key == "radius") cfg.potential.radius = parse_double(sec, key, v);
            else if (key == "coupling") cfg.potential.coupling = parse_double(sec, key, v);
            else if (key == "scattering_length")
                cfg.potential.scattering_length = parse_double(sec, key, v);
            else throw ConfigError(sec, key, "unknown key");
            potential_keys.insert(key);
        } else if (sec == "solve") {
            if (key == "levels") cfg.solve.levels = parse_int(sec, key, v);
            else if (key == "wavefunctions") cfg.solve.wavefunctions = parse_int(sec, key, v);
            else if (key == "grid_points") cfg.solve.grid_points = parse_int(sec, key, v);
            else if (key == "grid_rmax") cfg.solve.grid_rmax = parse_double(sec, key, v);
            else throw ConfigError(sec, key, "unknown key");
        } else if (sec == "sweep") {
            if (key == "variable") cfg.sweep.variable = v;
            else if (key == "values") cfg.sweep.values = parse_grid(sec, key, v);
            else if (key == "levels") cfg.sweep.levels = parse_int(sec, key, v);
            else throw ConfigError(sec, key, "unknown key");
        } else if (sec == "converge") {
            if (key == "ladder") {
                for (const auto& item : split(v, ','))
                    cfg.converge.ladder.push_back(parse_int(sec, key, item));
            } else if (key == "epsilon") {
                cfg.converge.epsilon = parse_double(sec, key, v);
            } else if (key == "levels") {
                cfg.converge.levels = parse_int(sec, key, v);
            } else {
                throw ConfigError(sec, key, "unknown key");
            }
        } else if (sec == "output") {
            if (key == "directory") {
                if (v.empty()) throw ConfigError(sec, key, "empty directory");
                cfg.output.directory = v;
            } else if (key == "formats") {
                cfg.output.formats.clear();
                for (const auto& item : split(v, ','))
                    if (!item.empty()) cfg.output.formats.push_back(item);
            } else {
                throw ConfigError(sec, key, "unknown key");
            }
        } else {
            throw ConfigError(sec, key, "unknown section [" + sec + "]");
        }
    }

    void finish() {
        if (!shape_value.empty()) {
            if (shape_value == "gaussian") cfg.potential.shape = PotentialShape::gaussian;
            else if (shape_value == "square_well") cfg.potential.shape = PotentialShape::square_well;
            else if (shape_value == "contact") cfg.potential.shape = PotentialShape::contact;
            else if (shape_value == "zero") cfg.potential = Potential::zero();
            else throw ConfigError("potential", "shape", "unknown shape '" + shape_value +
                                   "' (gaussian | square_well | contact | zero)");
        } else if (!potential_keys.empty()) {
            throw ConfigError("potential", "shape", "required when a potential block is present");
        }
        static const std::map<PotentialShape, std::set<std::string>> allowed = {
            {PotentialShape::gaussian, {"shape", "strength", "range", "scattering_length"}},
            {PotentialShape::square_well, {"shape", "depth", "radius", "scattering_length"}},
            {PotentialShape::contact, {"shape", "coupling", "scattering_length"}},
        };
        if (shape_value != "zero" && !potential_keys.empty()) {
            const auto& ok = allowed.at(cfg.potential.shape);
            for (const auto& k : potential_keys)
                if (!ok.count(k))
                    throw ConfigError("potential", k,
                                      "does not apply to shape '" + shape_value + "'");
        } else if (shape_value == "zero") {
            for (const auto& k : potential_keys)
                if (k != "shape")
                    throw ConfigError("potential", k, "does not apply to shape 'zero'");
        }
        if (cfg.trap.oscillator_units &&
            (seen.count("trap.mass") || seen.count("trap.frequency")))
            throw ConfigError("trap", "mass",
                              "mass/frequency conflict with oscillator_units = true");
    }
};

void parse_text(Parser& p, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any [section]");
        p.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::string json_scalar(const std::string& sec, const std::string& key,
                        const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return fmt17(v.get<double>());
    throw ConfigError(sec, key, "unsupported JSON value type");
}

void parse_json(Parser& p, const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("config JSON root must be an object");
    const nlohmann::json& cfg = root.contains("config") ? root.at("config") : root;
    if (!cfg.is_object()) throw ConfigError("\"config\" must be an object");
    const bool wrapped = root.contains("config");
    if (!wrapped) {
        static const std::set<std::string> sections = {"trap", "basis", "potential",
                                                       "solve", "sweep", "converge", "output"};
        for (const auto& [key, _] : root.items())
            if (!sections.count(key))
                throw ConfigError(key, "-", "unknown section [" + key + "]");
    }
    for (const auto& [sec, block] : cfg.items()) {
        if (!block.is_object())
            throw ConfigError(sec, "-", "section must be a JSON object");
        for (const auto& [key, v] : block.items()) {
            if (v.is_array()) {
                std::string joined;
                for (const auto& item : v) {
                    if (!joined.empty()) joined += ',';
                    joined += json_scalar(sec, key, item);
                }
                p.set(sec, key, joined);
            } else {
                p.set(sec, key, json_scalar(sec, key, v));
            }
        }
    }
}

} // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    Parser p;
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json root;
        try {
            root = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config JSON parse failure: ") + e.what());
        }
        parse_json(p, root);
    } else {
        parse_text(p, text);
    }
    p.finish();
    return p.cfg;
}

namespace {

void check_positive(const std::string& sec, const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(sec, key, "must be positive, got " + fmt17(v));
}

void validate_contact_channel(const RunConfig& cfg) {
    if (cfg.potential.shape == PotentialShape::contact && cfg.basis.l != 0)
        throw ConfigError("basis", "l",
                          "contact potential has matrix elements only in the l = 0 channel");
}

} // namespace

void validate(const RunConfig& cfg, Command cmd) {
    if (!cfg.trap.oscillator_units) {
        check_positive("trap", "mass", cfg.trap.mass);
        check_positive("trap", "frequency", cfg.trap.frequency);
    }
    if (cfg.basis.l < 0) throw ConfigError("basis", "l", "must be >= 0");
    if (cfg.basis.size < 1) throw ConfigError("basis", "size", "must be >= 1");
    if (cfg.basis.order != 0 && cfg.basis.order < cfg.basis.size)
        throw ConfigError("basis", "order", "must be >= size (or 0 for the default)");
    try {
        cfg.potential.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("potential", cfg.potential.shape_name(), e.what());
    }
    for (const auto& f : cfg.output.formats)
        if (f != "csv" && f != "json" && f != "svg")
            throw ConfigError("output", "formats",
                              "unknown format '" + f + "' (csv | json | svg)");
    if (cfg.output.formats.empty())
        throw ConfigError("output", "formats", "at least one format required");

    if (cmd == Command::solve) {
        validate_contact_channel(cfg);
        if (cfg.solve.levels < 1 || cfg.solve.levels > cfg.basis.size)
            throw ConfigError("solve", "levels", "must lie in [1, basis size]");
        if (cfg.solve.wavefunctions < 0 || cfg.solve.wavefunctions > cfg.solve.levels)
            throw ConfigError("solve", "wavefunctions", "must lie in [0, levels]");
        if (cfg.solve.grid_points < 2)
            throw ConfigError("solve", "grid_points", "must be >= 2");
        check_positive("solve", "grid_rmax", cfg.solve.grid_rmax);
    } else if (cmd == Command::sweep) {
        validate_contact_channel(cfg);
        const std::string& var = cfg.sweep.variable;
        if (var.empty()) throw ConfigError("sweep", "variable", "required (g | sigma | V0 | a | N)");
        const bool is_n = var == "N";
        if (var == "g" || var == "sigma") {
            if (cfg.potential.shape != PotentialShape::gaussian)
                throw ConfigError("sweep", "variable",
                                  "'" + var + "' requires a gaussian potential");
        } else if (var == "V0" || var == "a") {
            if (cfg.potential.shape != PotentialShape::square_well)
                throw ConfigError("sweep", "variable",
                                  "'" + var + "' requires a square_well potential");
        } else if (!is_n) {
            throw ConfigError("sweep", "variable",
                              "unknown variable '" + var + "' (g | sigma | V0 | a | N)");
        }
        if (cfg.sweep.values.empty())
            throw ConfigError("sweep", "values", "non-empty grid required");
        bool inc = true, dec = true;
        for (size_t i = 1; i < cfg.sweep.values.size(); ++i) {
            if (!(cfg.sweep.values[i] > cfg.sweep.values[i - 1])) inc = false;
            if (!(cfg.sweep.values[i] < cfg.sweep.values[i - 1])) dec = false;
        }
        if (cfg.sweep.values.size() > 1 && !inc && !dec)
            throw ConfigError("sweep", "values", "grid must be strictly monotone");
        if (cfg.sweep.levels < 1)
            throw ConfigError("sweep", "levels", "must be >= 1");
        int min_n = cfg.basis.size;
        for (double v : cfg.sweep.values) {
            if (is_n) {
                if (v != std::floor(v) || v < 1.0)
                    throw ConfigError("sweep", "values",
                                      "N grid entries must be integers >= 1, got " + fmt17(v));
                min_n = std::min(min_n, static_cast<int>(v));
            } else if ((var == "sigma" || var == "a") && !(v > 0.0)) {
                throw ConfigError("sweep", "values",
                                  "'" + var + "' grid entries must be positive, got " + fmt17(v));
            }
        }
        if (cfg.sweep.levels > min_n)
            throw ConfigError("sweep", "levels",
                              "exceeds the smallest basis size in the sweep");
    } else if (cmd == Command::converge) {
        validate_contact_channel(cfg);
        if (cfg.converge.ladder.empty())
            throw ConfigError("converge", "ladder", "non-empty ascending N ladder required");
        for (size_t i = 0; i < cfg.converge.ladder.size(); ++i) {
            if (cfg.converge.ladder[i] < 1)
                throw ConfigError("converge", "ladder", "entries must be >= 1");
            if (i > 0 && cfg.converge.ladder[i] <= cfg.converge.ladder[i - 1])
                throw ConfigError("converge", "ladder", "must be strictly ascending");
        }
        check_positive("converge", "epsilon", cfg.converge.epsilon);
        if (cfg.converge.levels < 1 || cfg.converge.levels > cfg.converge.ladder.front())
            throw ConfigError("converge", "levels", "must lie in [1, smallest ladder rung]");
    }
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["trap"]["oscillator_units"] = cfg.trap.oscillator_units;
    if (!cfg.trap.oscillator_units) {
        j["trap"]["mass"] = cfg.trap.mass;
        j["trap"]["frequency"] = cfg.trap.frequency;
    }
    j["basis"] = {{"l", cfg.basis.l}, {"size", cfg.basis.size}, {"order", cfg.basis.order}};
    nlohmann::ordered_json pot;
    if (cfg.potential.is_zero() && cfg.potential.shape == PotentialShape::gaussian &&
        cfg.potential.strength == 0.0) {
        pot["shape"] = "zero";
    } else {
        pot["shape"] = cfg.potential.shape_name();
        switch (cfg.potential.shape) {
            case PotentialShape::gaussian:
                pot["strength"] = cfg.potential.strength;
                pot["range"] = cfg.potential.range;
                break;
            case PotentialShape::square_well:
                pot["depth"] = cfg.potential.depth;
                pot["radius"] = cfg.potential.radius;
                break;
            case PotentialShape::contact:
                pot["coupling"] = cfg.potential.coupling;
                break;
        }
    }
    if (cfg.potential.scattering_length)
        pot["scattering_length"] = *cfg.potential.scattering_length;
    j["potential"] = pot;
    j["solve"] = {{"levels", cfg.solve.levels},
                  {"wavefunctions", cfg.solve.wavefunctions},
                  {"grid_points", cfg.solve.grid_points},
                  {"grid_rmax", cfg.solve.grid_rmax}};
    if (!cfg.sweep.variable.empty()) {
        j["sweep"] = {{"variable", cfg.sweep.variable},
                      {"values", cfg.sweep.values},
                      {"levels", cfg.sweep.levels}};
    }
    if (!cfg.converge.ladder.empty()) {
        j["converge"] = {{"ladder", cfg.converge.ladder},
                         {"epsilon", cfg.converge.epsilon},
                         {"levels", cfg.converge.levels}};
    }
    j["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
    return j;
}

} // namespace trapbose

#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gamow/error.hpp"
#include "gamow/initial_state.hpp"
#include "gamow/potential.hpp"

namespace gamow {

enum class Output { poles, sumrule, survival, decompose, tail, oracle, sweep, initial_states };

inline std::string to_string(Output o) {
    switch (o) {
        case Output::poles: return "poles";
        case Output::sumrule: return "sumrule";
        case Output::survival: return "survival";
        case Output::decompose: return "decompose";
        case Output::tail: return "tail";
        case Output::oracle: return "oracle";
        case Output::sweep: return "sweep";
        case Output::initial_states: return "initial_states";
    }
    return "?";
}

struct OracleSettings {
    double margin_factor = 12.0;  // D / L
    double dx = 0.005;
    double dt = 0.02;
    double absorber_strength = 1.0;
    double t_first = 0.1;  // lifetimes
    double t_last = 10.0;
    int points = 41;
};

struct SweepSettings {
    double w_first = 0.0;
    double w_last = 0.0;
    int steps = 0;
};

/// Everything one run needs. Lengths in nm, energies in eV, times in lifetimes
/// unless a key says otherwise.
struct ScenarioConfig {
    std::string name = "scenario";
    DoubleBarrierSpec geometry{};
    double effective_mass = 0.0;
    InitialStateKind initial_state = InitialStateKind::box_eigenstate;
    int pole_count = 10;
    double grid_density = 40.0;
    double t_first = 1e-3;
    double t_last = 1e3;
    int points_per_decade = 200;
    std::set<Output> outputs{Output::poles, Output::sumrule, Output::survival, Output::decompose, Output::tail};
    std::filesystem::path output_dir;
    OracleSettings oracle{};
    SweepSettings sweep{};

    bool wants(Output o) const { return outputs.contains(o); }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
    if (used != v.size() || !std::isfinite(d)) throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    return d;
}

inline int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return out;
}

inline InitialStateKind parse_kind(const std::string& v) {
    if (v == "box") return InitialStateKind::box_eigenstate;
    if (v == "resonance") return InitialStateKind::resonance_function;
    throw ConfigError("initial_state must be 'box' or 'resonance', got '" + v + "'");
}

inline std::set<Output> parse_outputs(const std::string& v) {
    static const std::map<std::string, Output> names{
        {"poles", Output::poles},   {"sumrule", Output::sumrule}, {"survival", Output::survival},
        {"decompose", Output::decompose}, {"tail", Output::tail}, {"oracle", Output::oracle},
        {"sweep", Output::sweep},   {"initial_states", Output::initial_states}};
    std::set<Output> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto it = names.find(item);
        if (it == names.end()) throw ConfigError("unknown output '" + item + "'");
        out.insert(it->second);
    }
    if (out.empty()) throw ConfigError("outputs list is empty");
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& required_config_keys() {
    static const std::vector<std::string> keys{"barrier_width", "well_width", "barrier_height", "effective_mass",
                                               "output_dir"};
    return keys;
}

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated keys
/// and missing required keys are errors.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig c;
    std::set<std::string> seen;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(number) + ": empty key or value");
        if (!seen.insert(key).second) throw ConfigError("key '" + key + "' given twice");

        auto num = [&] { return detail::parse_double(key, value); };
        auto integer = [&] { return detail::parse_int(key, value); };
        if (key == "name") c.name = value;
        else if (key == "barrier_width") c.geometry.barrier_width = num();
        else if (key == "well_width") c.geometry.well_width = num();
        else if (key == "barrier_height") c.geometry.barrier_height = num();
        else if (key == "effective_mass") c.effective_mass = num();
        else if (key == "initial_state") c.initial_state = detail::parse_kind(value);
        else if (key == "poles") c.pole_count = integer();
        else if (key == "grid_density") c.grid_density = num();
        else if (key == "t_first") c.t_first = num();
        else if (key == "t_last") c.t_last = num();
        else if (key == "points_per_decade") c.points_per_decade = integer();
        else if (key == "outputs") c.outputs = detail::parse_outputs(value);
        else if (key == "output_dir") c.output_dir = value;
        else if (key == "oracle_margin_factor") c.oracle.margin_factor = num();
        else if (key == "oracle_dx") c.oracle.dx = num();
        else if (key == "oracle_dt") c.oracle.dt = num();
        else if (key == "oracle_absorber_strength") c.oracle.absorber_strength = num();
        else if (key == "oracle_t_first") c.oracle.t_first = num();
        else if (key == "oracle_t_last") c.oracle.t_last = num();
        else if (key == "oracle_points") c.oracle.points = integer();
        else if (key == "sweep_w_first") c.sweep.w_first = num();
        else if (key == "sweep_w_last") c.sweep.w_last = num();
        else if (key == "sweep_steps") c.sweep.steps = integer();
        else throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }

    std::vector<std::string> missing;
    for (const auto& k : required_config_keys())
        if (!seen.contains(k)) missing.push_back(k);
    if (!missing.empty()) {
        std::string list;
        for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("missing required keys: " + list);
    }
    if (!(c.effective_mass > 0.0)) throw ConfigError("effective_mass must be positive");
    if (c.pole_count < 1) throw ConfigError("poles must be at least 1");
    if (!(c.t_first > 0.0) || !(c.t_last > c.t_first)) throw ConfigError("need 0 < t_first < t_last");
    if (c.points_per_decade < 1) throw ConfigError("points_per_decade must be positive");
    if (c.oracle.points < 2) throw ConfigError("oracle_points must be at least 2");
    if (c.wants(Output::sweep) && seen.contains("sweep_steps") && c.sweep.steps < 2)
        throw ConfigError("sweep_steps must be at least 2");
    return c;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace gamow

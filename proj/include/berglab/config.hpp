#ifndef BERGLAB_CONFIG_HPP
#define BERGLAB_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "berglab/errors.hpp"
#include "berglab/geom.hpp"
#include "berglab/invariant_function.hpp"
#include "berglab/moment_grid.hpp"
#include "berglab/rational.hpp"

namespace berglab {

// Flat key-value run configuration.  One file per run, '#' comments, repeated
// keys accumulate list values; anything else is a scalar and may appear once.
// Command-line flags override file values.
struct RunConfig {
    std::vector<std::pair<int, double>> potential; // (legendre index, coefficient)
    std::vector<int> m_list;
    int nodes = 0;   // 0 = sizing rule from the largest power
    int degree = kDefaultDegreeCap;
    Rational lift{1, 2};
    std::map<int, Rational> lift_at; // optional per-power overrides
    std::uint64_t seed = 1;
    int steps = 1;
    std::vector<std::pair<int, double>> inject; // corrector spoiler (index, coefficient)
    int inject_order = 1;
    int fit_order = 2;
    std::string out_dir = "out";

    // command tolerances (defaults are the documented acceptance values)
    double tol_balance = 1e-10;
    double tol_identity = 1e-8;
    double tol_a1 = 2e-2;
    double tol_fit_residual = 1e-3;
    double tol_kernel_residual = 1e-3;
    double slope_slack = 0.25;

    // self-test knob: scales the Lichnerowicz prediction inside `check` so a
    // wrong operator normalization is demonstrably caught
    double d0_scale = 1.0;
};

namespace detail {

struct ConfigLine {
    std::string key;
    std::string value;
    int number = 0;
};

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<ConfigLine> tokenize_config(std::istream& in, const std::string& origin) {
    std::vector<ConfigLine> lines;
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ":" + std::to_string(number) +
                               ": expected 'key = value'");
        ConfigLine line;
        line.key = trim(stripped.substr(0, eq));
        line.value = trim(stripped.substr(eq + 1));
        line.number = number;
        if (line.key.empty() || line.value.empty())
            throw config_error(origin + ":" + std::to_string(number) + ": empty key or value");
        lines.push_back(std::move(line));
    }
    return lines;
}

template <typename T>
inline T parse_scalar(const ConfigLine& line, const std::string& origin) {
    std::istringstream ss(line.value);
    T value;
    if (!(ss >> value) || !(ss >> std::ws).eof())
        throw config_error(origin + ":" + std::to_string(line.number) + ": field '" + line.key +
                           "': cannot parse '" + line.value + "'");
    return value;
}

inline std::pair<int, double> parse_index_value(const ConfigLine& line,
                                                const std::string& origin) {
    std::istringstream ss(line.value);
    int index;
    double value;
    if (!(ss >> index >> value) || !(ss >> std::ws).eof())
        throw config_error(origin + ":" + std::to_string(line.number) + ": field '" + line.key +
                           "': expected 'index value', got '" + line.value + "'");
    if (index < 0)
        throw config_error(origin + ":" + std::to_string(line.number) + ": field '" + line.key +
                           "': index must be nonnegative");
    return {index, value};
}

} // namespace detail

inline RunConfig parse_config(std::istream& in, const std::string& origin = "<config>") {
    RunConfig cfg;
    std::map<std::string, int> seen;
    const auto scalar_once = [&](const detail::ConfigLine& line) {
        if (++seen[line.key] > 1)
            throw config_error(origin + ":" + std::to_string(line.number) + ": field '" +
                               line.key + "' given more than once");
    };
    for (const auto& line : detail::tokenize_config(in, origin)) {
        if (line.key == "potential") {
            cfg.potential.push_back(detail::parse_index_value(line, origin));
        } else if (line.key == "inject") {
            cfg.inject.push_back(detail::parse_index_value(line, origin));
        } else if (line.key == "m") {
            const int m = detail::parse_scalar<int>(line, origin);
            if (m < 1)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'm': powers must be positive");
            cfg.m_list.push_back(m);
        } else if (line.key == "lift_at") {
            std::istringstream ss(line.value);
            int m;
            std::string rational;
            if (!(ss >> m >> rational) || !(ss >> std::ws).eof() || m < 1)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'lift_at': expected 'power p/q'");
            try {
                cfg.lift_at[m] = Rational::parse(rational);
            } catch (const std::exception& e) {
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'lift_at': " + e.what());
            }
        } else if (line.key == "lift") {
            scalar_once(line);
            try {
                cfg.lift = Rational::parse(line.value);
            } catch (const std::exception& e) {
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'lift': " + e.what());
            }
        } else if (line.key == "nodes") {
            scalar_once(line);
            cfg.nodes = detail::parse_scalar<int>(line, origin);
            if (cfg.nodes < 1)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'nodes': must be positive");
        } else if (line.key == "degree") {
            scalar_once(line);
            cfg.degree = detail::parse_scalar<int>(line, origin);
            if (cfg.degree < 2)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'degree': must be at least 2");
        } else if (line.key == "seed") {
            scalar_once(line);
            cfg.seed = detail::parse_scalar<std::uint64_t>(line, origin);
        } else if (line.key == "steps") {
            scalar_once(line);
            cfg.steps = detail::parse_scalar<int>(line, origin);
            if (cfg.steps < 0)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'steps': must be nonnegative");
        } else if (line.key == "inject_order") {
            scalar_once(line);
            cfg.inject_order = detail::parse_scalar<int>(line, origin);
            if (cfg.inject_order < 1)
                throw config_error(origin + ":" + std::to_string(line.number) +
                                   ": field 'inject_order': must be positive");
        } else if (line.key == "fit_order") {
            scalar_once(line);
            cfg.fit_order = detail::parse_scalar<int>(line, origin);
        } else if (line.key == "out") {
            scalar_once(line);
            cfg.out_dir = line.value;
        } else if (line.key == "tol_balance") {
            scalar_once(line);
            cfg.tol_balance = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "tol_identity") {
            scalar_once(line);
            cfg.tol_identity = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "tol_a1") {
            scalar_once(line);
            cfg.tol_a1 = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "tol_fit_residual") {
            scalar_once(line);
            cfg.tol_fit_residual = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "tol_kernel_residual") {
            scalar_once(line);
            cfg.tol_kernel_residual = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "slope_slack") {
            scalar_once(line);
            cfg.slope_slack = detail::parse_scalar<double>(line, origin);
        } else if (line.key == "d0_scale") {
            scalar_once(line);
            cfg.d0_scale = detail::parse_scalar<double>(line, origin);
        } else {
            throw config_error(origin + ":" + std::to_string(line.number) + ": unknown field '" +
                               line.key + "'");
        }
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path.string() + "'");
    return parse_config(in, path.string());
}

// Validation shared by all commands; throws config_error before any
// computation starts.
inline void validate_config(const RunConfig& cfg, bool needs_m_list = true) {
    if (needs_m_list) {
        if (cfg.m_list.empty()) throw config_error("m list is empty");
        if (!std::is_sorted(cfg.m_list.begin(), cfg.m_list.end()) ||
            std::adjacent_find(cfg.m_list.begin(), cfg.m_list.end()) != cfg.m_list.end())
            throw config_error("m list must be strictly increasing");
    }
}

inline InvariantFunction potential_from_pairs(const std::vector<std::pair<int, double>>& pairs) {
    InvariantFunction f;
    for (const auto& [k, value] : pairs) f.set_coefficient(k, f.coefficient(k) + value);
    return f;
}

inline MomentGrid grid_for_config(const RunConfig& cfg) {
    const int m_max =
        cfg.m_list.empty() ? 1 : *std::max_element(cfg.m_list.begin(), cfg.m_list.end());
    if (cfg.nodes > 0) return MomentGrid(cfg.nodes);
    return MomentGrid::for_max_power(m_max);
}

// Builds the configured metric, rejecting inadmissible potentials up front.
inline InvariantMetric metric_from_config(const RunConfig& cfg) {
    try {
        return InvariantMetric(potential_from_pairs(cfg.potential), grid_for_config(cfg),
                               cfg.degree);
    } catch (const kahler_cone_error& e) {
        throw config_error(std::string("configured potential is inadmissible: ") + e.what());
    }
}

} // namespace berglab

#endif

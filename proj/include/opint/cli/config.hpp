#pragma once

// Run configuration: a sectioned key=value file
//
//   [run]
//   scenario = naimark
//   seed = 7
//   [params]
//   count = 50
//   [tol]
//   psd = 1e-10
//
// with command-line overrides. Keys are checked against the scenario's
// declared parameters; anything unknown is a ConfigError.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "opint/core.hpp"

namespace opint::cli {

enum class ParamType { Int, Real, Bool, Text, RealList };

struct ParamSpec {
    std::string name;
    ParamType type = ParamType::Real;
    std::string fallback; // default, in config syntax
    std::string help;
};

using ParamValue = std::variant<long long, double, bool, std::string, std::vector<double>>;

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorKind::ConfigError, key + ": expected a number, got '" + text + "'");
    return v;
}

inline long long parse_int(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorKind::ConfigError, key + ": expected an integer, got '" + text + "'");
    return v;
}

inline ParamValue parse_value(const std::string& key, ParamType type, const std::string& raw)
{
    const std::string text = trim(raw);
    switch (type) {
    case ParamType::Int: return parse_int(key, text);
    case ParamType::Real: return parse_real(key, text);
    case ParamType::Bool:
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        throw Error(ErrorKind::ConfigError, key + ": expected true/false, got '" + text + "'");
    case ParamType::Text: return text;
    case ParamType::RealList: {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
        if (out.empty()) throw Error(ErrorKind::ConfigError, key + ": empty list");
        return out;
    }
    }
    throw Error(ErrorKind::ConfigError, key + ": unknown parameter type");
}

} // namespace detail

/// Typed parameter map, complete after resolution (every declared key present).
class Params {
public:
    Params() = default;
    Params(const std::vector<ParamSpec>& specs, const std::map<std::string, std::string>& raw)
    {
        for (const auto& [k, v] : raw) {
            bool known = false;
            for (const ParamSpec& s : specs) known = known || s.name == k;
            if (!known) throw Error(ErrorKind::ConfigError, "unknown parameter '" + k + "'");
        }
        for (const ParamSpec& s : specs) {
            const auto it = raw.find(s.name);
            const std::string text = it != raw.end() ? it->second : s.fallback;
            values_[s.name] = detail::parse_value(s.name, s.type, text);
            text_[s.name] = detail::trim(text);
        }
    }

    long long integer(const std::string& k) const { return get<long long>(k); }
    double real(const std::string& k) const { return get<double>(k); }
    bool flag(const std::string& k) const { return get<bool>(k); }
    const std::string& text(const std::string& k) const { return get<std::string>(k); }
    const std::vector<double>& reals(const std::string& k) const { return get<std::vector<double>>(k); }

    /// Normalized textual form of every parameter, sorted by key.
    const std::map<std::string, std::string>& echo() const { return text_; }

private:
    template <class T>
    const T& get(const std::string& k) const
    {
        const auto it = values_.find(k);
        if (it == values_.end()) throw Error(ErrorKind::ConfigError, "parameter '" + k + "' is not declared");
        const T* v = std::get_if<T>(&it->second);
        if (!v) throw Error(ErrorKind::ConfigError, "parameter '" + k + "' has another type");
        return *v;
    }

    std::map<std::string, ParamValue> values_;
    std::map<std::string, std::string> text_;
};

struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::map<std::string, std::string> params; // raw, validated against the scenario
    std::map<std::string, double> tol;         // overrides by name
};

inline const std::vector<std::string>& tolerance_names()
{
    static const std::vector<std::string> names{"psd", "hermitian", "conv_atomic", "conv_density",
                                                "divergence_margin", "persistence"};
    return names;
}

inline void set_tolerance(Tolerances& t, const std::string& name, double v)
{
    if (name == "psd") t.psd = v;
    else if (name == "hermitian") t.hermitian = v;
    else if (name == "conv_atomic") t.conv_atomic = v;
    else if (name == "conv_density") t.conv_density = v;
    else if (name == "divergence_margin") t.divergence_margin = v;
    else if (name == "persistence") t.persistence = v;
    else throw Error(ErrorKind::ConfigError, "unknown tolerance '" + name + "'");
}

inline Tolerances resolve_tolerances(const ScenarioConfig& c)
{
    Tolerances t;
    for (const auto& [k, v] : c.tol) set_tolerance(t, k, v);
    return t;
}

/// Applies one `section.key = value` assignment.
inline void assign(ScenarioConfig& c, const std::string& section, const std::string& key, const std::string& value)
{
    const std::string where = section + "." + key;
    if (section == "run") {
        if (key == "scenario") c.scenario = detail::trim(value);
        else if (key == "seed") {
            const long long s = detail::parse_int(where, detail::trim(value));
            if (s < 0) throw Error(ErrorKind::ConfigError, "seed must be non-negative");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "out") c.out_dir = detail::trim(value);
        else throw Error(ErrorKind::ConfigError, "unknown key '" + where + "'");
    } else if (section == "params") {
        c.params[key] = detail::trim(value);
    } else if (section == "tol") {
        Tolerances probe;
        const double v = detail::parse_real(where, detail::trim(value));
        set_tolerance(probe, key, v);
        c.tol[key] = v;
    } else {
        throw Error(ErrorKind::ConfigError, "unknown section '" + section + "'");
    }
}

inline ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {})
{
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": bad section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty()) throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": key outside a section");
        const std::string key = detail::trim(line.substr(0, eq));
        if (key.empty()) throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key");
        assign(base, section, key, line.substr(eq + 1));
    }
    return base;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {})
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot open config " + path);
    return parse_config(in, std::move(base));
}

} // namespace opint::cli

#pragma once

// Run reports: named checks with measured value and bound, plot-ready tables,
// and their emission as {scenario}-{seed}-{name}.csv plus a JSON summary.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "opint/core.hpp"

namespace opint::cli {

struct Check {
    std::string name;
    int criterion = 0;         // acceptance criterion covered, 0 for auxiliary checks
    double measured = 0.0;
    double bound = 0.0;
    std::string relation;      // "<=", ">=", "==", "in"
    double upper = 0.0;        // second bound for "in"
    bool passed = false;
    std::string note;
};

/// Formats a double so that it round-trips and prints identically on every run.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    template <class... T>
    void add(const T&... cells)
    {
        std::vector<std::string> row;
        (row.push_back(cell(cells)), ...);
        if (row.size() != columns.size()) throw Error(ErrorKind::DimensionMismatch, "row width differs from the header of " + name);
        rows.push_back(std::move(row));
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }
    static std::string cell(bool b) { return b ? "true" : "false"; }
    static std::string cell(double v) { return format_number(v); }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v)
    {
        return std::to_string(v);
    }
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config; // parameter and tolerance echo
    std::vector<Check> checks;
    std::deque<Table> tables;                   // deque: table() references stay valid
    std::vector<std::string> artifacts;         // file names written by emit_report
    double wall_clock_s = 0.0;

    bool passed() const
    {
        for (const Check& c : checks)
            if (!c.passed) return false;
        return true;
    }

    Check& le(std::string name, int criterion, double measured, double bound, std::string note = {})
    {
        return push({std::move(name), criterion, measured, bound, "<=", 0.0, measured <= bound, std::move(note)});
    }

    Check& ge(std::string name, int criterion, double measured, double bound, std::string note = {})
    {
        return push({std::move(name), criterion, measured, bound, ">=", 0.0, measured >= bound, std::move(note)});
    }

    Check& within(std::string name, int criterion, double measured, double lo, double hi, std::string note = {})
    {
        return push({std::move(name), criterion, measured, lo, "in", hi, measured >= lo && measured <= hi, std::move(note)});
    }

    Check& truth(std::string name, int criterion, bool ok, std::string note = {})
    {
        return push({std::move(name), criterion, ok ? 1.0 : 0.0, 1.0, "==", 0.0, ok, std::move(note)});
    }

    Table& table(std::string name, std::vector<std::string> columns)
    {
        tables.push_back({std::move(name), std::move(columns), {}});
        return tables.back();
    }

private:
    Check& push(Check c)
    {
        for (const Check& o : checks)
            if (o.name == c.name) throw Error(ErrorKind::ConfigError, "duplicate check " + c.name);
        checks.push_back(std::move(c));
        return checks.back();
    }
};

inline nlohmann::json summary_json(const RunReport& r, bool with_clock = true)
{
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["config"] = r.config;
    j["passed"] = r.passed();
    j["checks"] = nlohmann::json::array();
    for (const Check& c : r.checks) {
        nlohmann::json cj{{"name", c.name},
                          {"criterion", c.criterion},
                          {"passed", c.passed},
                          {"measured", format_number(c.measured)},
                          {"relation", c.relation},
                          {"bound", format_number(c.bound)}};
        if (c.relation == "in") cj["upper"] = format_number(c.upper);
        if (!c.note.empty()) cj["note"] = c.note;
        j["checks"].push_back(std::move(cj));
    }
    j["artifacts"] = r.artifacts;
    if (with_clock) j["wall_clock_s"] = r.wall_clock_s;
    return j;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

inline std::string artifact_name(const RunReport& r, const std::string& name, const std::string& ext)
{
    return r.scenario + "-" + std::to_string(r.seed) + "-" + name + "." + ext;
}

/// Writes every table as CSV and the summary JSON into out_dir; returns the
/// paths written (summary last). Records artifact names in the report.
inline std::vector<std::filesystem::path> emit_report(RunReport& r, const std::filesystem::path& out_dir)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    r.artifacts.clear();
    for (const Table& t : r.tables) {
        const std::string file = artifact_name(r, t.name, "csv");
        const auto path = out_dir / file;
        std::ofstream os(path);
        if (!os) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
            os << '\n';
        }
        if (!os) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
        written.push_back(path);
        r.artifacts.push_back(file);
    }
    const auto summary = out_dir / artifact_name(r, "summary", "json");
    std::ofstream js(summary);
    if (!js) throw Error(ErrorKind::IoFailure, "cannot write " + summary.string());
    js << summary_json(r).dump(2) << '\n';
    if (!js) throw Error(ErrorKind::IoFailure, "write failed for " + summary.string());
    written.push_back(summary);
    return written;
}

} // namespace opint::cli

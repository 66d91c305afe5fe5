// opint: run one scenario, write its CSV tables and JSON summary, exit 0 iff
// every check passed.
//
//   opint --scenario naimark --seed 7 --out out
//   opint --config runs/eigen.ini --tol.psd 1e-9 --param M=4000

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opint/cli/scenarios.hpp"

namespace {

using namespace opint;
using namespace opint::cli;

int list_scenarios()
{
    for (const Scenario& s : registry()) {
        std::cout << s.id << "\n    " << s.summary << '\n';
        for (const ParamSpec& p : s.params)
            std::cout << "    " << p.name << " = " << p.fallback << (p.help.empty() ? "" : "  # " + p.help) << '\n';
    }
    return 0;
}

// --tol.<name> <value> and --tol.<name>=<value>, left over by CLI11.
void apply_tolerance_flags(const std::vector<std::string>& extras, ScenarioConfig& cfg)
{
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--tol.", 0) != 0) throw Error(ErrorKind::ConfigError, "unrecognized argument '" + arg + "'");
        std::string name = arg.substr(6);
        std::string value;
        if (const auto eq = name.find('='); eq != std::string::npos) {
            value = name.substr(eq + 1);
            name.erase(eq);
        } else {
            if (i + 1 >= extras.size()) throw Error(ErrorKind::ConfigError, arg + " needs a value");
            value = extras[++i];
        }
        assign(cfg, "tol", name, value);
    }
}

void print_report(const RunReport& r)
{
    std::cout << r.scenario << " seed=" << r.seed << '\n';
    for (const Check& c : r.checks) {
        std::cout << (c.passed ? "  pass  " : "  FAIL  ") << c.name << "  " << format_number(c.measured) << ' '
                  << c.relation << ' ' << format_number(c.bound);
        if (c.relation == "in") std::cout << ".." << format_number(c.upper);
        if (!c.note.empty()) std::cout << "  (" << c.note << ')';
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Operator integrals against POVMs: scenario runner"};
    app.allow_extras();

    std::string scenario;
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> param_flags;
    bool list = false;
    bool quiet = false;

    app.add_option("--scenario", scenario, "scenario id (see --list)");
    app.add_option("--config", config_path, "sectioned key=value file; flags override it");
    app.add_option("--out", out_dir, "output directory for CSV and JSON artifacts");
    app.add_option("--seed", seed, "seed for random POVMs and states");
    app.add_option("--param", param_flags, "scenario parameter override, key=value (repeatable)");
    app.add_flag("--list", list, "list scenarios and their parameters");
    app.add_flag("-q,--quiet", quiet, "print only the summary path and verdict");
    app.footer("Tolerances: --tol.<name> <value> with name in psd, hermitian, conv_atomic, conv_density,\n"
               "divergence_margin, persistence.\nExit status: 0 all checks passed, 1 a check failed, 2 usage or I/O error.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (list) return list_scenarios();

    try {
        ScenarioConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!scenario.empty()) cfg.scenario = scenario;
        if (seed) cfg.seed = *seed;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        for (const std::string& kv : param_flags) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::ConfigError, "--param expects key=value, got '" + kv + "'");
            assign(cfg, "params", kv.substr(0, eq), kv.substr(eq + 1));
        }
        apply_tolerance_flags(app.remaining(), cfg);
        if (cfg.scenario.empty()) throw Error(ErrorKind::ConfigError, "no scenario given (use --scenario or [run] scenario)");

        RunReport report = run_scenario(cfg);
        const auto files = emit_report(report, cfg.out_dir);
        if (!quiet) print_report(report);
        std::cout << (report.passed() ? "PASSED " : "FAILED ") << files.back().string() << '\n';
        return report.passed() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "opint: " << e.what() << '\n';
        return e.kind() == ErrorKind::ScenarioFailure ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "opint: " << e.what() << '\n';
        return 2;
    }
}

#pragma once

// Scenario registry and runner.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "opint/cli/config.hpp"
#include "opint/cli/report.hpp"
#include "opint/cli/scenarios_box.hpp"
#include "opint/cli/scenarios_povm.hpp"

namespace opint::cli {

using ScenarioFn = std::function<void(const Params&, std::uint64_t, const Tolerances&, RunReport&)>;

struct Scenario {
    std::string id;
    std::string summary;
    std::vector<ParamSpec> params;
    ScenarioFn run;
    std::vector<int> criteria; // acceptance criteria whose checks this scenario emits
};

inline const std::vector<Scenario>& registry()
{
    static const std::vector<Scenario> all{
        {"naimark", "Naimark dilations of seeded random POVMs", naimark_params(), run_naimark, {1}},
        {"pvm-coincidence", "Tilde, Strong and MaxWeakSym integrals of spectral measures", pvm_params(),
         run_pvm_coincidence, {2}},
        {"trivial-povm", "The scalar POVM mu I", trivial_params(), run_trivial_povm, {3}},
        {"diagonal-povm", "Diagonal measure family: boundedness and the strong/weak gap", diagonal_params(),
         run_diagonal_povm, {4}},
        {"box-eigen", "Spectrum of P_0^* P_0 on a grid", box_eigen_params(), run_box_eigen, {5}},
        {"variance-free", "Variance-freeness of the box momentum POVM", variance_free_params(), run_variance_free, {6}},
        {"lemma-a2", "Fourier integration-by-parts identity", lemma_a2_params(), run_lemma_a2, {7}},
        {"lemma-a3", "Divergence of boundary terms", lemma_a3_params(), run_lemma_a3, {8}},
        {"domains", "Boundary-condition domains and the operator-integral inclusion chain", domains_params(),
         run_domains, {9, 10}},
        {"bounded-integrals", "Form identities and bounded integrals on finite atomic measures", forms_params(),
         run_bounded_integrals, {11}},
        {"box-moments", "Momentum moments against horizon", box_moments_params(), run_box_moments, {}},
    };
    return all;
}

inline const Scenario& find_scenario(const std::string& id)
{
    for (const Scenario& s : registry())
        if (s.id == id) return s;
    std::string known;
    for (const Scenario& s : registry()) known += (known.empty() ? "" : ", ") + s.id;
    throw Error(ErrorKind::ConfigError, "unknown scenario '" + id + "' (known: " + known + ")");
}

/// Runs the configured scenario. Deterministic for fixed (config, seed) apart
/// from wall_clock_s.
inline RunReport run_scenario(const ScenarioConfig& cfg)
{
    const Scenario& s = find_scenario(cfg.scenario);
    const Params params(s.params, cfg.params);
    const Tolerances tol = resolve_tolerances(cfg);
    RunReport r;
    r.scenario = s.id;
    r.seed = cfg.seed;
    for (const auto& [k, v] : params.echo()) r.config["params." + k] = v;
    const Tolerances t = tol;
    r.config["tol.psd"] = format_number(t.psd);
    r.config["tol.hermitian"] = format_number(t.hermitian);
    r.config["tol.conv_atomic"] = format_number(t.conv_atomic);
    r.config["tol.conv_density"] = format_number(t.conv_density);
    r.config["tol.divergence_margin"] = format_number(t.divergence_margin);
    r.config["tol.persistence"] = format_number(t.persistence);
    const auto start = std::chrono::steady_clock::now();
    s.run(params, cfg.seed, tol, r);
    r.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// ScenarioFailure listing the violated checks with measured value and bound.
inline void require_passed(const RunReport& r)
{
    std::string msg;
    for (const Check& c : r.checks)
        if (!c.passed)
            msg += "\n  " + c.name + ": measured " + format_number(c.measured) + " " + c.relation + " " +
                   format_number(c.bound) + (c.relation == "in" ? ".." + format_number(c.upper) : "");
    if (!msg.empty()) throw Error(ErrorKind::ScenarioFailure, r.scenario + " failed:" + msg);
}

} // namespace opint::cli

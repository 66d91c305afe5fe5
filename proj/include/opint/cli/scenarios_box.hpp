#pragma once

// Scenarios for the particle in a box: the spectrum of P_0^* P_0, momentum
// moments, variance-freeness, the Fourier identity, divergence of boundary
// terms and the boundary-condition domain split.

#include <cmath>
#include <string>
#include <vector>

#include "opint/box/lemmas.hpp"
#include "opint/box/momentum.hpp"
#include "opint/box/operators.hpp"
#include "opint/box/state.hpp"
#include "opint/cli/config.hpp"
#include "opint/cli/report.hpp"
#include "opint/cli/scenarios_povm.hpp"
#include "opint/linalg.hpp"

namespace opint::cli {

namespace detail {

inline std::string pair_label(double a, double b)
{
    auto num = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%g", v);
        return std::string(buf);
    };
    return "(" + num(a) + "," + num(b) + ")";
}

/// Coefficient product of two polynomials (ascending powers).
inline std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> out(a.size() + b.size() - 1, cplx{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

/// t^j (ell - t)^j
inline std::vector<cplx> vanishing_factor(int j, double ell)
{
    std::vector<cplx> p{1.0};
    for (int i = 0; i < j; ++i) p = poly_mul(p, {0.0, ell, -1.0});
    return p;
}

} // namespace detail

inline std::vector<ParamSpec> box_eigen_params()
{
    return {{"ell", ParamType::Real, "3.141592653589793", "interval length"},
            {"M", ParamType::Int, "2000", "grid intervals"},
            {"N", ParamType::Int, "16", "sine Galerkin size"},
            {"count", ParamType::Int, "5", "eigenvalues checked"},
            {"mass", ParamType::Real, "1", "particle mass for the Hamiltonian column"},
            {"tol_eig", ParamType::Real, "5e-3", "relative eigenvalue bound"},
            {"ratio_lo", ParamType::Real, "3.5", "lower bound on the error ratio at doubled M"},
            {"ratio_hi", ParamType::Real, "4.5", "upper bound on the error ratio at doubled M"},
            {"sweep", ParamType::RealList, "250,500,1000,2000,4000", "grid sizes of the convergence table"}};
}

inline void run_box_eigen(const Params& p, std::uint64_t, const Tolerances&, RunReport& r)
{
    box::BoxConfig cfg;
    cfg.ell = p.real("ell");
    cfg.M = static_cast<int>(p.integer("M"));
    cfg.N = static_cast<int>(p.integer("N"));
    cfg.mass = p.real("mass");
    cfg.tol_eig = p.real("tol_eig");
    const int count = static_cast<int>(p.integer("count"));
    box::BoxConfig fine = cfg;
    fine.M = 2 * cfg.M;
    const box::EigenReport rep = box::eigen_p0star_p0(cfg, count);
    const box::EigenReport ref = box::eigen_p0star_p0(fine, count);

    Table& t = r.table("eigenvalues", {"n", "fd", "fd_refined", "exact", "galerkin", "printed", "hamiltonian",
                                       "rel_error", "error_ratio", "overlap"});
    double worst = 0.0, galerkin = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0, overlap = 1.0;
    for (int k = 0; k < count; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double exact = std::pow((k + 1) * pi / cfg.ell, 2);
        const double rel = std::abs(rep.eigenvalues[i] - exact) / exact;
        const double ratio = std::abs(rep.eigenvalues[i] - exact) / std::abs(ref.eigenvalues[i] - exact);
        worst = std::max(worst, rel);
        galerkin = std::max(galerkin, std::abs(rep.galerkin[i] - exact) / exact);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        overlap = std::min(overlap, rep.overlap[i]);
        t.add(k + 1, rep.eigenvalues[i], ref.eigenvalues[i], exact, rep.galerkin[i], rep.paper_values[i],
              rep.hamiltonian[i], rel, ratio, rep.overlap[i]);
    }
    r.le("eigen.relative_error", 5, worst, cfg.tol_eig, "first eigenvalues against (n pi / ell)^2");
    r.within("eigen.refinement_ratio_min", 5, lo, p.real("ratio_lo"), p.real("ratio_hi"), "error(M) / error(2M)");
    r.within("eigen.refinement_ratio_max", 5, hi, p.real("ratio_lo"), p.real("ratio_hi"), "error(M) / error(2M)");
    r.truth("eigen.printed_value_flagged", 5, rep.paper_discrepancy,
            "printed n^2 pi^2 / (2 ell^2) differs from the computed eigenvalue (equals the m = 1 Hamiltonian)");
    r.le("eigen.galerkin", 0, galerkin, 1e-10, "sine Galerkin eigenvalues");
    r.ge("eigen.eigenvector_overlap", 0, overlap, 1.0 - 1e-6, "|<v_n | psi_n>|");

    Table& c = r.table("convergence", {"M", "n", "eigenvalue", "abs_error"});
    for (double m : p.reals("sweep")) {
        box::BoxConfig s = cfg;
        s.M = static_cast<int>(m);
        s.N = std::min(cfg.N, s.M / 4);
        const box::EigenReport e = box::eigen_p0star_p0(s, count);
        for (int k = 0; k < count; ++k)
            c.add(s.M, k + 1, e.eigenvalues[static_cast<std::size_t>(k)],
                  std::abs(e.eigenvalues[static_cast<std::size_t>(k)] - std::pow((k + 1) * pi / cfg.ell, 2)));
    }
}

inline std::vector<ParamSpec> box_moments_params()
{
    return {{"ell", ParamType::Real, "3.141592653589793", "interval length"},
            {"x_max", ParamType::Real, "0", "momentum cutoff, 0 for 200 / ell"},
            {"sines", ParamType::Int, "3", "number of sine states"},
            {"max_k", ParamType::Int, "2", "highest moment"}};
}

inline void run_box_moments(const Params& p, std::uint64_t, const Tolerances& tol, RunReport& r)
{
    box::BoxConfig cfg;
    cfg.ell = p.real("ell");
    cfg.x_max = p.real("x_max");
    std::vector<box::BoxState> states;
    for (int n = 1; n <= p.integer("sines"); ++n) states.push_back(box::sine_state(n, cfg.ell));
    states.push_back(box::parabola_state(cfg.ell));
    states.push_back(box::bump_state(cfg.ell));
    states.push_back(box::linear_state(1.0, 1.0, cfg.ell).named("phi(1,1)"));

    Table& t = r.table("moments", {"state", "k", "value", "status", "slope"});
    Table& h = r.table("moment-horizons", {"state", "k", "horizon", "partial_re", "partial_im"});
    double plancherel = 0.0, second = 0.0;
    bool divergent_flagged = false;
    for (const box::BoxState& s : states) {
        for (int k = 0; k <= p.integer("max_k"); ++k) {
            const IntegrationVerdict v = box::moment(s, k, cfg, tol);
            t.add(s.name(), k, v.value.real(), to_string(v.status), v.fit ? format_number(v.fit->slope) : std::string{});
            for (const EvidenceRow& e : v.evidence) h.add(s.name(), k, e.horizon, e.partial.real(), e.partial.imag());
            const bool in_h10 = s.name() != "phi(1,1)";
            if (k == 0) plancherel = std::max(plancherel, std::abs(v.value.real() - s.norm_sq(0)) / s.norm_sq(0));
            if (k == 2 && in_h10)
                second = std::max(second, v.converged() ? std::abs(v.value.real() - s.norm_sq(1)) / s.norm_sq(1) : 1.0);
            if (k == 2 && !in_h10) divergent_flagged = v.divergent();
        }
    }
    r.le("moments.plancherel", 0, plancherel, 1e-6, "int dP_phi,phi = ||phi||^2");
    r.le("moments.second", 0, second, 1e-3, "int x^2 dP_phi,phi = ||phi'||^2 for phi(0) = phi(ell) = 0");
    r.truth("moments.boundary_state_diverges", 0, divergent_flagged, "second moment of phi(1,1) flagged Divergent");
}

inline std::vector<ParamSpec> variance_free_params()
{
    return {{"ell", ParamType::Real, "3.141592653589793", "interval length"},
            {"x_max", ParamType::Real, "0", "momentum cutoff, 0 for 200 / ell"},
            {"bound", ParamType::Real, "1e-3", "relative defect bound"},
            {"first_bound", ParamType::Real, "1e-8", "first-moment bound"}};
}

inline void run_variance_free(const Params& p, std::uint64_t, const Tolerances& tol, RunReport& r)
{
    box::BoxConfig cfg;
    cfg.ell = p.real("ell");
    cfg.x_max = p.real("x_max");
    std::vector<box::BoxState> states;
    for (int n = 1; n <= 5; ++n) states.push_back(box::sine_state(n, cfg.ell));
    const double s2 = 1.0 / std::sqrt(2.0), s6 = 1.0 / std::sqrt(6.0);
    states.push_back(box::sine_series({s2, s2}, cfg.ell, "(psi1+psi2)/sqrt2"));
    states.push_back(box::sine_series({s6, 0.0, -2.0 * s6, 0.0, s6}, cfg.ell, "(psi1-2psi3+psi5)/sqrt6"));

    Table& t = r.table("variance-free", {"state", "second_moment", "derivative_norm_sq", "relative_defect",
                                         "first_moment", "status"});
    double worst = 0.0, first = 0.0;
    bool converged = true;
    for (const box::BoxState& s : states) {
        const box::VarianceFreeResult v = box::variance_free_check(s, cfg);
        const IntegrationVerdict m1 = box::moment(s, 1, cfg, tol);
        worst = std::max(worst, v.relative_defect);
        first = std::max(first, std::abs(m1.value));
        converged = converged && v.status == Status::Converged && m1.converged();
        t.add(s.name(), v.second_moment, v.derivative_norm_sq, v.relative_defect, m1.value.real(), to_string(v.status));
    }
    r.le("variance.relative_defect", 6, worst, p.real("bound"), "|int x^2 dP - ||P_0 phi||^2| / ||P_0 phi||^2");
    r.le("variance.first_moment", 6, first, p.real("first_bound"), "|int x dP|");
    r.truth("variance.converged", 6, converged, "moments classified Converged");
}

inline std::vector<ParamSpec> lemma_a2_params()
{
    return {{"ell", ParamType::Real, "3.141592653589793", "interval length"},
            {"M", ParamType::Int, "2000", "Simpson intervals"},
            {"M_coarse", ParamType::Int, "200", "coarse grid of the refinement check"},
            {"x_range", ParamType::Real, "16", "identity checked on [-x_range, x_range]"},
            {"x_step", ParamType::Real, "0.25", "spacing of the x grid"},
            {"bound", ParamType::Real, "1e-8", "sup-residual bound"}};
}

inline void run_lemma_a2(const Params& p, std::uint64_t, const Tolerances&, RunReport& r)
{
    const double ell = p.real("ell");
    std::vector<double> xs;
    const double range = p.real("x_range"), step = p.real("x_step");
    for (double x = -range; x <= range + 1e-12; x += step) xs.push_back(x);
    const int M = static_cast<int>(p.integer("M")), mc = static_cast<int>(p.integer("M_coarse"));

    struct Case {
        box::BoxState state;
        int n;
    };
    const std::vector<Case> cases{{box::sine_state(1, ell), 1},
                                  {box::linear_state(0.0, 1.0, ell).named("phi(0,1)"), 1},
                                  {box::bump_state(ell), 1},
                                  {box::bump_state(ell), 2}};
    Table& t = r.table("identity", {"state", "n", "M", "sup_residual", "at_x", "boundary_term", "coarse_residual",
                                    "halved_residual", "ratio"});
    double worst = 0.0, ratio_min = std::numeric_limits<double>::infinity(), boundary = 0.0;
    for (const Case& c : cases) {
        const box::IdentityResidual fine = box::lemma_a2_identity_check(c.state, xs, M, c.n);
        const box::IdentityResidual coarse = box::lemma_a2_identity_check(c.state, xs, mc, c.n);
        const box::IdentityResidual halved = box::lemma_a2_identity_check(c.state, xs, 2 * mc, c.n);
        const double ratio = coarse.sup_residual / halved.sup_residual;
        if (c.n == 1) {
            worst = std::max(worst, fine.sup_residual);
            ratio_min = std::min(ratio_min, ratio);
            boundary = std::max(boundary, fine.boundary_term_size);
        }
        t.add(c.state.name(), c.n, M, fine.sup_residual, fine.at_x, fine.boundary_term_size, coarse.sup_residual,
              halved.sup_residual, ratio);
    }
    r.le("a2.sup_residual", 7, worst, p.real("bound"), "three states, first-order identity");
    r.ge("a2.halving", 7, ratio_min, 2.0, "residual ratio when h halves");
    r.ge("a2.boundary_term_exercised", 7, boundary, 0.1, "largest boundary term among the states");
}

inline std::vector<ParamSpec> lemma_a3_params()
{
    return {{"ell", ParamType::Real, "3.141592653589793", "interval length"},
            {"log2_first", ParamType::Int, "4", "first horizon 2^k"},
            {"log2_last", ParamType::Int, "13", "last horizon 2^k"},
            {"slope_tol", ParamType::Real, "0.1", "relative slope tolerance against 1/pi for (1,1)"}};
}

inline void run_lemma_a3(const Params& p, std::uint64_t, const Tolerances& tol, RunReport& r)
{
    const double ell = p.real("ell");
    const std::vector<double> horizons =
        box::doubling_schedule(static_cast<int>(p.integer("log2_first")), static_cast<int>(p.integer("log2_last")));
    const std::vector<std::pair<double, double>> pairs{{1, 1}, {1, 0}, {0, 1}, {1, -1}, {0, 0}};
    Table& t = r.table("fits", {"a", "b", "route", "theta", "status", "slope", "residual"});
    Table& h = r.table("horizons", {"a", "b", "route", "horizon", "partial"});
    for (const auto& [a, b] : pairs) {
        const box::A3Result res = box::lemma_a3_divergence_probe(a, b, ell, horizons, std::nullopt, true, tol);
        const std::string label = detail::pair_label(a, b);
        const bool zero = a == 0.0 && b == 0.0;
        for (const auto& [route, v] : {std::pair<std::string, const IntegrationVerdict*>{"witness", &res.witness},
                                       {"density", &*res.density}}) {
            const double slope = v->fit ? v->fit->slope : 0.0;
            const double resid = v->fit ? v->fit->residual : 0.0;
            t.add(a, b, route, res.theta, to_string(v->status), slope, resid);
            for (const EvidenceRow& e : v->evidence) h.add(a, b, route, e.horizon, e.partial.real());
            if (zero) {
                r.truth("a3." + label + "." + route + ".converged", 8, v->converged());
                continue;
            }
            r.truth("a3." + label + "." + route + ".divergent", 8, v->divergent());
            r.ge("a3." + label + "." + route + ".slope_vs_residual", 8, slope, tol.divergence_margin * resid,
                 "log-slope exceeds margin times fit residual");
            if (route == "density" && a == 1.0 && b == 1.0) {
                const double s = p.real("slope_tol");
                r.within("a3." + label + ".density_slope", 8, slope, (1.0 - s) / pi, (1.0 + s) / pi,
                         "x G(x) averages 2|a|^2 / (2 pi x)");
            }
        }
    }
}

inline std::vector<ParamSpec> domains_params()
{
    auto chain = chain_params();
    chain.push_back({"ell", ParamType::Real, "3.141592653589793", "interval length"});
    chain.push_back({"states", ParamType::Int, "100", "seeded states for the domain chain"});
    return chain;
}

/// Expected memberships from the endpoint derivatives of each family.
struct BoundaryCase {
    box::BoxState state;
    box::BoundaryDomain n1, n2;
};

inline std::vector<BoundaryCase> boundary_truth_table(double ell)
{
    using box::BoundaryDomain;
    std::vector<BoundaryCase> out;
    // psi_m: even derivatives vanish at both ends, odd ones do not.
    for (int m = 1; m <= 3; ++m)
        out.push_back({box::sine_state(m, ell), BoundaryDomain::InDomPprime2n, BoundaryDomain::Neither});
    out.push_back({box::parabola_state(ell), BoundaryDomain::InDomPprime2n, BoundaryDomain::Neither});
    out.push_back({box::bump_state(ell), BoundaryDomain::InDomP2n, BoundaryDomain::InDomPprime2n});
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {1, 0}, {0, 1}, {1, -1}})
        out.push_back({box::linear_state(a, b, ell).named("phi" + detail::pair_label(a, b)), BoundaryDomain::Neither,
                       BoundaryDomain::Neither});
    return out;
}

inline box::BoxState random_box_state(Rng& rng, double ell, int index)
{
    const std::string name = "s" + std::to_string(index);
    switch (rng.uniform_int(0, 3)) {
    case 0: {
        std::vector<cplx> c(static_cast<std::size_t>(rng.uniform_int(1, 6)));
        for (cplx& v : c) v = rng.complex_normal();
        return box::sine_series(c, ell, name);
    }
    case 1: {
        std::vector<cplx> q(static_cast<std::size_t>(rng.uniform_int(1, 3)));
        for (cplx& v : q) v = rng.complex_normal();
        return box::BoxState(ell, detail::poly_mul(detail::vanishing_factor(rng.uniform_int(0, 4), ell), q), {}, name);
    }
    case 2: return box::linear_state(rng.complex_normal(), rng.complex_normal(), ell).named(name);
    default: {
        std::vector<cplx> c(static_cast<std::size_t>(rng.uniform_int(1, 4)));
        for (cplx& v : c) v = rng.complex_normal();
        const box::BoxState s = box::sine_series(c, ell);
        return box::BoxState::from_grid(ell, s.sample(400), name);
    }
    }
}

inline void run_domains(const Params& p, std::uint64_t seed, const Tolerances& tol, RunReport& r)
{
    const double ell = p.real("ell");
    Table& t = r.table("boundary-truth", {"state", "n", "detected", "expected"});
    long long mismatches = 0;
    for (const BoundaryCase& c : boundary_truth_table(ell)) {
        for (int n = 1; n <= 2; ++n) {
            const box::BoundaryDomain got = box::boundary_domain_detector(c.state, n);
            const box::BoundaryDomain want = n == 1 ? c.n1 : c.n2;
            mismatches += got != want;
            t.add(c.state.name(), n, to_string(got), to_string(want));
        }
    }
    r.le("boundary.truth_table_mismatches", 9, static_cast<double>(mismatches), 0.0, "detector against analytic memberships");

    Rng rng(seed);
    long long violations = 0;
    Table& s = r.table("boundary-chain", {"state", "n", "detected", "low_orders_vanish"});
    for (long long i = 0; i < p.integer("states"); ++i) {
        const box::BoxState st = random_box_state(rng, ell, static_cast<int>(i));
        for (int n = 1; n <= 2; ++n) {
            const box::BoundaryDomain got = box::boundary_domain_detector(st, n);
            // Independent check of the weaker membership from point values.
            bool low = true;
            if (st.analytic()) {
                const std::vector<cplx> grid = st.sample(64);
                double sup = 0.0;
                for (const cplx& v : grid) sup = std::max(sup, std::abs(v));
                for (int k = 0; k < n; ++k) {
                    const double ref = std::max(1.0, sup) * std::pow(1.0 + std::max(1.0, st.max_frequency()), k);
                    low = low && std::abs(st.derivative(k, 0.0)) <= 1e-8 * ref && std::abs(st.derivative(k, ell)) <= 1e-8 * ref;
                }
            } else {
                const box::BoundaryData b = st.boundary(2 * n - 1);
                for (int k = 0; k < n; ++k) low = low && box::vanishes_at_ends(b, k);
            }
            if (got == box::BoundaryDomain::InDomP2n && !low) ++violations;
            s.add(st.name(), n, to_string(got), low);
        }
    }
    r.le("boundary.chain_violations", 9, static_cast<double>(violations), 0.0, "InDomP2n implies InDomPprime2n");

    run_inclusion_chain(p, seed, tol, r);
}

} // namespace opint::cli

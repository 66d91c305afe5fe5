#pragma once

// Boundary-condition domains, the Fourier integration-by-parts identity, the
// divergence witnesses for boundary terms, and range stability of the embedding.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "opint/box/momentum.hpp"
#include "opint/box/state.hpp"
#include "opint/core.hpp"
#include "opint/measure.hpp"
#include "opint/quadrature.hpp"

namespace opint::box {

enum class BoundaryDomain { InDomP2n, InDomPprime2n, Neither };

inline std::string_view to_string(BoundaryDomain d)
{
    switch (d) {
    case BoundaryDomain::InDomP2n: return "InDomP2n";
    case BoundaryDomain::InDomPprime2n: return "InDomPprime2n";
    case BoundaryDomain::Neither: return "Neither";
    }
    return "?";
}

/// phi^(k) vanishes at both ends, relative to sup |phi^(k)| (plus the FD uncertainty).
inline bool vanishes_at_ends(const BoundaryData& b, int k, double rel_tol = 1e-9)
{
    const auto i = static_cast<std::size_t>(k);
    const double tol = rel_tol * std::max(1.0, b.scale[i]) + 10.0 * b.uncertainty[i];
    return std::abs(b.left[i]) <= tol && std::abs(b.right[i]) <= tol;
}

/// InDomP2n: derivatives 0..2n-1 vanish at both ends; InDomPprime2n: 0..n-1 vanish.
inline BoundaryDomain boundary_domain_detector(const BoundaryData& b, int n, double rel_tol = 1e-9)
{
    if (n < 1) throw Error(ErrorKind::ConfigError, "order n must be >= 1");
    if (b.order() < 2 * n - 1)
        throw Error(ErrorKind::InsufficientBoundaryData, "need derivatives up to order " + std::to_string(2 * n - 1));
    bool low = true;
    for (int k = 0; k < n; ++k) low = low && vanishes_at_ends(b, k, rel_tol);
    if (!low) return BoundaryDomain::Neither;
    for (int k = n; k < 2 * n; ++k)
        if (!vanishes_at_ends(b, k, rel_tol)) return BoundaryDomain::InDomPprime2n;
    return BoundaryDomain::InDomP2n;
}

inline BoundaryDomain boundary_domain_detector(const BoxState& phi, int n, double rel_tol = 1e-9)
{
    return boundary_domain_detector(phi.boundary(2 * n - 1), n, rel_tol);
}

namespace detail {

/// Composite Simpson F g(x) from samples of g on t_j = j ell / M.
inline cplx simpson_fourier(const std::vector<cplx>& g, double ell, double x)
{
    const auto m = static_cast<int>(g.size()) - 1;
    std::vector<cplx> v(g.size());
    for (int j = 0; j <= m; ++j)
        v[static_cast<std::size_t>(j)] = std::exp(cplx{0.0, -x * ell * j / m}) * g[static_cast<std::size_t>(j)];
    return quad::simpson(v, ell / m) / std::sqrt(2.0 * pi);
}

} // namespace detail

struct IdentityResidual {
    double sup_residual = 0.0;
    double at_x = 0.0;
    double boundary_term_size = 0.0; // sup |boundary term|, shows whether it was exercised
};

/// sup_x |x^n F phi - (-i)^n F phi^(n) - i (-i)^{n-1} (2 pi)^{-1/2} [phi^(n-1)(ell) e^{-i ell x} - phi^(n-1)(0)]|
/// with both transforms computed by composite Simpson on an M-interval grid.
/// n = 1 is the first-derivative identity (rearranged by the factor -i). The
/// boundary coefficient comes from n integrations by parts; it equals i^n only for n = 1.
inline IdentityResidual lemma_a2_identity_check(const BoxState& phi, const std::vector<double>& xs, int M, int n = 1)
{
    if (M < 2 || M % 2 != 0) throw Error(ErrorKind::ConfigError, "Simpson grid needs an even number of intervals");
    if (n < 1) throw Error(ErrorKind::ConfigError, "order must be >= 1");
    if (n > 1) {
        const BoundaryData b = phi.boundary(n - 2);
        for (int k = 0; k <= n - 2; ++k)
            if (!vanishes_at_ends(b, k)) throw Error(ErrorKind::DomainViolation, "phi must lie in dom(P_0^{n-1})");
    }
    const double ell = phi.ell();
    const std::vector<cplx> g0 = phi.sample(M);
    const std::vector<cplx> gn = phi.derived(n).sample(M);
    const cplx lo = phi.derivative(n - 1, 0.0);
    const cplx hi = phi.derivative(n - 1, ell);
    const cplx mn = std::pow(cplx{0.0, -1.0}, n);
    const cplx in = cplx{0.0, 1.0} * std::pow(cplx{0.0, -1.0}, n - 1);
    IdentityResidual r;
    for (double x : xs) {
        const cplx boundary = in / std::sqrt(2.0 * pi) * (hi * std::exp(cplx{0.0, -ell * x}) - lo);
        const cplx res = std::pow(x, n) * detail::simpson_fourier(g0, ell, x) -
                         mn * detail::simpson_fourier(gn, ell, x) - boundary;
        r.boundary_term_size = std::max(r.boundary_term_size, std::abs(boundary));
        if (std::abs(res) > r.sup_residual) {
            r.sup_residual = std::abs(res);
            r.at_x = x;
        }
    }
    return r;
}

struct A3Result {
    cplx a, b;
    double theta = 0.0;
    IntegrationVerdict witness;                // int_1^T |conj(F psi_theta)(x)(a e^{-i ell x} - b)| dx
    std::optional<IntegrationVerdict> density; // int_1^T x G(x) dx, G = |F phi_{a,b}|^2
};

/// theta from the case split: 0 when |a| != |b|, otherwise a = -e^{-i theta ell} b.
inline double lemma_a3_theta(cplx a, cplx b, double ell)
{
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-12 * std::max(std::abs(a), std::abs(b)) || b == cplx{}) return 0.0;
    // e^{-i theta ell} = -a / b
    return -std::arg(-a / b) / ell;
}

/// Partial integrals over [1, T] for the doubling schedule; the witness uses
/// psi_theta(t) = e^{-i theta t} with the closed-form transform.
inline A3Result lemma_a3_divergence_probe(cplx a, cplx b, double ell, const std::vector<double>& horizons,
                                          std::optional<double> theta_override = std::nullopt,
                                          bool with_density = true, const Tolerances& tol = {})
{
    A3Result r;
    r.a = a;
    r.b = b;
    r.theta = theta_override ? *theta_override : lemma_a3_theta(a, b, ell);
    const double th = r.theta;
    QuadraturePolicy pol;
    pol.horizons = horizons;
    pol.symmetric = false;
    pol.lower = 1.0;
    pol.panel_width = 0.5 * pi / ell;
    pol.tol_conv = tol.conv_density;

    DensityMeasure w;
    w.policy = pol;
    w.density = [a, b, ell, th](double x) {
        const double s = x + th;
        // (e^{i s ell} - 1) / (i s) = ell * expm1_over(s ell)
        const cplx conj_f = ell * opint::box::detail::expm1_over(s * ell) / std::sqrt(2.0 * pi);
        return cplx{std::abs(conj_f * (a * std::exp(cplx{0.0, -ell * x}) - b)), 0.0};
    };
    r.witness = integrate([](double) { return cplx{1.0, 0.0}; }, w, tol);

    if (with_density) {
        const BoxState phi = linear_state(a, b, ell);
        DensityMeasure g;
        g.policy = pol;
        g.density = [phi](double x) { return cplx{std::norm(phi.fourier(x)), 0.0}; };
        r.density = integrate([](double x) { return cplx{x, 0.0}; }, g, tol);
    }
    return r;
}

/// Doubling horizons 2^lo .. 2^hi.
inline std::vector<double> doubling_schedule(int lo, int hi)
{
    std::vector<double> t;
    for (int k = lo; k <= hi; ++k) t.push_back(std::ldexp(1.0, k));
    return t;
}

struct RangeStability {
    double outside_mass = 0.0;     // sum over nodes outside [0, ell] of |D U phi|^2 h
    double inside_error = 0.0;     // max |D U phi - phi'| over interior nodes
    double boundary_value = 0.0;   // max(|phi(0)|, |phi(ell)|)
};

/// Embeds phi by zero on [-L, ell + L] (grid step ell / M), applies the central
/// difference, and measures the derivative outside [0, ell].
inline RangeStability range_stability_check(const BoxState& phi, int M, double L)
{
    const double ell = phi.ell();
    const double h = ell / M;
    const auto pad = static_cast<int>(std::ceil(L / h));
    const int total = M + 2 * pad;
    std::vector<cplx> u(static_cast<std::size_t>(total + 1), cplx{});
    const std::vector<cplx> s = phi.sample(M);
    for (int j = 0; j <= M; ++j) u[static_cast<std::size_t>(j + pad)] = s[static_cast<std::size_t>(j)];
    RangeStability r;
    r.boundary_value = std::max(std::abs(s.front()), std::abs(s.back()));
    for (int i = 1; i < total; ++i) {
        const cplx d = (u[static_cast<std::size_t>(i + 1)] - u[static_cast<std::size_t>(i - 1)]) / (2.0 * h);
        const int j = i - pad;
        if (j < 0 || j > M) {
            r.outside_mass += std::norm(d) * h;
        } else if (j > 0 && j < M && phi.analytic()) {
            r.inside_error = std::max(r.inside_error, std::abs(d - phi.derivative(1, j * h)));
        }
    }
    return r;
}

} // namespace opint::box

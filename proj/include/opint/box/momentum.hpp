#pragma once

// The momentum POVM of the confined particle: P(Y) = U^* P_R(Y) U, realized
// through the finite-interval Fourier transform.

#include <cmath>
#include <utility>
#include <vector>

#include "opint/box/state.hpp"
#include "opint/core.hpp"
#include "opint/measure.hpp"
#include "opint/quadrature.hpp"

namespace opint::box {

struct FourierSamples {
    std::vector<double> x;
    std::vector<cplx> value;
    std::vector<double> error; // quadrature error estimate per sample
    std::vector<bool> ok;      // false: flagged sample (non-finite integrand or large error)
    bool bounded = true;       // |F phi| <= (2 pi)^{-1/2} ||phi||_1
    bool continuous = true;    // |F phi(x) - F phi(y)| <= (2 pi)^{-1/2} ||t phi||_1 |x - y|
};

/// Numerical F phi on the given points. Analytic states use fixed GK15 panels
/// resolving exp(-i x t) phi(t); grid states use composite Simpson.
inline FourierSamples fourier_transform(const BoxState& phi, const std::vector<double>& xs)
{
    FourierSamples out;
    out.x = xs;
    const double ell = phi.ell();
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    for (double x : xs) {
        cplx v{0.0, 0.0};
        double err = 0.0;
        bool ok = true;
        if (phi.analytic()) {
            const double freq = std::abs(x) + phi.max_frequency();
            const auto n = static_cast<std::size_t>(std::max(8.0, std::ceil(freq * ell / (0.5 * pi))));
            auto g = [&](double t) { return std::exp(cplx{0.0, -x * t}) * phi(t); };
            const double w = ell / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double lo = w * static_cast<double>(i);
                const auto r = quad::gk15(g, lo, i + 1 == n ? ell : lo + w);
                v += r.value;
                err += r.error;
                ok = ok && r.ok;
            }
        } else {
            const int m = phi.grid_intervals();
            const auto& s = phi.samples();
            std::vector<cplx> g(s.size());
            for (int j = 0; j <= m; ++j)
                g[static_cast<std::size_t>(j)] = std::exp(cplx{0.0, -x * ell * j / m}) * s[static_cast<std::size_t>(j)];
            v = quad::simpson(g, ell / m);
            // Step-doubling estimate: Simpson on every other node.
            std::vector<cplx> coarse;
            for (std::size_t j = 0; j < g.size(); j += 2) coarse.push_back(g[j]);
            if (coarse.size() >= 3 && coarse.size() % 2 == 1) err = std::abs(v - quad::simpson(coarse, 2.0 * ell / m)) / 15.0;
        }
        ok = ok && is_finite(v) && err <= 1e-6 * std::max(1.0, std::abs(v));
        out.value.push_back(v * norm);
        out.error.push_back(err * norm);
        out.ok.push_back(ok);
    }
    const double bound = norm * phi.weighted_l1(0);
    const double lip = norm * phi.weighted_l1(1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(out.value[i]) > bound * (1.0 + 1e-10) + 1e-14) out.bounded = false;
        if (i > 0 && std::abs(out.value[i] - out.value[i - 1]) >
                         lip * std::abs(xs[i] - xs[i - 1]) * (1.0 + 1e-10) + 1e-14)
            out.continuous = false;
    }
    return out;
}

/// Policy for integrals over R: panels of width pi / (2 ell) up to the cutoff,
/// horizons cutoff/8 .. cutoff, algebraic tails averaged over the period 2 pi / ell.
inline QuadraturePolicy momentum_policy(const BoxConfig& cfg)
{
    QuadraturePolicy p;
    p.x_max = cfg.cutoff();
    p.doublings = 3;
    p.symmetric = true;
    p.panel_width = 0.5 * pi / cfg.ell;
    p.tail_model = true;
    p.tail_period = 2.0 * pi / cfg.ell;
    p.tol_conv = 1e-5;
    return p;
}

/// The density x -> |F phi(x)|^2 of P_{phi,phi}, with its fitted decay exponent.
struct MomentumDensity {
    ScalarFunction sampler;
    double tail_exponent = 0.0; // p in |F phi|^2 ~ C x^{-p} on [X/2, X]
};

inline MomentumDensity momentum_density(const BoxState& phi, const BoxConfig& cfg)
{
    MomentumDensity d;
    d.sampler = [phi](double x) { return cplx{std::norm(phi.fourier(x)), 0.0}; };
    const double X = cfg.cutoff();
    const double period = 2.0 * pi / cfg.ell;
    std::vector<double> lx, ly;
    for (double b = X; b - period >= 0.5 * X; b -= period) {
        const double avg = quad::panels(d.sampler, b - period, b, 0.5 * pi / cfg.ell).value.real() / period;
        if (avg > 0.0) {
            lx.push_back(std::log(b - 0.5 * period));
            ly.push_back(std::log(avg));
        }
    }
    if (lx.size() >= 2) d.tail_exponent = -opint::detail::least_squares(lx, ly).slope;
    return d;
}

/// The complex density conj(F psi) F phi of P_{psi,phi}.
inline DensityMeasure momentum_measure(const BoxState& psi, const BoxState& phi, const BoxConfig& cfg)
{
    DensityMeasure m;
    m.density = [psi, phi](double x) { return std::conj(psi.fourier(x)) * phi.fourier(x); };
    m.policy = momentum_policy(cfg);
    return m;
}

/// P_{psi,phi}(Y) for Y a finite union of intervals [a, b].
inline cplx momentum_scalar_measure(const BoxState& psi, const BoxState& phi,
                                    const std::vector<std::pair<double, double>>& y, const BoxConfig& cfg)
{
    const DensityMeasure m = momentum_measure(psi, phi, cfg);
    cplx s{0.0, 0.0};
    for (const auto& [a, b] : y) {
        if (!(a <= b)) throw Error(ErrorKind::ConfigError, "interval endpoints out of order");
        const auto r = quad::panels(m.density, a, b, m.policy.panel_width);
        if (!r.ok) throw Error(ErrorKind::NonEvaluable, "momentum density not finite on the interval");
        s += r.value;
    }
    return s;
}

/// P_{psi,phi}(R): the cutoff interval plus the fitted tail.
inline IntegrationVerdict momentum_total(const BoxState& psi, const BoxState& phi, const BoxConfig& cfg)
{
    return integrate([](double) { return cplx{1.0, 0.0}; }, momentum_measure(psi, phi, cfg));
}

/// int x^k |F phi(x)|^2 dx with the algebraic tail model; Divergent when the
/// partial integrals grow.
inline IntegrationVerdict moment(const BoxState& phi, int k, const BoxConfig& cfg, const Tolerances& tol = {})
{
    DensityMeasure m;
    m.density = momentum_density(phi, cfg).sampler;
    m.policy = momentum_policy(cfg);
    m.policy.tol_conv = tol.conv_density;
    return integrate([k](double x) { return cplx{std::pow(x, k), 0.0}; }, m, tol);
}

struct VarianceFreeResult {
    double second_moment = 0.0;
    double derivative_norm_sq = 0.0; // ||P_0 phi||^2
    double defect = 0.0;
    double relative_defect = 0.0;
    Status status = Status::Inconclusive;
    bool within_tolerance = false;
};

/// |int x^2 dP_{phi,phi} - ||P_0 phi||^2| for phi with vanishing endpoint values.
inline VarianceFreeResult variance_free_check(const BoxState& phi, const BoxConfig& cfg)
{
    const BoundaryData b = phi.boundary(0);
    const double tol_bc = 1e-9 * std::max(1.0, b.scale[0]);
    if (std::abs(b.left[0]) > tol_bc || std::abs(b.right[0]) > tol_bc)
        throw Error(ErrorKind::DomainViolation, "variance-freeness check needs phi(0) = phi(ell) = 0");
    VarianceFreeResult r;
    const IntegrationVerdict v = moment(phi, 2, cfg);
    r.second_moment = v.value.real();
    r.status = v.status;
    r.derivative_norm_sq = phi.norm_sq(1);
    r.defect = std::abs(r.second_moment - r.derivative_norm_sq);
    r.relative_defect = r.defect / std::max(r.derivative_norm_sq, 1e-300);
    r.within_tolerance = r.defect <= cfg.tol_quad * (1.0 + r.derivative_norm_sq);
    return r;
}

} // namespace opint::box

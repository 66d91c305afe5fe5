#pragma once

// Panel quadrature used by the density measures and the Fourier samplers.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "opint/core.hpp"

namespace opint::quad {

namespace detail {
// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
} // namespace detail

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    bool ok = true;       // false if a sample was not finite
    double abs_sum = 0.0; // sum of |panel integrals|, a magnitude scale for cancellation
};

/// One Gauss-Kronrod 15 panel on [a, b]; error is |K15 - G7|.
template <class F>
QuadResult gk15(F&& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx kron = fc * detail::wgk[7];
    cplx gauss = fc * detail::wg[3];
    bool ok = is_finite(fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = h * detail::xgk[j];
        const cplx f1 = f(c - dx);
        const cplx f2 = f(c + dx);
        ok = ok && is_finite(f1) && is_finite(f2);
        kron += detail::wgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += detail::wg[j / 2] * (f1 + f2);
    }
    return {kron * h, std::abs((kron - gauss) * h), ok};
}

/// Recursive bisection until |K15 - G7| <= max(abs_tol, rel_tol * |I|) or depth runs out.
template <class F>
QuadResult adaptive(F&& f, double a, double b, double abs_tol, double rel_tol, int max_depth = 12)
{
    QuadResult whole = gk15(f, a, b);
    if (!whole.ok || max_depth <= 0 ||
        whole.error <= std::max(abs_tol, rel_tol * std::abs(whole.value)))
        return whole;
    const double m = 0.5 * (a + b);
    QuadResult left = adaptive(f, a, m, 0.5 * abs_tol, rel_tol, max_depth - 1);
    QuadResult right = adaptive(f, m, b, 0.5 * abs_tol, rel_tol, max_depth - 1);
    return {left.value + right.value, left.error + right.error, left.ok && right.ok};
}

/// Splits [a, b] into equal panels no wider than max_width and integrates each adaptively.
template <class F>
QuadResult panels(F&& f, double a, double b, double max_width, double abs_tol = 1e-14,
                  double rel_tol = 1e-12)
{
    QuadResult total;
    if (b <= a) return total;
    const auto count = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    const std::size_t n = count == 0 ? 1 : count;
    const double w = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + w * static_cast<double>(i);
        const double hi = (i + 1 == n) ? b : lo + w;
        QuadResult part = adaptive(f, lo, hi, abs_tol / static_cast<double>(n), rel_tol);
        total.value += part.value;
        total.error += part.error;
        total.abs_sum += std::abs(part.value);
        total.ok = total.ok && part.ok;
    }
    return total;
}

/// Fixed (non-adaptive) K15 panels; used where the integrand is smooth and cost matters.
template <class F>
cplx fixed_panels(F&& f, double a, double b, std::size_t n)
{
    cplx total{0.0, 0.0};
    if (n == 0) n = 1;
    const double w = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + w * static_cast<double>(i);
        total += gk15(f, lo, i + 1 == n ? b : lo + w).value;
    }
    return total;
}

/// Composite Simpson rule on a uniform grid with an even number of intervals.
inline cplx simpson(std::span<const cplx> samples, double h)
{
    const std::size_t n = samples.size();
    if (n < 3 || n % 2 == 0)
        throw Error(ErrorKind::ConfigError, "Simpson rule needs an odd number (>= 3) of samples");
    cplx acc = samples.front() + samples.back();
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
    return acc * (h / 3.0);
}

} // namespace opint::quad

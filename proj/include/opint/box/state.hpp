#pragma once

// States of a particle confined to [0, ell]: analytic (polynomial plus complex
// exponentials, with exact derivatives and Fourier transforms) or sampled.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opint/core.hpp"
#include "opint/quadrature.hpp"

namespace opint::box {

struct BoxConfig {
    double ell = pi;
    int N = 16;        // sine-basis size
    int M = 2000;      // grid intervals on [0, ell]
    double x_max = 0;  // momentum cutoff; <= 0 means 200 / ell
    double tol_quad = 1e-3;
    double tol_eig = 5e-3;
    double mass = 1.0;

    double cutoff() const { return x_max > 0 ? x_max : 200.0 / ell; }
    double h() const { return ell / M; }

    void validate() const
    {
        if (!(ell > 0) || N < 1 || M < 1 || !(tol_quad > 0) || !(tol_eig > 0) || !(mass > 0))
            throw Error(ErrorKind::ConfigError, "box parameters must be positive");
        if (M < 4 * N) throw Error(ErrorKind::ConfigError, "grid too coarse: M must be >= 4N");
    }
};

/// c * exp(i kappa t)
struct ExpTerm {
    cplx c;
    double kappa;
};

/// Derivative values phi^(k)(0) and phi^(k)(ell), k = 0..K.
struct BoundaryData {
    std::vector<cplx> left;
    std::vector<cplx> right;
    std::vector<double> scale;       // sup_t |phi^(k)(t)| used as the reference size
    std::vector<double> uncertainty; // zero for analytic data
    bool analytic = true;

    int order() const { return static_cast<int>(left.size()) - 1; }
};

namespace detail {

inline double sinc(double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; }

/// (exp(i theta) - 1) / (i theta), stable for small theta.
inline cplx expm1_over(double theta)
{
    const double s = sinc(0.5 * theta);
    return {sinc(theta), 0.5 * theta * s * s};
}

/// int_0^ell t^j exp(-i x t) dt for j = 0..deg.
inline std::vector<cplx> power_moments(double x, double ell, int deg)
{
    std::vector<cplx> out(static_cast<std::size_t>(deg + 1));
    const double xl = std::abs(x) * ell;
    if (xl <= std::max(8.0, 2.0 * deg)) {
        for (int j = 0; j <= deg; ++j) {
            cplx sum{0.0, 0.0};
            cplx term{std::pow(ell, j + 1), 0.0}; // (-i x)^m ell^{j+m+1} / m!
            for (int m = 0; m < 200; ++m) {
                const cplx add = term / static_cast<double>(j + m + 1);
                sum += add;
                if (m > xl && std::abs(add) <= 1e-18 * std::abs(sum)) break;
                term *= cplx{0.0, -x} * ell / static_cast<double>(m + 1);
            }
            out[static_cast<std::size_t>(j)] = sum;
        }
        return out;
    }
    const cplx e = std::exp(cplx{0.0, -x * ell});
    const cplx mix{0.0, -x};
    out[0] = (e - 1.0) / mix;
    for (int j = 1; j <= deg; ++j)
        out[static_cast<std::size_t>(j)] =
            (std::pow(ell, j) * e - static_cast<double>(j) * out[static_cast<std::size_t>(j - 1)]) / mix;
    return out;
}

/// Finite-difference weights at z for derivatives 0..m from nodes xs (Fornberg).
inline std::vector<std::vector<double>> fd_weights(double z, const std::vector<double>& xs, int m)
{
    const auto n = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(static_cast<std::size_t>(m + 1), std::vector<double>(xs.size(), 0.0));
    double c1 = 1.0, c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                        c1 * (k * c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)] -
                              c5 * c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i - 1)]) / c2;
                c[0][static_cast<std::size_t>(i)] = -c1 * c5 * c[0][static_cast<std::size_t>(i - 1)] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                    (c4 * c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] -
                     k * c[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)]) / c3;
            c[0][static_cast<std::size_t>(j)] = c4 * c[0][static_cast<std::size_t>(j)] / c3;
        }
        c1 = c2;
    }
    return c;
}

} // namespace detail

class BoxState {
public:
    /// Analytic state sum_j poly[j] t^j + sum_k c_k exp(i kappa_k t).
    BoxState(double ell, std::vector<cplx> poly, std::vector<ExpTerm> exps, std::string name = {})
        : ell_(ell), poly_(std::move(poly)), exps_(std::move(exps)), name_(std::move(name))
    {
        if (!(ell > 0)) throw Error(ErrorKind::ConfigError, "interval length must be positive");
    }

    /// Sampled state on the uniform grid t_j = j ell / (n - 1).
    static BoxState from_grid(double ell, std::vector<cplx> samples, std::string name = {})
    {
        if (samples.size() < 9 || samples.size() % 2 == 0)
            throw Error(ErrorKind::ConfigError, "grid states need an odd number (>= 9) of samples");
        BoxState s(ell, {}, {}, std::move(name));
        s.samples_ = std::move(samples);
        return s;
    }

    bool analytic() const { return !samples_; }
    double ell() const { return ell_; }
    const std::string& name() const { return name_; }
    const std::vector<cplx>& polynomial() const { return poly_; }
    const std::vector<ExpTerm>& exponentials() const { return exps_; }
    const std::vector<cplx>& samples() const { return *samples_; }

    BoxState named(std::string n) const
    {
        BoxState s = *this;
        s.name_ = std::move(n);
        return s;
    }

    /// phi^(k)(t) for analytic states; value interpolation is not offered for grids.
    cplx derivative(int k, double t) const
    {
        require_analytic();
        cplx v{0.0, 0.0};
        for (std::size_t j = static_cast<std::size_t>(k); j < poly_.size(); ++j) {
            double fall = 1.0;
            for (int r = 0; r < k; ++r) fall *= static_cast<double>(j - static_cast<std::size_t>(r));
            v += poly_[j] * fall * std::pow(t, static_cast<double>(j) - k);
        }
        for (const ExpTerm& e : exps_) v += e.c * std::pow(cplx{0.0, e.kappa}, k) * std::exp(cplx{0.0, e.kappa * t});
        return v;
    }

    cplx operator()(double t) const { return derivative(0, t); }

    /// The state phi^(k) (exact).
    BoxState derived(int k) const
    {
        require_analytic();
        std::vector<cplx> p;
        for (std::size_t j = static_cast<std::size_t>(k); j < poly_.size(); ++j) {
            double fall = 1.0;
            for (int r = 0; r < k; ++r) fall *= static_cast<double>(j - static_cast<std::size_t>(r));
            p.push_back(poly_[j] * fall);
        }
        std::vector<ExpTerm> e;
        for (const ExpTerm& t : exps_) e.push_back({t.c * std::pow(cplx{0.0, t.kappa}, k), t.kappa});
        return BoxState(ell_, std::move(p), std::move(e), name_ + "^(" + std::to_string(k) + ")");
    }

    BoxState scaled(cplx a) const
    {
        BoxState s = *this;
        for (cplx& c : s.poly_) c *= a;
        for (ExpTerm& e : s.exps_) e.c *= a;
        if (s.samples_)
            for (cplx& c : *s.samples_) c *= a;
        return s;
    }

    friend BoxState operator+(const BoxState& a, const BoxState& b)
    {
        a.require_analytic();
        b.require_analytic();
        if (a.ell_ != b.ell_) throw Error(ErrorKind::DimensionMismatch, "states on different intervals");
        std::vector<cplx> p(std::max(a.poly_.size(), b.poly_.size()), cplx{});
        for (std::size_t j = 0; j < a.poly_.size(); ++j) p[j] += a.poly_[j];
        for (std::size_t j = 0; j < b.poly_.size(); ++j) p[j] += b.poly_[j];
        std::vector<ExpTerm> e = a.exps_;
        e.insert(e.end(), b.exps_.begin(), b.exps_.end());
        return BoxState(a.ell_, std::move(p), std::move(e), a.name_ + "+" + b.name_);
    }

    /// Closed-form (F phi)(x) = (2 pi)^{-1/2} int_0^ell exp(-i x t) phi(t) dt.
    cplx fourier(double x) const
    {
        require_analytic();
        cplx v{0.0, 0.0};
        if (!poly_.empty()) {
            const auto m = detail::power_moments(x, ell_, static_cast<int>(poly_.size()) - 1);
            for (std::size_t j = 0; j < poly_.size(); ++j) v += poly_[j] * m[j];
        }
        for (const ExpTerm& e : exps_) v += e.c * ell_ * detail::expm1_over((e.kappa - x) * ell_);
        return v / std::sqrt(2.0 * pi);
    }

    /// Samples phi(t_j), t_j = j ell / m, j = 0..m.
    std::vector<cplx> sample(int m) const
    {
        if (samples_) {
            if (static_cast<int>(samples_->size()) != m + 1)
                throw Error(ErrorKind::DimensionMismatch, "grid state sampled at a different resolution");
            return *samples_;
        }
        std::vector<cplx> out(static_cast<std::size_t>(m + 1));
        for (int j = 0; j <= m; ++j) out[static_cast<std::size_t>(j)] = (*this)(ell_ * j / m);
        return out;
    }

    int grid_intervals() const { return samples_ ? static_cast<int>(samples_->size()) - 1 : 0; }

    /// ||phi^(k)||^2 by quadrature (analytic) or composite Simpson (grid, k = 0).
    double norm_sq(int k = 0) const
    {
        if (samples_) {
            if (k != 0) throw Error(ErrorKind::ConfigError, "grid states only provide k = 0 norms");
            std::vector<cplx> sq;
            for (const cplx& c : *samples_) sq.emplace_back(std::norm(c), 0.0);
            return quad::simpson(sq, ell_ / grid_intervals()).real();
        }
        auto g = [this, k](double t) { return cplx{std::norm(derivative(k, t)), 0.0}; };
        return quad::panels(g, 0.0, ell_, ell_ / std::max<double>(8.0, 2.0 * max_frequency() * ell_ / pi)).value.real();
    }

    double norm() const { return std::sqrt(norm_sq(0)); }

    /// int_0^ell t^p |phi(t)| dt, used for a priori bounds on F phi.
    double weighted_l1(int p) const
    {
        if (samples_) {
            std::vector<cplx> v;
            const int m = grid_intervals();
            for (int j = 0; j <= m; ++j)
                v.emplace_back(std::pow(ell_ * j / m, p) * std::abs((*samples_)[static_cast<std::size_t>(j)]), 0.0);
            return quad::simpson(v, ell_ / m).real();
        }
        auto g = [this, p](double t) { return cplx{std::pow(t, p) * std::abs((*this)(t)), 0.0}; };
        return quad::panels(g, 0.0, ell_, ell_ / 16.0).value.real();
    }

    double max_frequency() const
    {
        double k = 0.0;
        for (const ExpTerm& e : exps_) k = std::max(k, std::abs(e.kappa));
        return k;
    }

    /// Boundary derivatives k = 0..K: exact for analytic states, one-sided
    /// finite differences (with a stencil-difference uncertainty) for grids.
    BoundaryData boundary(int K) const
    {
        if (K < 0) throw Error(ErrorKind::InsufficientBoundaryData, "negative derivative order");
        BoundaryData b;
        if (!samples_) {
            for (int k = 0; k <= K; ++k) {
                b.left.push_back(derivative(k, 0.0));
                b.right.push_back(derivative(k, ell_));
                double s = 0.0;
                for (int j = 0; j <= 512; ++j) s = std::max(s, std::abs(derivative(k, ell_ * j / 512.0)));
                b.scale.push_back(s);
                b.uncertainty.push_back(0.0);
            }
            return b;
        }
        b.analytic = false;
        const int m = grid_intervals();
        const int width = K + 4;
        if (m + 1 < width + 1) throw Error(ErrorKind::InsufficientBoundaryData, "grid too short for the stencil");
        const double h = ell_ / m;
        auto estimate = [&](int w, bool right, int k) {
            std::vector<double> xs;
            for (int j = 0; j <= w; ++j) xs.push_back(j * h);
            const auto wts = detail::fd_weights(0.0, xs, k);
            cplx v{0.0, 0.0};
            for (int j = 0; j <= w; ++j) {
                const cplx s = (*samples_)[static_cast<std::size_t>(right ? m - j : j)];
                v += wts[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * s;
            }
            return right && (k % 2 == 1) ? -v : v; // mirrored nodes flip odd derivatives
        };
        for (int k = 0; k <= K; ++k) {
            const cplx l = estimate(width, false, k), r = estimate(width, true, k);
            b.left.push_back(l);
            b.right.push_back(r);
            b.uncertainty.push_back(std::max(std::abs(l - estimate(width - 1, false, k)),
                                             std::abs(r - estimate(width - 1, true, k))));
            double s = 0.0;
            for (int j = 0; j + width <= m; j += std::max(1, m / 64)) {
                std::vector<double> xs;
                for (int i = 0; i <= width; ++i) xs.push_back(i * h);
                const auto wts = detail::fd_weights(0.0, xs, k);
                cplx v{0.0, 0.0};
                for (int i = 0; i <= width; ++i)
                    v += wts[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                         (*samples_)[static_cast<std::size_t>(j + i)];
                s = std::max(s, std::abs(v));
            }
            b.scale.push_back(s);
        }
        return b;
    }

private:
    void require_analytic() const
    {
        if (samples_) throw Error(ErrorKind::ConfigError, "operation needs an analytic state");
    }

    double ell_;
    std::vector<cplx> poly_;
    std::vector<ExpTerm> exps_;
    std::string name_;
    std::optional<std::vector<cplx>> samples_;
};

/// psi_n(t) = sqrt(2/ell) sin(n pi t / ell), n >= 1.
inline BoxState sine_state(int n, double ell)
{
    if (n < 1) throw Error(ErrorKind::IndexOutOfRange, "sine index must be >= 1");
    const double k = n * pi / ell;
    const cplx c = std::sqrt(2.0 / ell) / cplx{0.0, 2.0};
    return BoxState(ell, {}, {{c, k}, {-c, -k}}, "psi" + std::to_string(n));
}

/// sum_{n>=1} coeffs[n-1] psi_n.
inline BoxState sine_series(const std::vector<cplx>& coeffs, double ell, std::string name = "series")
{
    std::vector<ExpTerm> e;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == cplx{}) continue;
        const BoxState mode = sine_state(static_cast<int>(i) + 1, ell);
        for (const ExpTerm& t : mode.exponentials()) e.push_back({coeffs[i] * t.c, t.kappa});
    }
    return BoxState(ell, {}, std::move(e), std::move(name));
}

/// phi_{a,b}(t) = (b - a) t / ell + a.
inline BoxState linear_state(cplx a, cplx b, double ell)
{
    return BoxState(ell, {a, (b - a) / ell}, {}, "phi_ab");
}

/// t (ell - t)
inline BoxState parabola_state(double ell) { return BoxState(ell, {0.0, ell, -1.0}, {}, "x(l-x)"); }

/// t^2 (ell - t)^2
inline BoxState bump_state(double ell)
{
    return BoxState(ell, {0.0, 0.0, ell * ell, -2.0 * ell, 1.0}, {}, "x^2(l-x)^2");
}

/// exp(-i theta t)
inline BoxState plane_wave(double theta, double ell)
{
    return BoxState(ell, {}, {{1.0, -theta}}, "exp(-i theta t)");
}

/// Sine coefficients c_n = <psi_n | phi>, n = 1..N, by the trapezoid rule on the
/// grid (exact for states band-limited below the grid Nyquist index).
inline std::vector<cplx> sine_coefficients(const std::vector<cplx>& samples, double ell, int N)
{
    const int m = static_cast<int>(samples.size()) - 1;
    if (m < 2 * N) throw Error(ErrorKind::ConfigError, "grid too coarse for the requested sine modes");
    const double h = ell / m;
    std::vector<cplx> c(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        cplx s{0.0, 0.0};
        for (int j = 1; j < m; ++j) s += std::sin(n * pi * j / m) * samples[static_cast<std::size_t>(j)];
        c[static_cast<std::size_t>(n - 1)] = std::sqrt(2.0 / ell) * h * s;
    }
    return c;
}

} // namespace opint::box

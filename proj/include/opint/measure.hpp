#pragma once

// Complex and positive measures on atomic and density-represented outcome
// spaces, with integration and convergence/divergence classification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/QR>

#include "opint/core.hpp"
#include "opint/quadrature.hpp"

namespace opint {

using ScalarFunction = std::function<cplx(double)>;

/// Finitely many atoms on the real line with complex weights.
struct AtomicMeasure {
    std::vector<double> locations;
    std::vector<cplx> weights;

    AtomicMeasure() = default;
    AtomicMeasure(std::vector<double> locs, std::vector<cplx> ws)
        : locations(std::move(locs)), weights(std::move(ws))
    {
        if (locations.size() != weights.size())
            throw Error(ErrorKind::DimensionMismatch, "atom locations and weights differ in length");
        for (const cplx& w : weights)
            if (!is_finite(w)) throw Error(ErrorKind::NonEvaluable, "atomic weight is not finite");
    }

    /// Positive specialization: rejects negative weights.
    static AtomicMeasure positive(std::vector<double> locs, const std::vector<double>& ws)
    {
        std::vector<cplx> cw;
        cw.reserve(ws.size());
        for (double w : ws) {
            if (!(w >= 0.0)) throw Error(ErrorKind::NotPositive, "positive measure with negative weight");
            cw.emplace_back(w, 0.0);
        }
        return {std::move(locs), std::move(cw)};
    }

    static AtomicMeasure point_mass(double location, cplx weight = 1.0)
    {
        return {{location}, {weight}};
    }

    std::size_t size() const { return weights.size(); }

    cplx total() const
    {
        cplx s{0.0, 0.0};
        for (const cplx& w : weights) s += w;
        return s;
    }

    double variation_mass() const
    {
        double s = 0.0;
        for (const cplx& w : weights) s += std::abs(w);
        return s;
    }

    bool is_positive(double tol = 0.0) const
    {
        return std::all_of(weights.begin(), weights.end(), [tol](const cplx& w) {
            return w.real() >= -tol && std::abs(w.imag()) <= tol;
        });
    }

    AtomicMeasure scaled(cplx c) const
    {
        AtomicMeasure out = *this;
        for (cplx& w : out.weights) w *= c;
        return out;
    }
};

/// A countable atomic measure given block-by-block: index n contributes block(n).
/// Integration sums blocks over doubling horizons up to n_max.
struct AtomicSequence {
    std::function<AtomicMeasure(std::size_t)> block;
    std::size_t first_horizon = 1024;
    std::size_t n_max = 1'000'000;
    /// When set, blocks at or beyond this index are known to vanish.
    std::optional<std::size_t> finite_length;
};

/// Quadrature settings for density measures on the real line.
struct QuadraturePolicy {
    double x_max = 64.0;       // final horizon
    int doublings = 3;         // horizons x_max / 2^doublings, ..., x_max
    bool symmetric = true;     // integrate over [-T, T]; otherwise over [lower, T]
    double lower = 0.0;
    double panel_width = 0.5;  // oscillation-aware maximal panel width
    bool tail_model = false;   // add a fitted algebraic tail beyond each horizon
    double tail_period = 0.0;  // averaging window for the tail fit (0: T/16)
    std::vector<double> horizons; // explicit schedule; overrides x_max/doublings
    double tol_conv = 1e-5;

    std::vector<double> schedule() const
    {
        if (!horizons.empty()) return horizons;
        std::vector<double> out;
        for (int j = doublings; j >= 0; --j) out.push_back(x_max / std::ldexp(1.0, j));
        return out;
    }
};

/// A measure with a (complex) Lebesgue density on the real line.
struct DensityMeasure {
    ScalarFunction density;
    std::optional<std::pair<double, double>> support_hint; // nullopt: unbounded
    QuadraturePolicy policy;
};

using ComplexMeasure = std::variant<AtomicMeasure, AtomicSequence, DensityMeasure>;

enum class Status { Converged, Divergent, Inconclusive };

inline std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Converged: return "Converged";
    case Status::Divergent: return "Divergent";
    case Status::Inconclusive: return "Inconclusive";
    }
    return "?";
}

/// Least-squares fit y = slope * log(T) + intercept with RMS residual.
/// power_law: y was log|S| rather than |S|.
struct LogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    bool power_law = false;
};

struct EvidenceRow {
    double horizon = 0.0;
    cplx partial{0.0, 0.0};
};

struct IntegrationVerdict {
    cplx value{0.0, 0.0};
    Status status = Status::Inconclusive;
    std::vector<EvidenceRow> evidence;
    std::optional<LogFit> fit;
    std::optional<cplx> extrapolated; // Aitken estimate for atomic series
    double tail_exponent = 0.0;       // fitted decay of |integrand| (density tail model)

    bool converged() const { return status == Status::Converged; }
    bool divergent() const { return status == Status::Divergent; }
};

/// Writes the evidence table as CSV (horizon, partial_real, partial_imag).
inline void write_evidence_csv(std::ostream& os, const IntegrationVerdict& v)
{
    os << "horizon,partial_real,partial_imag\n";
    os.precision(17);
    for (const EvidenceRow& r : v.evidence)
        os << r.horizon << ',' << r.partial.real() << ',' << r.partial.imag() << '\n';
}

namespace detail {

inline LogFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys)
{
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    LogFit fit;
    fit.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

/// |a - b| <= tol * max(|a|, |b|, floor * scale); `scale` is the magnitude of
/// the summed contributions, so results lost in cancellation still compare.
inline bool relatively_close(cplx a, cplx b, double tol, double scale = 0.0, double floor = 1e-9)
{
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor * scale});
}

/// Divergence test over the whole schedule: a positive log-slope (linear in
/// log T, or power law) exceeding margin * residual, over >= 3 doublings, with
/// increments that do not decay.
inline std::optional<LogFit> divergence_fit(const std::vector<EvidenceRow>& rows, const Tolerances& tol)
{
    if (rows.size() < 4) return std::nullopt;
    std::vector<double> lx, y, ly;
    for (const EvidenceRow& r : rows) {
        lx.push_back(std::log(r.horizon));
        y.push_back(std::abs(r.partial));
    }
    // Growth per unit log T; the final horizon may be clipped at n_max.
    const std::size_t k = y.size() - 1;
    const double first_inc = (y[1] - y[0]) / (lx[1] - lx[0]);
    const double last_inc = (y[k] - y[k - 1]) / (lx[k] - lx[k - 1]);
    if (!(first_inc > 0.0) || last_inc < tol.persistence * first_inc) return std::nullopt;

    LogFit lin = least_squares(lx, y);
    if (lin.slope > 0.0 && lin.slope > tol.divergence_margin * lin.residual) return lin;

    if (std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; })) {
        for (double v : y) ly.push_back(std::log(v));
        LogFit pw = least_squares(lx, ly);
        pw.power_law = true;
        if (pw.slope > 0.0 && pw.slope > tol.divergence_margin * pw.residual) return pw;
    }
    return std::nullopt;
}

/// Aitken extrapolation of doubling-horizon partial sums; nullopt when the
/// increments do not decay geometrically in the doubling index.
inline std::optional<cplx> aitken(const std::vector<EvidenceRow>& rows, std::size_t upto)
{
    if (upto < 2) return std::nullopt;
    const cplx d1 = rows[upto].partial - rows[upto - 1].partial;
    const cplx d0 = rows[upto - 1].partial - rows[upto - 2].partial;
    if (std::abs(d1) == 0.0) return rows[upto].partial;
    if (std::abs(d0) == 0.0) return std::nullopt;
    const cplx r = d1 / d0;
    if (std::abs(r) > 0.9) return std::nullopt;
    return rows[upto].partial + d1 * r / (1.0 - r);
}

inline cplx checked(cplx v, double at)
{
    if (!is_finite(v))
        throw Error(ErrorKind::NonEvaluable, "integrand not finite at x = " + std::to_string(at));
    return v;
}

} // namespace detail

/// Exact finite sum: value = sum f(w) weight(w), always Converged.
inline IntegrationVerdict integrate(const ScalarFunction& f, const AtomicMeasure& mu)
{
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.weights[i] == cplx{0.0, 0.0}) continue;
        s += detail::checked(f(mu.locations[i]), mu.locations[i]) * mu.weights[i];
    }
    IntegrationVerdict v;
    v.value = s;
    v.status = Status::Converged;
    v.evidence.push_back({static_cast<double>(mu.size()), s});
    return v;
}

/// Partial sums at doubling horizons; HorizonExhausted maps to Inconclusive.
inline IntegrationVerdict integrate(const ScalarFunction& f, const AtomicSequence& mu,
                                    const Tolerances& tol = {})
{
    IntegrationVerdict v;
    std::size_t limit = mu.n_max;
    if (mu.finite_length) limit = std::min(limit, *mu.finite_length);
    cplx s{0.0, 0.0};
    double scale = 0.0;
    std::size_t n = 0;
    std::size_t horizon = std::max<std::size_t>(1, std::min(mu.first_horizon, limit));
    std::optional<cplx> prev_extra;
    for (;;) {
        const std::size_t target = std::min(horizon, limit);
        for (; n < target; ++n) {
            const AtomicMeasure b = mu.block(n);
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (b.weights[i] == cplx{0.0, 0.0}) continue;
                const cplx term = detail::checked(f(b.locations[i]), b.locations[i]) * b.weights[i];
                s += term;
                scale += std::abs(term);
            }
        }
        v.evidence.push_back({static_cast<double>(target), s});
        v.value = s;
        if (mu.finite_length && target >= *mu.finite_length) {
            v.status = Status::Converged;
            return v;
        }
        const std::size_t k = v.evidence.size() - 1;
        if (k >= 1 && detail::relatively_close(v.evidence[k].partial, v.evidence[k - 1].partial,
                                               tol.conv_atomic, scale)) {
            v.status = Status::Converged;
            return v;
        }
        const auto extra = detail::aitken(v.evidence, k);
        if (extra && prev_extra && detail::relatively_close(*extra, *prev_extra, tol.conv_atomic)) {
            v.status = Status::Converged;
            v.extrapolated = extra;
            v.value = *extra;
            return v;
        }
        prev_extra = extra;
        if (target >= limit) break;
        horizon *= 2;
    }
    if (auto fit = detail::divergence_fit(v.evidence, tol)) {
        v.status = Status::Divergent;
        v.fit = fit;
    } else {
        v.status = Status::Inconclusive;
    }
    return v;
}

namespace detail {

/// Tail model for oscillatory algebraic integrands. Integrals W_j of g over
/// windows of one period, aligned downward from hi, are fitted as
/// log|W| = a - q log x + sum_j c_j / x^j (j up to 4, as the window count allows), which
/// absorbs the envelope/oscillation coupling a pure power law would misread
/// as a shifted exponent. Returns the tail integral beyond hi (phase of the
/// outermost window) and q; nullopt if fewer than three windows fit or a
/// window integral vanishes; (0, q) when q <= 1.
template <class G>
std::optional<std::pair<cplx, double>> tail_beyond(G&& g, double lo, double hi, double period,
                                                   double panel_width)
{
    const double width = period > 0.0 ? period : (hi - lo) / 16.0;
    const auto windows = static_cast<std::size_t>(std::floor((hi - lo) / width));
    if (windows < 3) return std::nullopt;
    const int terms = static_cast<int>(std::min<std::size_t>(windows - 1, 6));
    Eigen::MatrixXd a(static_cast<Eigen::Index>(windows), terms);
    Eigen::VectorXd y(static_cast<Eigen::Index>(windows));
    cplx outer{0.0, 0.0};
    for (std::size_t w = 0; w < windows; ++w) {
        const double b = hi - width * static_cast<double>(w);
        const cplx integral = quad::panels(g, b - width, b, panel_width).value;
        if (!(std::abs(integral) > 0.0)) return std::nullopt;
        if (w == 0) outer = integral;
        const double x = b - 0.5 * width;
        const auto r = static_cast<Eigen::Index>(w);
        a(r, 0) = 1.0;
        a(r, 1) = -std::log(x);
        for (int j = 2; j < terms; ++j) a(r, j) = std::pow(x, 1 - j);
        y(r) = std::log(std::abs(integral) / width);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    const double q = c(1);
    if (!(q > 1.0)) return std::make_pair(cplx{0.0, 0.0}, q);
    // int_hi^inf e^a x^{-q} exp(sum_j c_j x^{-j}) dx with x = hi / s.
    auto corr = [&](double s) {
        double e = 0.0;
        for (int j = 2; j < terms; ++j) e += c(j) * std::pow(s / hi, j - 1);
        return cplx{std::pow(s, q - 2.0) * std::expm1(e), 0.0};
    };
    const double extra = quad::adaptive(corr, 0.0, 1.0, 1e-12, 1e-10).value.real();
    const double mag = std::exp(c(0)) * std::pow(hi, 1.0 - q) * (1.0 / (q - 1.0) + extra);
    return std::make_pair(outer / std::abs(outer) * mag, q);
}

} // namespace detail

/// Adaptive panel quadrature up to each scheduled horizon, optionally with a
/// fitted algebraic tail, then classified.
inline IntegrationVerdict integrate(const ScalarFunction& f, const DensityMeasure& mu,
                                    const Tolerances& tol = {})
{
    const QuadraturePolicy& p = mu.policy;
    const std::vector<double> horizons = p.schedule();
    auto g = [&](double x) { return detail::checked(f(x) * mu.density(x), x); };

    IntegrationVerdict v;
    cplx acc{0.0, 0.0};
    double scale = 0.0;
    double covered = p.symmetric ? 0.0 : p.lower;
    double min_q = std::numeric_limits<double>::infinity();
    bool tail_ok = true;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        const double T = horizons[h];
        const bool judged = h + 2 >= horizons.size(); // the last two horizons decide
        if (T > covered) {
            const auto right = quad::panels(g, covered, T, p.panel_width);
            acc += right.value;
            scale += right.abs_sum;
            if (p.symmetric) {
                const auto left = quad::panels(g, -T, -covered, p.panel_width);
                acc += left.value;
                scale += left.abs_sum;
            }
            covered = T;
        }
        cplx corrected = acc;
        if (p.tail_model) {
            const double lo = p.symmetric ? 0.5 * T : std::max(p.lower, 0.5 * T);
            auto right = detail::tail_beyond(g, lo, T, p.tail_period, p.panel_width);
            std::optional<std::pair<cplx, double>> left;
            if (p.symmetric) {
                auto gm = [&](double x) { return g(-x); };
                left = detail::tail_beyond(gm, lo, T, p.tail_period, p.panel_width);
            }
            for (const auto* side : {&right, &left}) {
                if (side == &left && !p.symmetric) continue;
                if (*side) {
                    corrected += (*side)->first;
                    if (judged) min_q = std::min(min_q, (*side)->second);
                } else if (judged) {
                    tail_ok = false;
                }
            }
        }
        v.evidence.push_back({T, corrected});
    }
    v.value = v.evidence.back().partial;
    if (p.tail_model && std::isfinite(min_q)) v.tail_exponent = min_q;

    const std::size_t k = v.evidence.size() - 1;
    const bool tail_integrable = !p.tail_model || (tail_ok && min_q > 1.0);
    if (k >= 1 && tail_integrable &&
        detail::relatively_close(v.evidence[k].partial, v.evidence[k - 1].partial, p.tol_conv, scale)) {
        v.status = Status::Converged;
        return v;
    }
    if (auto fit = detail::divergence_fit(v.evidence, tol)) {
        v.status = Status::Divergent;
        v.fit = fit;
    } else {
        v.status = Status::Inconclusive;
    }
    return v;
}

inline IntegrationVerdict integrate(const ScalarFunction& f, const ComplexMeasure& mu,
                                    const Tolerances& tol = {})
{
    return std::visit(
        [&](const auto& m) -> IntegrationVerdict {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, AtomicMeasure>)
                return integrate(f, m);
            else
                return integrate(f, m, tol);
        },
        mu);
}

/// Atom-wise absolute values.
inline AtomicMeasure total_variation(const AtomicMeasure& mu)
{
    AtomicMeasure out = mu;
    for (cplx& w : out.weights) w = std::abs(w);
    return out;
}

inline AtomicSequence total_variation(const AtomicSequence& mu)
{
    AtomicSequence out = mu;
    out.block = [inner = mu.block](std::size_t n) { return total_variation(inner(n)); };
    return out;
}

inline DensityMeasure total_variation(const DensityMeasure& mu)
{
    DensityMeasure out = mu;
    out.density = [inner = mu.density](double x) { return cplx{std::abs(inner(x)), 0.0}; };
    return out;
}

inline ComplexMeasure total_variation(const ComplexMeasure& mu)
{
    return std::visit([](const auto& m) -> ComplexMeasure { return total_variation(m); }, mu);
}

/// Integrability of f: integrates |f| against |mu|.
inline IntegrationVerdict integrability_test(const ScalarFunction& f, const ComplexMeasure& mu,
                                             const Tolerances& tol = {})
{
    ScalarFunction abs_f = [f](double x) { return cplx{std::abs(f(x)), 0.0}; };
    return integrate(abs_f, total_variation(mu), tol);
}

} // namespace opint

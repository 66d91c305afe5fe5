#pragma once

// POVMs with finitely many located outcomes on a finite-dimensional model space.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opint/core.hpp"
#include "opint/linalg.hpp"
#include "opint/measure.hpp"

namespace opint {

/// Finite-dimensional truncation of a Hilbert space with a labelled orthonormal basis.
struct ModelSpace {
    std::size_t dim = 1;
    std::vector<std::string> labels;
    bool is_domain_truncation = false;

    ModelSpace() : ModelSpace(1) {}

    explicit ModelSpace(std::size_t d, bool domain_truncation = false)
        : dim(d), is_domain_truncation(domain_truncation)
    {
        if (d == 0) throw Error(ErrorKind::DimensionMismatch, "model space dimension must be >= 1");
        labels.reserve(d);
        for (std::size_t i = 0; i < d; ++i) labels.push_back("e" + std::to_string(i));
    }

    ModelSpace(std::vector<std::string> names, bool domain_truncation)
        : dim(names.size()), labels(std::move(names)), is_domain_truncation(domain_truncation)
    {
        if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "model space dimension must be >= 1");
        if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size())
            throw Error(ErrorKind::ConfigError, "basis labels must be distinct");
    }
};

/// A positive Hermitian matrix. Effects failing the PSD floor are rejected, never clipped.
class Effect {
public:
    explicit Effect(Matrix m, const Tolerances& tol = {}) : m_(std::move(m))
    {
        if (m_.rows() != m_.cols()) throw Error(ErrorKind::DimensionMismatch, "effect must be square");
        if (hermitian_defect(m_) > tol.hermitian * std::max(1.0, m_.norm()))
            throw Error(ErrorKind::NotHermitian, "effect is not Hermitian");
        m_ = 0.5 * (m_ + m_.adjoint()).eval();
        if (min_eigenvalue(m_) < -tol.psd) throw Error(ErrorKind::NotPositive, "effect has a negative eigenvalue");
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    Matrix m_;
};

struct Outcome {
    std::string label;
    double location = 0.0;
};

struct PovmFlags {
    bool normalized = false;
    bool projection_valued = false;
};

struct PovmReport {
    double positivity_margin = 0.0;    // min eigenvalue over effects
    double normalization_defect = 0.0; // ||sum E_i - I||
    double projection_defect = 0.0;    // max ||E_i^2 - E_i||
    double orthogonality_defect = 0.0; // max_{i != j} ||E_i E_j||
};

class DiscretePovm {
public:
    DiscretePovm(ModelSpace space, std::vector<Outcome> outcomes, std::vector<Effect> effects,
                 PovmFlags flags = {}, double tol = 1e-10);

    /// Convenience: unnamed outcomes at the given locations.
    static DiscretePovm from_matrices(const std::vector<Matrix>& effects, std::vector<double> locations,
                                      PovmFlags flags = {}, double tol = 1e-10)
    {
        if (effects.empty()) throw Error(ErrorKind::DimensionMismatch, "POVM needs at least one effect");
        if (locations.size() != effects.size())
            throw Error(ErrorKind::DimensionMismatch, "one location per effect required");
        std::vector<Outcome> outs;
        std::vector<Effect> eff;
        for (std::size_t i = 0; i < effects.size(); ++i) {
            outs.push_back({"w" + std::to_string(i), locations[i]});
            eff.emplace_back(effects[i]);
        }
        return DiscretePovm(ModelSpace(static_cast<std::size_t>(effects.front().rows())), std::move(outs),
                            std::move(eff), flags, tol);
    }

    /// Spectral measure of a Hermitian matrix: one eigenprojection per distinct
    /// eigenvalue (eigenvalues closer than `merge` are grouped), located at the eigenvalue.
    static DiscretePovm spectral(const Matrix& hermitian, double merge = 1e-9)
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hermitian + hermitian.adjoint()));
        if (es.info() != Eigen::Success) throw Error(ErrorKind::DecompositionFailure, "eigensolver failed");
        const RealVector& ev = es.eigenvalues();
        std::vector<Matrix> projs;
        std::vector<double> locs;
        Eigen::Index i = 0;
        while (i < ev.size()) {
            Eigen::Index j = i;
            while (j + 1 < ev.size() && ev(j + 1) - ev(i) <= merge) ++j;
            const Matrix block = es.eigenvectors().middleCols(i, j - i + 1);
            projs.push_back(block * block.adjoint());
            locs.push_back(ev.segment(i, j - i + 1).mean());
            i = j + 1;
        }
        return from_matrices(projs, std::move(locs), {true, true});
    }

    /// Seeded random normalized POVM: E_i = S^{-1/2} A_i^* A_i S^{-1/2} with Gaussian
    /// A_i of random rank (ranks summing to at least d), S = sum A_i^* A_i. Locations
    /// are 0, 1, ..., k-1 unless given.
    static DiscretePovm random(std::size_t d, std::size_t k, Rng& rng, std::vector<double> locations = {})
    {
        std::vector<int> ranks;
        int rank_sum = 0;
        for (std::size_t i = 0; i < k; ++i) rank_sum += ranks.emplace_back(rng.uniform_int(1, static_cast<int>(d)));
        // S must be invertible: raise ranks round-robin until they cover d.
        for (std::size_t i = 0; rank_sum < static_cast<int>(d); i = (i + 1) % k)
            if (ranks[i] < static_cast<int>(d)) {
                ++ranks[i];
                ++rank_sum;
            }
        std::vector<Matrix> factors;
        Matrix total = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < k; ++i) {
            factors.push_back(rng.gaussian(ranks[i], static_cast<Eigen::Index>(d)));
            total += factors.back().adjoint() * factors.back();
        }
        // E_i = B_i^* B_i with B_i = A_i S^{-1/2}: one product keeps the null space clean.
        const Matrix s = psd_inverse_sqrt(total);
        std::vector<Matrix> raw;
        for (const Matrix& a : factors) {
            const Matrix b = a * s;
            Matrix e = b.adjoint() * b;
            raw.push_back(0.5 * (e + e.adjoint()));
        }
        if (locations.empty())
            for (std::size_t i = 0; i < k; ++i) locations.push_back(static_cast<double>(i));
        return from_matrices(raw, std::move(locations), {true, false});
    }

    const ModelSpace& space() const { return space_; }
    std::size_t dim() const { return space_.dim; }
    std::size_t size() const { return effects_.size(); }
    const Effect& effect(std::size_t i) const { return effects_.at(i); }
    const Outcome& outcome(std::size_t i) const { return outcomes_.at(i); }
    const std::vector<Effect>& effects() const { return effects_; }
    const std::vector<Outcome>& outcomes() const { return outcomes_; }
    PovmFlags flags() const { return flags_; }

    std::vector<double> locations() const
    {
        std::vector<double> out;
        for (const Outcome& o : outcomes_) out.push_back(o.location);
        return out;
    }

    Matrix total() const
    {
        Matrix s = Matrix::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
        for (const Effect& e : effects_) s += e.matrix();
        return s;
    }

private:
    ModelSpace space_;
    std::vector<Outcome> outcomes_;
    std::vector<Effect> effects_;
    PovmFlags flags_;
};

/// Positivity margin, normalization defect and projection defects.
inline PovmReport validate_povm(const DiscretePovm& e)
{
    PovmReport r;
    r.positivity_margin = std::numeric_limits<double>::infinity();
    const auto d = static_cast<Eigen::Index>(e.dim());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Matrix& m = e.effect(i).matrix();
        r.positivity_margin = std::min(r.positivity_margin, min_eigenvalue(m));
        r.projection_defect = std::max(r.projection_defect, opnorm(m * m - m));
        for (std::size_t j = 0; j < e.size(); ++j)
            if (i != j) r.orthogonality_defect = std::max(r.orthogonality_defect, opnorm(m * e.effect(j).matrix()));
    }
    r.normalization_defect = opnorm(e.total() - Matrix::Identity(d, d));
    return r;
}

inline DiscretePovm::DiscretePovm(ModelSpace space, std::vector<Outcome> outcomes, std::vector<Effect> effects,
                                  PovmFlags flags, double tol)
    : space_(std::move(space)), outcomes_(std::move(outcomes)), effects_(std::move(effects)), flags_(flags)
{
    if (effects_.empty()) throw Error(ErrorKind::DimensionMismatch, "POVM needs at least one effect");
    if (outcomes_.size() != effects_.size())
        throw Error(ErrorKind::DimensionMismatch, "one outcome per effect required");
    for (const Effect& e : effects_)
        if (static_cast<std::size_t>(e.dim()) != space_.dim)
            throw Error(ErrorKind::DimensionMismatch, "effect dimension differs from model space");
    if (flags_.normalized || flags_.projection_valued) {
        const PovmReport r = validate_povm(*this);
        if (flags_.normalized && r.normalization_defect > tol)
            throw Error(ErrorKind::ConfigError, "POVM flagged normalized but sum of effects is not I");
        if (flags_.projection_valued && (r.projection_defect > tol || r.orthogonality_defect > tol))
            throw Error(ErrorKind::ConfigError, "POVM flagged projection valued but effects are not orthogonal projections");
    }
}

namespace detail {
inline void check_dim(const Vector& v, std::size_t d)
{
    if (static_cast<std::size_t>(v.size()) != d)
        throw Error(ErrorKind::DimensionMismatch, "vector dimension " + std::to_string(v.size()) +
                                                      " does not match model space " + std::to_string(d));
}
} // namespace detail

/// E_{psi,phi}: weights <psi|E_i phi> at the outcome locations.
inline AtomicMeasure scalar_measure(const DiscretePovm& e, const Vector& psi, const Vector& phi)
{
    detail::check_dim(psi, e.dim());
    detail::check_dim(phi, e.dim());
    std::vector<cplx> w;
    w.reserve(e.size());
    for (const Effect& eff : e.effects()) w.push_back(psi.dot(eff.matrix() * phi));
    return {e.locations(), std::move(w)};
}

/// E_phi: the vectors E_i phi.
inline std::vector<Vector> vector_measure(const DiscretePovm& e, const Vector& phi)
{
    detail::check_dim(phi, e.dim());
    std::vector<Vector> out;
    out.reserve(e.size());
    for (const Effect& eff : e.effects()) out.push_back(eff.matrix() * phi);
    return out;
}

struct OrthoScatterReport {
    double max_off_diagonal = 0.0; // max |<mu(X_i), mu(X_j)>|, i != j
    AtomicMeasure lambda;          // lambda(X_i) = ||mu(X_i)||^2
    cplx integral_norm_sq{0.0, 0.0};
    double lambda_integral = 0.0;  // sum |f_i|^2 lambda(X_i)
    double parseval_defect = 0.0;
};

/// Orthogonality of a vector measure on disjoint atoms, and Parseval for the
/// simple function with values `f` on those atoms (empty f: f = 1).
inline OrthoScatterReport orthogonally_scattered_check(std::span<const Vector> mu, std::span<const cplx> f = {},
                                                       std::span<const double> locations = {})
{
    if (!f.empty() && f.size() != mu.size())
        throw Error(ErrorKind::DimensionMismatch, "simple function needs one value per atom");
    OrthoScatterReport r;
    std::vector<double> locs;
    std::vector<double> lam;
    Vector sum;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        locs.push_back(locations.empty() ? static_cast<double>(i) : locations[i]);
        lam.push_back(mu[i].squaredNorm());
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(mu[i].dot(mu[j])));
        const cplx fi = f.empty() ? cplx{1.0, 0.0} : f[i];
        sum = (i == 0) ? Vector(fi * mu[i]) : Vector(sum + fi * mu[i]);
        r.lambda_integral += std::norm(fi) * lam.back();
    }
    r.lambda = AtomicMeasure::positive(std::move(locs), lam);
    r.integral_norm_sq = mu.empty() ? 0.0 : sum.squaredNorm();
    r.parseval_defect = std::abs(r.integral_norm_sq.real() - r.lambda_integral);
    return r;
}

/// Bounded integral sum_i f(w_i) E_i.
inline Matrix bounded_integral(const ScalarFunction& f, const DiscretePovm& e)
{
    const auto d = static_cast<Eigen::Index>(e.dim());
    Matrix s = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double x = e.outcome(i).location;
        const cplx v = f(x);
        if (!is_finite(v)) throw Error(ErrorKind::NonEvaluable, "f not finite at outcome " + e.outcome(i).label);
        s += v * e.effect(i).matrix();
    }
    return s;
}

} // namespace opint

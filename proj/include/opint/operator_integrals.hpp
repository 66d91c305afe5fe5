#pragma once

// Tilde, strong and symmetric weak operator integrals on model truncations.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "opint/certificates.hpp"
#include "opint/core.hpp"
#include "opint/form_measure.hpp"
#include "opint/linalg.hpp"
#include "opint/measure.hpp"
#include "opint/naimark.hpp"
#include "opint/povm.hpp"

namespace opint {

enum class IntegralKind { Tilde, Strong, WeakSym, MaxWeakSym, Form };

inline std::string_view to_string(IntegralKind k)
{
    switch (k) {
    case IntegralKind::Tilde: return "Tilde";
    case IntegralKind::Strong: return "Strong";
    case IntegralKind::WeakSym: return "WeakSym";
    case IntegralKind::MaxWeakSym: return "MaxWeakSym";
    case IntegralKind::Form: return "Form";
    }
    return "?";
}

struct OperatorIntegral {
    IntegralKind kind = IntegralKind::Tilde;
    Matrix matrix;        // d x m: images of the certified vectors
    Matrix domain_basis;  // d x m: the certified vectors
    std::vector<std::size_t> certified; // indices into the candidate columns
    std::vector<DomainCertificate> certificates;
    bool symmetric = false;

    /// <b_i | L b_j> on the certified block.
    Matrix compressed() const { return domain_basis.adjoint() * matrix; }

    /// Action on a vector of the certified span (orthonormal domain basis).
    Vector apply(const Vector& phi, double tol = 1e-10) const
    {
        const Vector c = domain_basis.adjoint() * phi;
        if ((domain_basis * c - phi).norm() > tol * std::max(1.0, phi.norm()))
            throw Error(ErrorKind::DomainViolation, "vector outside the certified domain");
        return matrix * c;
    }
};

namespace detail {

inline std::string basis_id(std::size_t j) { return "b" + std::to_string(j); }

inline Matrix identity_basis(std::size_t d)
{
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

inline cplx converged_value(const IntegrationVerdict& v, const char* what)
{
    if (!v.converged()) throw Error(ErrorKind::DomainViolation, std::string(what) + ": integral did not converge");
    return v.value;
}

} // namespace detail

/// (int f dE_{e_n, phi})_n over the truncation, using structure where available.
inline Vector apply_integral(const ScalarFunction& f, const OperatorMeasure& e, const Vector& phi,
                             const Tolerances& tol = {})
{
    const std::size_t d = model_dim(e);
    detail::check_dim(phi, d);
    if (const auto* p = std::get_if<DiscretePovm>(&e)) return bounded_integral(f, *p) * phi;
    if (const auto* s = std::get_if<ScalarIdentityPovm>(&e)) {
        if (phi.isZero(0.0)) return phi;
        return detail::converged_value(integrate(f, s->mu, tol), "int f dmu") * phi;
    }
    if (const auto* fm = std::get_if<FormMeasure>(&e)) {
        Vector out = Vector::Zero(static_cast<Eigen::Index>(d));
        if (fm->representation() == FormRepresentation::DiagonalSequence) {
            for (Eigen::Index n = 0; n < phi.size(); ++n)
                if (phi(n) != cplx{})
                    out(n) = detail::converged_value(integrate(f, fm->diagonal_measure(static_cast<std::size_t>(n)), tol),
                                                     "int f dmu_n") * phi(n);
            return out;
        }
        for (Eigen::Index m = 0; m < phi.size(); ++m) {
            if (phi(m) == cplx{}) continue;
            for (Eigen::Index n = 0; n < phi.size(); ++n)
                out(n) += detail::converged_value(
                              integrate(f, fm->entry(static_cast<std::size_t>(n), static_cast<std::size_t>(m)), tol),
                              "int f dE_nm") * phi(m);
        }
        return out;
    }
    Vector out(static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n < d; ++n) {
        Vector en = Vector::Zero(static_cast<Eigen::Index>(d));
        en(static_cast<Eigen::Index>(n)) = 1.0;
        out(static_cast<Eigen::Index>(n)) =
            detail::converged_value(integrate(f, scalar_measure(e, en, phi), tol), "int f dE_{e_n,phi}");
    }
    return out;
}

/// C_{nm} = int f dE_{b_n, b_m}.
inline Matrix pairing_matrix(const ScalarFunction& f, const OperatorMeasure& e, const Matrix& b,
                             const Tolerances& tol = {})
{
    const auto m = b.cols();
    if (std::holds_alternative<SequencePovm>(e)) {
        Matrix c(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                c(i, j) = detail::converged_value(integrate(f, scalar_measure(e, Vector(b.col(i)), Vector(b.col(j))), tol),
                                                  "int f dE_{b_n,b_m}");
        return c;
    }
    Matrix images(b.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) images.col(j) = apply_integral(f, e, b.col(j), tol);
    return b.isIdentity(0.0) ? images : Matrix(b.adjoint() * images);
}

/// L~(f,E)phi after certifying phi; DomainViolation otherwise.
inline Vector tilde_apply(const ScalarFunction& f, const OperatorMeasure& e, const Vector& phi,
                          const Tolerances& tol = {})
{
    if (!sq_domain_member(f, e, phi, {}, tol).member())
        throw Error(ErrorKind::DomainViolation, "vector is not certified square-integrable");
    return apply_integral(f, e, phi, tol);
}

namespace detail {

template <class Certifier>
OperatorIntegral pointwise_integral(IntegralKind kind, const ScalarFunction& f, const OperatorMeasure& e,
                                    const Matrix& basis, const Tolerances& tol, Certifier&& cert)
{
    const std::size_t d = model_dim(e);
    if (static_cast<std::size_t>(basis.rows()) != d)
        throw Error(ErrorKind::DimensionMismatch, "basis rows differ from model dimension");
    OperatorIntegral out;
    out.kind = kind;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
        out.certificates.push_back(cert(Vector(basis.col(j)), basis_id(static_cast<std::size_t>(j))));
        if (out.certificates.back().member()) out.certified.push_back(static_cast<std::size_t>(j));
    }
    const auto m = static_cast<Eigen::Index>(out.certified.size());
    out.domain_basis.resize(basis.rows(), m);
    out.matrix.resize(basis.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        out.domain_basis.col(j) = basis.col(static_cast<Eigen::Index>(out.certified[static_cast<std::size_t>(j)]));
        out.matrix.col(j) = apply_integral(f, e, out.domain_basis.col(j), tol);
    }
    const Matrix c = out.compressed();
    out.symmetric = m > 0 && hermitian_defect_cheap(c) <= 1e-10 * std::max(1.0, c.cwiseAbs().maxCoeff());
    return out;
}

} // namespace detail

/// L~(f,E) on the sq-certified columns of `basis` (default: model basis).
inline OperatorIntegral tilde_integral(const ScalarFunction& f, const OperatorMeasure& e, const Matrix& basis,
                                       const Tolerances& tol = {})
{
    return detail::pointwise_integral(IntegralKind::Tilde, f, e, basis, tol, [&](const Vector& v, std::string id) {
        return sq_domain_member(f, e, v, std::move(id), tol);
    });
}

inline OperatorIntegral tilde_integral(const ScalarFunction& f, const OperatorMeasure& e, const Tolerances& tol = {})
{
    return tilde_integral(f, e, detail::identity_basis(model_dim(e)), tol);
}

/// L(f,E) on the strong-certified columns of `basis`.
inline OperatorIntegral strong_integral(const ScalarFunction& f, const OperatorMeasure& e, const Matrix& basis,
                                        const Tolerances& tol = {})
{
    return detail::pointwise_integral(IntegralKind::Strong, f, e, basis, tol, [&](const Vector& v, std::string id) {
        return strong_domain_member(f, e, v, std::move(id), tol);
    });
}

inline OperatorIntegral strong_integral(const ScalarFunction& f, const OperatorMeasure& e, const Tolerances& tol = {})
{
    return strong_integral(f, e, detail::identity_basis(model_dim(e)), tol);
}

/// V^* L~(f,F) V restricted to `basis`.
inline Matrix tilde_via_dilation(const ScalarFunction& f, const DiscretePovm& e, const NaimarkDilation& dil,
                                 const Matrix& basis)
{
    return dil.isometry.adjoint() * dil.spectral_integral(f, e.locations()) * dil.isometry * basis;
}

/// Symmetric weak integral determined by the orthonormal D_s basis (columns).
/// Column m of the pairing matrix is the coefficient sequence of L' b_m.
inline OperatorIntegral weak_sym_integral(const ScalarFunction& f, const OperatorMeasure& e, const Matrix& ds,
                                          const Tolerances& tol = {}, IntegralKind kind = IntegralKind::WeakSym)
{
    if (ds.cols() == 0) throw Error(ErrorKind::SeparatingSubspaceTooSmall, "D_s basis is empty");
    const std::size_t d = model_dim(e);
    if (static_cast<std::size_t>(ds.rows()) != d)
        throw Error(ErrorKind::DimensionMismatch, "D_s rows differ from model dimension");
    const auto m = ds.cols();
    if (!ds.isIdentity(0.0) && (ds.adjoint() * ds - Matrix::Identity(m, m)).norm() > 1e-10)
        throw Error(ErrorKind::ConfigError, "D_s basis must be orthonormal");

    OperatorIntegral out;
    out.kind = kind;
    for (Eigen::Index j = 0; j < m; ++j) {
        const std::string id = detail::basis_id(static_cast<std::size_t>(j));
        if (!form_domain_member(f, e, Vector(ds.col(j)), id, tol).member())
            throw Error(ErrorKind::DomainViolation, "D_s x D_s is not inside the integrability set at " + id);
    }
    const Matrix c = pairing_matrix(f, e, ds, tol);
    // Within the truncation every column is a finite sequence, hence square-summable.
    for (Eigen::Index j = 0; j < m; ++j) {
        DomainCertificate cert;
        cert.vector_id = detail::basis_id(static_cast<std::size_t>(j));
        cert.kind = DomainKind::WeakSym;
        cert.rule = "finite-column";
        cert.verdict = std::isfinite(c.col(j).squaredNorm()) ? Verdict::Member : Verdict::NonMember;
        out.certificates.push_back(cert);
        if (cert.member()) out.certified.push_back(static_cast<std::size_t>(j));
    }
    const auto k = static_cast<Eigen::Index>(out.certified.size());
    out.domain_basis.resize(ds.rows(), k);
    Matrix cols(m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto src = static_cast<Eigen::Index>(out.certified[static_cast<std::size_t>(j)]);
        out.domain_basis.col(j) = ds.col(src);
        cols.col(j) = c.col(src);
    }
    out.matrix = ds.isIdentity(0.0) ? cols : Matrix(ds * cols);
    Matrix block(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        block.row(i) = cols.row(static_cast<Eigen::Index>(out.certified[static_cast<std::size_t>(i)]));
    out.symmetric = hermitian_defect_cheap(block) <= 1e-10 * std::max(1.0, block.cwiseAbs().maxCoeff());
    return out;
}

/// Weak integral with D_s = the form-domain certified model basis vectors.
inline OperatorIntegral max_weak_sym_integral(const ScalarFunction& f, const OperatorMeasure& e,
                                              const Tolerances& tol = {})
{
    const std::size_t d = model_dim(e);
    std::vector<DomainCertificate> certs;
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < d; ++j) {
        Vector ej = Vector::Zero(static_cast<Eigen::Index>(d));
        ej(static_cast<Eigen::Index>(j)) = 1.0;
        certs.push_back(form_domain_member(f, e, ej, detail::basis_id(j), tol));
        if (certs.back().member()) keep.push_back(static_cast<Eigen::Index>(j));
    }
    if (keep.empty()) throw Error(ErrorKind::SeparatingSubspaceTooSmall, "no model basis vector lies in D_F");
    Matrix ds = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) ds(keep[j], static_cast<Eigen::Index>(j)) = 1.0;
    OperatorIntegral out = weak_sym_integral(f, e, ds, tol, IntegralKind::MaxWeakSym);
    for (std::size_t& idx : out.certified) idx = static_cast<std::size_t>(keep[idx]);
    out.certificates = std::move(certs);
    return out;
}

struct MomentOperators {
    OperatorIntegral tilde;
    OperatorIntegral strong;
    OperatorIntegral max_weak;
    bool chain_ok = true;        // dom L~ subset dom L subset dom L' on basis vectors
    double max_mismatch = 0.0;   // largest action difference on shared vectors
    bool strict = false;         // some basis vector is in D_F but not in dom L~
};

/// E[k] for f(x) = x^k in the three kinds, with the inclusion chain checked.
inline MomentOperators moment_operators(const OperatorMeasure& e, int k, const Tolerances& tol = {})
{
    ScalarFunction f = [k](double x) { return cplx{std::pow(x, k), 0.0}; };
    MomentOperators out;
    out.tilde = tilde_integral(f, e, tol);
    out.strong = strong_integral(f, e, tol);
    out.max_weak = max_weak_sym_integral(f, e, tol);

    auto position = [](const OperatorIntegral& op, std::size_t idx) -> Eigen::Index {
        const auto it = std::find(op.certified.begin(), op.certified.end(), idx);
        return it == op.certified.end() ? -1 : static_cast<Eigen::Index>(it - op.certified.begin());
    };
    auto check = [&](const OperatorIntegral& small, const OperatorIntegral& big) {
        for (std::size_t i = 0; i < small.certified.size(); ++i) {
            const Eigen::Index j = position(big, small.certified[i]);
            if (j < 0) {
                out.chain_ok = false;
                continue;
            }
            out.max_mismatch = std::max(
                out.max_mismatch, (small.matrix.col(static_cast<Eigen::Index>(i)) - big.matrix.col(j)).norm());
        }
    };
    check(out.tilde, out.strong);
    check(out.strong, out.max_weak);
    check(out.tilde, out.max_weak);
    out.strict = out.tilde.certified.size() < out.max_weak.certified.size();
    return out;
}

struct GapRow {
    double threshold = 0.0;   // X_n = {x : |x| >= threshold}
    double sup_estimate = 0.0;
    std::size_t argmax = 0;   // index into the psi sample
};

struct GapReport {
    std::vector<GapRow> rows;
    bool tail_vanishes = false;
    std::size_t sample_size = 0;
};

/// sup over unit psi in D_s of int_{X_n} |f| d|E_{psi,phi}| on nested tails
/// X_n = {|x| >= thresholds[n]}, maximized over the D_s basis, `probes` random
/// unit vectors of D_s and, for diagonal measures, the closed-form maximizer.
inline GapReport strong_weak_gap_probe(const ScalarFunction& f, const OperatorMeasure& e, const Matrix& ds,
                                       const Coefficients& phi, const std::vector<double>& thresholds,
                                       std::uint64_t seed = 1, int probes = 8, const Tolerances& tol = {})
{
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] < thresholds[i - 1])
            throw Error(ErrorKind::ConfigError, "tail sets must be nested (thresholds nondecreasing)");
    std::vector<Vector> sample;
    for (Eigen::Index j = 0; j < ds.cols(); ++j) sample.emplace_back(ds.col(j));
    Rng rng(seed);
    for (int p = 0; p < probes; ++p) {
        const Vector c = rng.unit_vector(ds.cols());
        sample.emplace_back(ds * c);
    }
    const auto* fm = std::get_if<FormMeasure>(&e);
    const bool diagonal = fm && fm->representation() == FormRepresentation::DiagonalSequence;

    GapReport rep;
    for (double t : thresholds) {
        ScalarFunction tail = [f, t](double x) { return std::abs(x) >= t ? f(x) : cplx{}; };
        std::vector<Vector> candidates = sample;
        if (diagonal) {
            Vector a = Vector::Zero(ds.rows());
            for (Eigen::Index m = 0; m < ds.rows(); ++m) {
                const cplx c = phi(static_cast<std::size_t>(m));
                if (c == cplx{}) continue;
                a(m) = std::abs(c) * integrability_test(tail, fm->diagonal_measure(static_cast<std::size_t>(m)), tol).value.real();
            }
            const Vector proj = ds * (ds.adjoint() * a);
            if (proj.norm() > 0.0) candidates.push_back(proj / proj.norm());
        }
        GapRow row;
        row.threshold = t;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const IntegrationVerdict v = integrability_test(tail, scalar_measure(e, candidates[i], phi), tol);
            const double val = v.converged() ? v.value.real() : std::numeric_limits<double>::infinity();
            if (val > row.sup_estimate) {
                row.sup_estimate = val;
                row.argmax = i;
            }
        }
        rep.rows.push_back(row);
    }
    rep.sample_size = sample.size() + (diagonal ? 1 : 0);
    double peak = 0.0;
    for (const GapRow& r : rep.rows) peak = std::max(peak, r.sup_estimate);
    rep.tail_vanishes = !rep.rows.empty() && rep.rows.back().sup_estimate <= std::max(1e-10, 1e-3 * peak);
    return rep;
}

} // namespace opint

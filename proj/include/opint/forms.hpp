#pragma once

// Form integrals, variance forms and the A^*A association.

#include <algorithm>
#include <functional>
#include <utility>

#include "opint/certificates.hpp"
#include "opint/core.hpp"
#include "opint/form_measure.hpp"
#include "opint/linalg.hpp"
#include "opint/naimark.hpp"
#include "opint/operator_integrals.hpp"

namespace opint {

/// A sesquilinear form on the span of `domain_basis` (columns).
struct QuadraticFormRecord {
    std::function<cplx(const Vector&, const Vector&)> eval;
    Matrix domain_basis;
    bool symmetric = false;
    bool positive = false;

    cplx operator()(const Vector& psi, const Vector& phi) const { return eval(psi, phi); }

    /// q^*(psi, phi) = conj(q(phi, psi)).
    QuadraticFormRecord adjoint() const
    {
        QuadraticFormRecord a = *this;
        a.eval = [q = eval](const Vector& psi, const Vector& phi) { return std::conj(q(phi, psi)); };
        return a;
    }

    /// G_ij = q(b_i, b_j).
    Matrix gram() const
    {
        const auto m = domain_basis.cols();
        Matrix g(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) g(i, j) = eval(domain_basis.col(i), domain_basis.col(j));
        return g;
    }
};

/// Builds a record and sets the symmetric/positive flags from the Gram matrix.
inline QuadraticFormRecord make_form_record(std::function<cplx(const Vector&, const Vector&)> eval, Matrix basis,
                                            double tol = 1e-12)
{
    QuadraticFormRecord q{std::move(eval), std::move(basis), false, false};
    const Matrix g = q.gram();
    const double scale = std::max(1.0, g.size() ? g.cwiseAbs().maxCoeff() : 0.0);
    q.symmetric = hermitian_defect_cheap(g) <= tol * scale;
    q.positive = q.symmetric && (g.size() == 0 || min_eigenvalue(g) >= -tol * scale);
    return q;
}

/// int f dE_{psi,phi} for psi, phi certified in D_F.
inline cplx form_integral(const ScalarFunction& f, const OperatorMeasure& e, const Vector& psi, const Vector& phi,
                          const Tolerances& tol = {})
{
    if (!form_domain_member(f, e, psi, "psi", tol).member() || !form_domain_member(f, e, phi, "phi", tol).member())
        throw Error(ErrorKind::DomainViolation, "form integral needs both vectors in D_F");
    const IntegrationVerdict v = integrate(f, scalar_measure(e, psi, phi), tol);
    if (!v.converged()) throw Error(ErrorKind::NonEvaluable, "form integral did not converge");
    return v.value;
}

/// The form f[f] restricted to `basis`.
inline QuadraticFormRecord form_record(const ScalarFunction& f, const OperatorMeasure& e, Matrix basis,
                                       const Tolerances& tol = {})
{
    return make_form_record(
        [f, e, tol](const Vector& psi, const Vector& phi) { return form_integral(f, e, psi, phi, tol); },
        std::move(basis));
}

struct FunctionParts {
    ScalarFunction f1, f2, f3, f4; // f = f1 - f2 + i (f3 - f4), all >= 0
};

inline FunctionParts decompose_function(const ScalarFunction& f)
{
    return {
        [f](double x) { return cplx{std::max(f(x).real(), 0.0), 0.0}; },
        [f](double x) { return cplx{std::max(-f(x).real(), 0.0), 0.0}; },
        [f](double x) { return cplx{std::max(f(x).imag(), 0.0), 0.0}; },
        [f](double x) { return cplx{std::max(-f(x).imag(), 0.0), 0.0}; },
    };
}

/// f[x^2](psi,phi) - <E~[1]psi | E~[1]phi>.
inline cplx variance_form(const OperatorMeasure& e, const Vector& psi, const Vector& phi, const Tolerances& tol = {})
{
    const ScalarFunction x = [](double t) { return cplx{t, 0.0}; };
    const ScalarFunction x2 = [](double t) { return cplx{t * t, 0.0}; };
    if (!form_domain_member(x2, e, psi, "psi", tol).member() || !form_domain_member(x2, e, phi, "phi", tol).member())
        throw Error(ErrorKind::DomainViolation, "variance form needs both vectors in dom E~[1]");
    const cplx second = integrate(x2, scalar_measure(e, psi, phi), tol).value;
    return second - apply_integral(x, e, psi, tol).dot(apply_integral(x, e, phi, tol));
}

/// T = A^*A for q(psi,phi) = <A psi | A phi>.
inline Matrix kato_operator_from_form(const Matrix& a)
{
    if (a.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty operator");
    return a.adjoint() * a;
}

/// A = L~(sqrt f, F) V through a Naimark dilation (f >= 0).
inline Matrix kato_factor_via_dilation(const ScalarFunction& f, const DiscretePovm& e, const NaimarkDilation& dil)
{
    ScalarFunction root = [f](double x) {
        const cplx v = f(x);
        if (v.real() < 0.0 || v.imag() != 0.0) throw Error(ErrorKind::NotPositive, "Kato route needs f >= 0");
        return cplx{std::sqrt(v.real()), 0.0};
    };
    return dil.spectral_integral(root, e.locations()) * dil.isometry;
}

} // namespace opint

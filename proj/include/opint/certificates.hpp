#pragma once

// Three-valued domain certificates for the operator-integral variants.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opint/core.hpp"
#include "opint/form_measure.hpp"
#include "opint/linalg.hpp"
#include "opint/measure.hpp"

namespace opint {

enum class DomainKind { SquareIntegrability, Strong, FormDomain, WeakSym };
enum class Verdict { Member, NonMember, Inconclusive };

inline std::string_view to_string(DomainKind k)
{
    switch (k) {
    case DomainKind::SquareIntegrability: return "SquareIntegrability";
    case DomainKind::Strong: return "Strong";
    case DomainKind::FormDomain: return "FormDomain";
    case DomainKind::WeakSym: return "WeakSym";
    }
    return "?";
}

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NonMember: return "NonMember";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct DomainCertificate {
    std::string vector_id;
    DomainKind kind = DomainKind::SquareIntegrability;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<IntegrationVerdict> evidence;
    std::string rule; // "numeric", or the closed-form rule applied

    bool member() const { return verdict == Verdict::Member; }
};

/// Member iff all Converged, NonMember iff any Divergent.
inline Verdict combine(const std::vector<IntegrationVerdict>& evidence)
{
    bool all = true;
    for (const IntegrationVerdict& v : evidence) {
        if (v.divergent()) return Verdict::NonMember;
        all = all && v.converged();
    }
    return all ? Verdict::Member : Verdict::Inconclusive;
}

namespace detail {

inline DomainCertificate certify(std::string id, DomainKind kind, std::vector<IntegrationVerdict> ev, std::string rule)
{
    DomainCertificate c;
    c.vector_id = std::move(id);
    c.kind = kind;
    c.verdict = combine(ev);
    c.evidence = std::move(ev);
    c.rule = std::move(rule);
    return c;
}

inline ScalarFunction abs_square(const ScalarFunction& f)
{
    return [f](double x) { return cplx{std::norm(f(x)), 0.0}; };
}

inline bool is_zero(const Coefficients& c)
{
    if (!c.finite()) return false;
    for (std::size_t i = 0; i < *c.length(); ++i)
        if (c(i) != cplx{}) return false;
    return true;
}

} // namespace detail

/// phi in dom L~(f,E): int |f|^2 dE_{phi,phi} < infinity.
inline DomainCertificate sq_domain_member(const ScalarFunction& f, const OperatorMeasure& e, const Coefficients& phi,
                                          std::string id = {}, const Tolerances& tol = {})
{
    return detail::certify(std::move(id), DomainKind::SquareIntegrability,
                           {integrability_test(detail::abs_square(f), scalar_measure(e, phi, phi), tol)}, "numeric");
}

/// phi in D_F: int |f| dE_{phi,phi} < infinity.
inline DomainCertificate form_domain_member(const ScalarFunction& f, const OperatorMeasure& e, const Coefficients& phi,
                                            std::string id = {}, const Tolerances& tol = {})
{
    return detail::certify(std::move(id), DomainKind::FormDomain,
                           {integrability_test(f, scalar_measure(e, phi, phi), tol)}, "numeric");
}

/// phi in dom L(f,E): int |f| d|E_{psi,phi}| < infinity for every psi.
/// Closed-form rules for mu*I and diagonal families take precedence; finite
/// atomic measures are decided exactly; countable effect families are tested
/// against the basis plus `probes` random unit vectors.
inline DomainCertificate strong_domain_member(const ScalarFunction& f, const OperatorMeasure& e,
                                              const Coefficients& phi, std::string id = {},
                                              const Tolerances& tol = {}, std::uint64_t probe_seed = 0x5eed,
                                              int probes = 4)
{
    using detail::certify;
    if (detail::is_zero(phi)) return certify(std::move(id), DomainKind::Strong, {}, "zero-vector");

    if (const auto* s = std::get_if<ScalarIdentityPovm>(&e))
        return certify(std::move(id), DomainKind::Strong, {integrability_test(f, s->mu, tol)}, "scalar-identity");

    if (const auto* fm = std::get_if<FormMeasure>(&e); fm && fm->representation() == FormRepresentation::DiagonalSequence) {
        // Disjoint diagonal scalarizations: sup over unit psi of sum |psi_m||phi_m| int|f|d|mu_m|
        // is the l2 norm of a_m = |phi_m| int|f| d|mu_m|.
        const auto len = detail::min_length(phi.length(), fm->count());
        std::vector<IntegrationVerdict> ev;
        if (len) {
            for (std::size_t m = 0; m < *len; ++m)
                if (phi(m) != cplx{}) ev.push_back(integrability_test(f, fm->diagonal_measure(m), tol));
            auto c = certify(std::move(id), DomainKind::Strong, std::move(ev), "diagonal-series");
            return c;
        }
        AtomicSequence series;
        series.block = [f, phi, fm = *fm](std::size_t m) {
            const cplx c = phi(m);
            if (c == cplx{}) return AtomicMeasure{};
            const ComplexMeasure mu = fm.diagonal_measure(m);
            const auto* a = std::get_if<AtomicMeasure>(&mu);
            if (!a) throw Error(ErrorKind::ConfigError, "infinite vectors require atomic diagonal measures");
            double am = 0.0;
            for (std::size_t i = 0; i < a->size(); ++i) am += std::abs(f(a->locations[i])) * std::abs(a->weights[i]);
            am *= std::abs(c);
            return AtomicMeasure::point_mass(static_cast<double>(m), am * am);
        };
        ScalarFunction one = [](double) { return cplx{1.0, 0.0}; };
        return certify(std::move(id), DomainKind::Strong, {integrate(one, series, tol)}, "diagonal-series");
    }

    const std::size_t d = model_dim(e);
    std::vector<IntegrationVerdict> ev;
    for (std::size_t j = 0; j < d; ++j) {
        Vector ej = Vector::Zero(static_cast<Eigen::Index>(d));
        ej(static_cast<Eigen::Index>(j)) = 1.0;
        ev.push_back(integrability_test(f, scalar_measure(e, ej, phi), tol));
    }
    const bool finite_atoms = std::holds_alternative<DiscretePovm>(e) || std::holds_alternative<FormMeasure>(e);
    if (!finite_atoms) {
        Rng rng(probe_seed);
        for (int p = 0; p < probes; ++p)
            ev.push_back(integrability_test(f, scalar_measure(e, rng.unit_vector(static_cast<Eigen::Index>(d)), phi), tol));
    }
    return certify(std::move(id), DomainKind::Strong, std::move(ev), finite_atoms ? "finite-atoms" : "basis-and-probe");
}

} // namespace opint

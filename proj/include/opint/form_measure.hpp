#pragma once

// Operator measures beyond finite POVMs: mu * I, countable effect families and
// sesquilinear-form measures (matrix of measures or diagonal sequence).

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "opint/core.hpp"
#include "opint/measure.hpp"
#include "opint/povm.hpp"

namespace opint {

/// Coefficients of a vector in the model basis: either a finite vector or a
/// generator n -> c_n with optional finite length.
class Coefficients {
public:
    Coefficients(const Vector& v) // NOLINT(google-explicit-constructor)
        : at_([v](std::size_t n) { return n < static_cast<std::size_t>(v.size()) ? v(static_cast<Eigen::Index>(n)) : cplx{}; }),
          length_(static_cast<std::size_t>(v.size()))
    {
    }

    static Coefficients sequence(std::function<cplx(std::size_t)> gen, std::optional<std::size_t> length = std::nullopt)
    {
        Coefficients c;
        c.at_ = std::move(gen);
        c.length_ = length;
        return c;
    }

    cplx operator()(std::size_t n) const { return (length_ && n >= *length_) ? cplx{} : at_(n); }
    std::optional<std::size_t> length() const { return length_; }
    bool finite() const { return length_.has_value(); }

    Vector head(std::size_t n) const
    {
        Vector v(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = (*this)(i);
        return v;
    }

private:
    Coefficients() = default;
    std::function<cplx(std::size_t)> at_;
    std::optional<std::size_t> length_;
};

/// E(X) = mu(X) I on a d-dimensional model space, mu a probability measure.
struct ScalarIdentityPovm {
    ComplexMeasure mu;
    std::size_t dim = 1;
};

/// Countably many effects E_n located at location(n).
struct SequencePovm {
    std::size_t dim = 1;
    std::function<Matrix(std::size_t)> effect;
    std::function<double(std::size_t)> location;
    std::size_t first_horizon = 1024;
    std::size_t n_max = 1'000'000;
};

enum class FormRepresentation { MatrixOfMeasures, DiagonalSequence };

/// Positive sesquilinear-form valued measure on the domain truncation V.
class FormMeasure {
public:
    /// entries[n][m] is the measure of the pair (phi_n, phi_m).
    static FormMeasure matrix_of_measures(ModelSpace space, std::vector<std::vector<AtomicMeasure>> entries,
                                          double tol = 1e-12)
    {
        if (entries.size() != space.dim) throw Error(ErrorKind::DimensionMismatch, "entry table has wrong size");
        for (const auto& row : entries)
            if (row.size() != space.dim) throw Error(ErrorKind::DimensionMismatch, "entry table is not square");
        auto collect = [](const AtomicMeasure& m) {
            std::map<double, cplx> acc;
            for (std::size_t i = 0; i < m.size(); ++i) acc[m.locations[i]] += m.weights[i];
            return acc;
        };
        for (std::size_t n = 0; n < space.dim; ++n) {
            if (!entries[n][n].is_positive(tol))
                throw Error(ErrorKind::NotPositive, "diagonal entry " + std::to_string(n) + " is not positive");
            for (std::size_t m = n + 1; m < space.dim; ++m) {
                auto a = collect(entries[n][m]);
                auto b = collect(entries[m][n]);
                for (const auto& [x, w] : b) a[x] -= std::conj(w);
                for (const auto& [x, w] : a)
                    if (std::abs(w) > tol) throw Error(ErrorKind::NotHermitian, "entry(n,m) != conj(entry(m,n))");
            }
        }
        FormMeasure f;
        f.space_ = std::move(space);
        f.repr_ = FormRepresentation::MatrixOfMeasures;
        f.entries_ = std::move(entries);
        return f;
    }

    /// entry(n,m) = delta_nm mu_n. `count` limits the family (nullopt: infinite);
    /// `space` is the truncation used for operator matrices.
    static FormMeasure diagonal(ModelSpace space, std::function<ComplexMeasure(std::size_t)> mu,
                                std::optional<std::size_t> count = std::nullopt)
    {
        FormMeasure f;
        f.space_ = std::move(space);
        f.space_.is_domain_truncation = true;
        f.repr_ = FormRepresentation::DiagonalSequence;
        f.diag_ = std::move(mu);
        f.count_ = count;
        return f;
    }

    static FormMeasure from_povm(const DiscretePovm& e)
    {
        const std::size_t d = e.dim();
        std::vector<std::vector<AtomicMeasure>> entries(d, std::vector<AtomicMeasure>(d));
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t m = 0; m < d; ++m) {
                std::vector<cplx> w;
                for (const Effect& eff : e.effects())
                    w.push_back(eff.matrix()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
                entries[n][m] = AtomicMeasure(e.locations(), std::move(w));
            }
        return matrix_of_measures(e.space(), std::move(entries), 1e-10);
    }

    FormRepresentation representation() const { return repr_; }
    const ModelSpace& space() const { return space_; }
    std::size_t dim() const { return space_.dim; }
    std::optional<std::size_t> count() const
    {
        return repr_ == FormRepresentation::DiagonalSequence ? count_ : std::optional<std::size_t>(space_.dim);
    }

    /// mu_n of the diagonal representation.
    ComplexMeasure diagonal_measure(std::size_t n) const
    {
        if (repr_ != FormRepresentation::DiagonalSequence)
            return entries_.at(n).at(n);
        if (count_ && n >= *count_) throw Error(ErrorKind::IndexOutOfRange, "diagonal index beyond family");
        return diag_(n);
    }

    ComplexMeasure entry(std::size_t n, std::size_t m) const
    {
        if (repr_ == FormRepresentation::MatrixOfMeasures) {
            if (n >= space_.dim || m >= space_.dim) throw Error(ErrorKind::IndexOutOfRange, "entry index");
            return entries_[n][m];
        }
        if (n != m) return AtomicMeasure{};
        return diagonal_measure(n);
    }

    /// sum_{n,m} conj(psi_n) phi_m entry(n,m).
    ComplexMeasure scalar(const Coefficients& psi, const Coefficients& phi) const;

private:
    FormMeasure() = default;
    ModelSpace space_;
    FormRepresentation repr_ = FormRepresentation::MatrixOfMeasures;
    std::vector<std::vector<AtomicMeasure>> entries_;
    std::function<ComplexMeasure(std::size_t)> diag_;
    std::optional<std::size_t> count_;
};

using OperatorMeasure = std::variant<DiscretePovm, ScalarIdentityPovm, SequencePovm, FormMeasure>;

namespace detail {

inline void append(AtomicMeasure& into, const AtomicMeasure& m, cplx c)
{
    for (std::size_t i = 0; i < m.size(); ++i) {
        into.locations.push_back(m.locations[i]);
        into.weights.push_back(c * m.weights[i]);
    }
}

inline std::optional<std::size_t> min_length(std::optional<std::size_t> a, std::optional<std::size_t> b)
{
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

inline AtomicMeasure block_of(const ComplexMeasure& m, std::size_t j)
{
    if (const auto* a = std::get_if<AtomicMeasure>(&m)) return j == 0 ? *a : AtomicMeasure{};
    if (const auto* s = std::get_if<AtomicSequence>(&m)) {
        if (s->finite_length && j >= *s->finite_length) return {};
        return s->block(j);
    }
    throw Error(ErrorKind::ConfigError, "density entries are not supported in form measures");
}

inline Vector coefficients_to_vector(const Coefficients& c, std::size_t d)
{
    if (!c.finite() || *c.length() != d)
        throw Error(ErrorKind::DimensionMismatch, "vector must have exactly " + std::to_string(d) + " coefficients");
    return c.head(d);
}

} // namespace detail

inline ComplexMeasure FormMeasure::scalar(const Coefficients& psi, const Coefficients& phi) const
{
    if (repr_ == FormRepresentation::MatrixOfMeasures) {
        const Vector p = detail::coefficients_to_vector(psi, space_.dim);
        const Vector q = detail::coefficients_to_vector(phi, space_.dim);
        AtomicMeasure out;
        for (std::size_t n = 0; n < space_.dim; ++n)
            for (std::size_t m = 0; m < space_.dim; ++m) {
                const cplx c = std::conj(p(static_cast<Eigen::Index>(n))) * q(static_cast<Eigen::Index>(m));
                if (c != cplx{}) detail::append(out, entries_[n][m], c);
            }
        return out;
    }

    const auto len = detail::min_length(detail::min_length(psi.length(), phi.length()), count_);
    if (len) {
        std::vector<std::pair<cplx, ComplexMeasure>> terms;
        bool all_atomic = true;
        for (std::size_t n = 0; n < *len; ++n) {
            const cplx c = std::conj(psi(n)) * phi(n);
            if (c == cplx{}) continue;
            terms.emplace_back(c, diag_(n));
            if (std::holds_alternative<DensityMeasure>(terms.back().second))
                throw Error(ErrorKind::ConfigError, "density entries are not supported in form measures");
            all_atomic = all_atomic && std::holds_alternative<AtomicMeasure>(terms.back().second);
        }
        if (all_atomic) {
            AtomicMeasure out;
            for (const auto& [c, m] : terms) detail::append(out, std::get<AtomicMeasure>(m), c);
            return out;
        }
        AtomicSequence seq;
        seq.block = [terms](std::size_t j) {
            AtomicMeasure out;
            for (const auto& [c, m] : terms) detail::append(out, detail::block_of(m, j), c);
            return out;
        };
        for (const auto& [c, m] : terms)
            if (const auto* s = std::get_if<AtomicSequence>(&m)) {
                seq.first_horizon = s->first_horizon;
                seq.n_max = s->n_max;
            }
        return seq;
    }

    // Infinite coefficient sequences: block n is conj(psi_n) phi_n mu_n.
    AtomicSequence seq;
    seq.block = [psi, phi, gen = diag_](std::size_t n) {
        const cplx c = std::conj(psi(n)) * phi(n);
        if (c == cplx{}) return AtomicMeasure{};
        const ComplexMeasure m = gen(n);
        const auto* a = std::get_if<AtomicMeasure>(&m);
        if (!a) throw Error(ErrorKind::ConfigError, "infinite vectors require atomic diagonal measures");
        return a->scaled(c);
    };
    return seq;
}

inline std::size_t model_dim(const OperatorMeasure& e)
{
    return std::visit(
        [](const auto& m) -> std::size_t {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DiscretePovm> || std::is_same_v<M, FormMeasure>)
                return m.dim();
            else
                return m.dim;
        },
        e);
}

inline bool is_projection_valued(const OperatorMeasure& e)
{
    const auto* p = std::get_if<DiscretePovm>(&e);
    return p && p->flags().projection_valued;
}

/// E_{psi,phi} for any supported operator measure.
inline ComplexMeasure scalar_measure(const OperatorMeasure& e, const Coefficients& psi, const Coefficients& phi)
{
    return std::visit(
        [&](const auto& m) -> ComplexMeasure {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DiscretePovm>) {
                return scalar_measure(m, detail::coefficients_to_vector(psi, m.dim()),
                                      detail::coefficients_to_vector(phi, m.dim()));
            } else if constexpr (std::is_same_v<M, ScalarIdentityPovm>) {
                const cplx c = detail::coefficients_to_vector(psi, m.dim).dot(detail::coefficients_to_vector(phi, m.dim));
                return std::visit(
                    [c](const auto& mu) -> ComplexMeasure {
                        using N = std::decay_t<decltype(mu)>;
                        if constexpr (std::is_same_v<N, AtomicMeasure>) {
                            return mu.scaled(c);
                        } else if constexpr (std::is_same_v<N, AtomicSequence>) {
                            AtomicSequence s = mu;
                            s.block = [c, inner = mu.block](std::size_t n) { return inner(n).scaled(c); };
                            return s;
                        } else {
                            DensityMeasure dm = mu;
                            dm.density = [c, inner = mu.density](double x) { return c * inner(x); };
                            return dm;
                        }
                    },
                    m.mu);
            } else if constexpr (std::is_same_v<M, SequencePovm>) {
                const Vector p = detail::coefficients_to_vector(psi, m.dim);
                const Vector q = detail::coefficients_to_vector(phi, m.dim);
                AtomicSequence s;
                s.first_horizon = m.first_horizon;
                s.n_max = m.n_max;
                s.block = [p, q, eff = m.effect, loc = m.location](std::size_t n) {
                    return AtomicMeasure::point_mass(loc(n), p.dot(eff(n) * q));
                };
                return s;
            } else {
                return m.scalar(psi, phi);
            }
        },
        e);
}

} // namespace opint

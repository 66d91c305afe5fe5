#pragma once

// Small dense linear-algebra helpers and seeded random generators.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opint/core.hpp"

namespace opint {

/// Operator (spectral) norm. Diagonal matrices are read off directly;
/// large matrices use divide-and-conquer SVD.
inline double opnorm(const Matrix& a)
{
    if (a.size() == 0) return 0.0;
    if (a.rows() == a.cols() && (a - Matrix(a.diagonal().asDiagonal())).isZero(0.0))
        return a.diagonal().cwiseAbs().maxCoeff();
    if (std::min(a.rows(), a.cols()) > 48) {
        Eigen::BDCSVD<Matrix> svd(a);
        return svd.singularValues()(0);
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

inline double hermitian_defect(const Matrix& a) { return opnorm(a - a.adjoint()); }

/// Entrywise max |a - a^*|; cheap symmetry test for large blocks.
inline double hermitian_defect_cheap(const Matrix& a)
{
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::DecompositionFailure, "eigenvalues did not converge");
    return es.eigenvalues()(0);
}

/// Singular values above rows * eps * sigma_max count toward the rank.
inline std::size_t numerical_rank(const Matrix& a)
{
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const RealVector& s = svd.singularValues();
    const double cut = static_cast<double>(std::max(a.rows(), a.cols())) *
                       std::numeric_limits<double>::epsilon() * s(0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

/// Positive square root of a positive semidefinite matrix; tiny negative
/// eigenvalues (round-off) are set to zero.
inline Matrix psd_sqrt(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) throw Error(ErrorKind::DecompositionFailure, "eigendecomposition failed");
    RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix psd_inverse_sqrt(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
    if (es.info() != Eigen::Success) throw Error(ErrorKind::DecompositionFailure, "eigendecomposition failed");
    if (es.eigenvalues()(0) <= 0.0) throw Error(ErrorKind::NotPositive, "matrix is not positive definite");
    RealVector ev = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Deterministic source of Gaussian matrices and vectors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    cplx complex_normal() { return {normal(), normal()}; }

    Matrix gaussian(Eigen::Index rows, Eigen::Index cols)
    {
        Matrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
        return m;
    }

    Vector vector(Eigen::Index n)
    {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
        return v;
    }

    Vector unit_vector(Eigen::Index n)
    {
        Vector v = vector(n);
        return v / v.norm();
    }

    Matrix hermitian(Eigen::Index n)
    {
        Matrix g = gaussian(n, n);
        return 0.5 * (g + g.adjoint());
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace opint

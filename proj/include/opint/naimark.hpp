#pragma once

// Minimal Naimark dilation of a discrete POVM by block construction.

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Eigenvalues>

#include "opint/core.hpp"
#include "opint/linalg.hpp"
#include "opint/povm.hpp"

namespace opint {

/// (K, F, V) with E_i = V^* F_i V. F_i are coordinate projections onto block i.
struct NaimarkDilation {
    std::size_t dilation_dim = 0;
    Matrix isometry;                    // V: dilation_dim x d
    std::vector<Matrix> projections;    // F_i: dilation_dim x dilation_dim
    std::vector<std::size_t> block_offsets;
    std::vector<std::size_t> block_ranks;
    bool minimal = false;

    /// F(f) = sum_i f(w_i) F_i, diagonal in the block coordinates.
    Matrix spectral_integral(const ScalarFunction& f, const std::vector<double>& locations) const
    {
        const auto n = static_cast<Eigen::Index>(dilation_dim);
        Matrix out = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < block_ranks.size(); ++i) {
            const cplx v = f(locations.at(i));
            for (std::size_t r = 0; r < block_ranks[i]; ++r) {
                const auto k = static_cast<Eigen::Index>(block_offsets[i] + r);
                out(k, k) = v;
            }
        }
        return out;
    }
};

struct DilationReport {
    double isometry_defect = 0.0;    // ||V^*V - I|| (meaningful when E normalized)
    double compression_defect = 0.0; // max_i ||V^*F_iV - E_i||
    double orthogonality_defect = 0.0; // max_{i,j} ||F_iF_j - delta_ij F_i||
    double resolution_defect = 0.0;  // ||sum F_i - I_K||
    bool dimension_is_rank_sum = false;
};

/// For each outcome: R_i = E_i^{1/2}; keep the r_i = rank(E_i) rows of R_i
/// along an orthonormal basis of its range; stack the compressed blocks into V.
inline NaimarkDilation naimark_dilate(const DiscretePovm& e)
{
    const auto d = static_cast<Eigen::Index>(e.dim());
    std::vector<Matrix> blocks;
    NaimarkDilation out;
    std::size_t offset = 0;
    for (const Effect& eff : e.effects()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(eff.matrix());
        if (es.info() != Eigen::Success)
            throw Error(ErrorKind::DecompositionFailure, "eigendecomposition of an effect did not converge");
        const RealVector& ev = es.eigenvalues();
        const double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
        const double cut = static_cast<double>(d) * std::numeric_limits<double>::epsilon() * top;
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            if (ev(k) > cut) keep.push_back(k);
        // Block rows: sqrt(lambda_k) u_k^*, i.e. the range-compressed square root.
        Matrix block(static_cast<Eigen::Index>(keep.size()), d);
        for (std::size_t r = 0; r < keep.size(); ++r)
            block.row(static_cast<Eigen::Index>(r)) =
                std::sqrt(ev(keep[r])) * es.eigenvectors().col(keep[r]).adjoint();
        out.block_offsets.push_back(offset);
        out.block_ranks.push_back(keep.size());
        offset += keep.size();
        blocks.push_back(std::move(block));
    }
    out.dilation_dim = offset;
    const auto n = static_cast<Eigen::Index>(offset);
    out.isometry = Matrix::Zero(n, d);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto off = static_cast<Eigen::Index>(out.block_offsets[i]);
        out.isometry.middleRows(off, blocks[i].rows()) = blocks[i];
        Matrix f = Matrix::Zero(n, n);
        for (Eigen::Index r = 0; r < blocks[i].rows(); ++r) f(off + r, off + r) = 1.0;
        out.projections.push_back(std::move(f));
    }
    out.minimal = true;
    return out;
}

inline DilationReport verify_dilation(const DiscretePovm& e, const NaimarkDilation& dil)
{
    DilationReport r;
    const auto d = static_cast<Eigen::Index>(e.dim());
    const auto n = static_cast<Eigen::Index>(dil.dilation_dim);
    const Matrix& v = dil.isometry;
    r.isometry_defect = opnorm(v.adjoint() * v - Matrix::Identity(d, d));
    Matrix sum = Matrix::Zero(n, n);
    std::size_t rank_sum = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Matrix& fi = dil.projections[i];
        r.compression_defect = std::max(r.compression_defect, opnorm(v.adjoint() * fi * v - e.effect(i).matrix()));
        for (std::size_t j = 0; j < e.size(); ++j) {
            const Matrix expected = (i == j) ? fi : Matrix::Zero(n, n);
            r.orthogonality_defect = std::max(r.orthogonality_defect, opnorm(fi * dil.projections[j] - expected));
        }
        sum += fi;
        rank_sum += numerical_rank(e.effect(i).matrix());
    }
    r.resolution_defect = opnorm(sum - Matrix::Identity(n, n));
    r.dimension_is_rank_sum = (rank_sum == dil.dilation_dim);
    return r;
}

/// ||int f dE - V^* (int f dF) V|| for bounded f.
inline double dilation_integral_check(const ScalarFunction& f, const DiscretePovm& e, const NaimarkDilation& dil)
{
    const Matrix direct = bounded_integral(f, e);
    const Matrix via = dil.isometry.adjoint() * dil.spectral_integral(f, e.locations()) * dil.isometry;
    return opnorm(direct - via);
}

} // namespace opint

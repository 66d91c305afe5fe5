#pragma once

// Finite-difference and Galerkin realizations of P_0^n, (P_0^n)^* and P_0^* P_0.

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "opint/box/state.hpp"
#include "opint/core.hpp"
#include "opint/quadrature.hpp"

namespace opint::box {

enum class Flavor { Dirichlet, Adjoint };

/// Central difference stencil of (d/dx)^n: delta^n for even n, mu delta * delta^{n-1}
/// for odd n. Returns weights on offsets -s..s (s = ceil(n/2)), unscaled by h.
inline std::vector<double> central_stencil(int n)
{
    if (n < 1) throw Error(ErrorKind::ConfigError, "derivative order must be >= 1");
    auto binomial_diff = [](int m) {
        std::vector<double> w(static_cast<std::size_t>(m + 1));
        double c = 1.0;
        for (int i = 0; i <= m; ++i) {
            w[static_cast<std::size_t>(i)] = ((m - i) % 2 == 0 ? 1.0 : -1.0) * c;
            c = c * (m - i) / (i + 1);
        }
        return w; // offsets -m/2 .. m/2 (m even)
    };
    if (n % 2 == 0) return binomial_diff(n);
    const std::vector<double> even = binomial_diff(n - 1);
    std::vector<double> w(even.size() + 2, 0.0); // convolve with (-1/2, 0, 1/2)
    for (std::size_t i = 0; i < even.size(); ++i) {
        w[i] -= 0.5 * even[i];
        w[i + 2] += 0.5 * even[i];
    }
    return w;
}

/// Grid realization of (-i d/dx)^n on t_j = j h, j = 0..M. Dirichlet flavor:
/// unknowns at nodes n..M-n (the first and last n nodes vanish, mirroring
/// phi^(k)(0) = phi^(k)(ell) = 0 for k < n), rows at every node where the stencil
/// fits. Adjoint flavor: the conjugate transpose of the Dirichlet matrix.
inline Matrix p0_power_matrix(int n, const BoxConfig& cfg, Flavor flavor = Flavor::Dirichlet)
{
    cfg.validate();
    const int M = cfg.M;
    const int s = (n + 1) / 2;
    if (M < 2 * n + 2) throw Error(ErrorKind::ConfigError, "grid too small for the requested power");
    const std::vector<double> w = central_stencil(n);
    const double h = cfg.h();
    const cplx factor = std::pow(cplx{0.0, -1.0} / h, n);
    const int rows = M - 2 * s + 1;  // nodes s..M-s
    const int cols = M - 2 * n + 1;  // nodes n..M-n
    Matrix a = Matrix::Zero(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const int node = s + r;
        for (int o = -s; o <= s; ++o) {
            const int c = node + o - n;
            if (c < 0 || c >= cols) continue;
            a(r, c) += factor * w[static_cast<std::size_t>(o + s)];
        }
    }
    if (flavor == Flavor::Adjoint) return a.adjoint();
    return a;
}

/// P_0^* P_0 on interior nodes 1..M-1: tridiag(-1, 2, -1) / h^2 (real symmetric).
struct Tridiagonal {
    RealVector diag;
    RealVector off;
};

inline Tridiagonal p0star_p0_tridiagonal(const BoxConfig& cfg)
{
    cfg.validate();
    const int n = cfg.M - 1;
    const double h2 = cfg.h() * cfg.h();
    return {RealVector::Constant(n, 2.0 / h2), RealVector::Constant(n - 1, -1.0 / h2)};
}

struct EigenReport {
    std::vector<double> eigenvalues;          // finite differences, ascending
    std::vector<double> galerkin;             // sine-basis Galerkin
    std::vector<double> exact_discrete;       // (2/h^2)(1 - cos(n pi h / ell))
    std::vector<double> paper_values;         // n^2 pi^2 / (2 ell^2)
    std::vector<double> hamiltonian;          // eigenvalue / (2 m)
    std::vector<double> overlap;              // |<v_n | psi_n>| on the grid
    std::vector<RealVector> eigenvectors;     // grid-normalized, interior nodes
    bool paper_discrepancy = false;           // paper value differs from the eigenvalue by > 1%
};

/// Lowest `count` eigenpairs of P_0^* P_0: eigenvalues from the tridiagonal QL
/// solver, eigenvectors by inverse iteration, cross-checked by a sine Galerkin
/// matrix <psi_m' | psi_n'> assembled by quadrature.
inline EigenReport eigen_p0star_p0(const BoxConfig& cfg, int count = 5)
{
    const Tridiagonal t = p0star_p0_tridiagonal(cfg);
    const auto n = t.diag.size();
    if (count < 1 || count > n) throw Error(ErrorKind::ConfigError, "eigenpair count out of range");
    Eigen::SelfAdjointEigenSolver<RealMatrix> es;
    es.computeFromTridiagonal(t.diag, t.off, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "tridiagonal eigensolver failed");

    EigenReport rep;
    const double h = cfg.h();
    for (int k = 0; k < count; ++k) {
        const double lam = es.eigenvalues()(k);
        rep.eigenvalues.push_back(lam);
        const int idx = k + 1;
        rep.exact_discrete.push_back(2.0 / (h * h) * (1.0 - std::cos(idx * pi * h / cfg.ell)));
        rep.paper_values.push_back(idx * idx * pi * pi / (2.0 * cfg.ell * cfg.ell));
        rep.hamiltonian.push_back(lam / (2.0 * cfg.mass));
        if (std::abs(rep.paper_values.back() - lam) > 0.01 * lam) rep.paper_discrepancy = true;

        // Inverse iteration with a shift just below the eigenvalue (Thomas algorithm).
        const double shift = lam * (1.0 - 1e-10) - 1e-12;
        RealVector v = RealVector::Ones(n);
        for (Eigen::Index j = 0; j < n; ++j) v(j) = std::sin(idx * pi * (j + 1) / cfg.M) + 1e-3 * std::cos(0.7 * j);
        for (int it = 0; it < 3; ++it) {
            RealVector c(n), d(n);
            double denom = t.diag(0) - shift;
            c(0) = (n > 1 ? t.off(0) : 0.0) / denom;
            d(0) = v(0) / denom;
            for (Eigen::Index j = 1; j < n; ++j) {
                denom = (t.diag(j) - shift) - t.off(j - 1) * c(j - 1);
                c(j) = (j + 1 < n ? t.off(j) : 0.0) / denom;
                d(j) = (v(j) - t.off(j - 1) * d(j - 1)) / denom;
            }
            RealVector x(n);
            x(n - 1) = d(n - 1);
            for (Eigen::Index j = n - 2; j >= 0; --j) x(j) = d(j) - c(j) * x(j + 1);
            if (!x.allFinite()) throw Error(ErrorKind::EigSolverFailure, "inverse iteration broke down");
            v = x / (x.norm() * std::sqrt(h));
        }
        double ov = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            ov += v(j) * std::sqrt(2.0 / cfg.ell) * std::sin(idx * pi * (j + 1) / cfg.M);
        rep.overlap.push_back(std::abs(ov * h));
        rep.eigenvectors.push_back(std::move(v));
    }

    // Galerkin: G_mn = <psi_m' | psi_n'> on the first max(N, count) sine modes.
    const int nb = std::max(cfg.N, count);
    RealMatrix g(nb, nb);
    for (int a = 1; a <= nb; ++a)
        for (int b = a; b <= nb; ++b) {
            const double ka = a * pi / cfg.ell, kb = b * pi / cfg.ell;
            auto f = [&](double x) {
                return cplx{(2.0 / cfg.ell) * ka * kb * std::cos(ka * x) * std::cos(kb * x), 0.0};
            };
            const double v = quad::panels(f, 0.0, cfg.ell, cfg.ell / (2.0 * nb)).value.real();
            g(a - 1, b - 1) = v;
            g(b - 1, a - 1) = v;
        }
    Eigen::SelfAdjointEigenSolver<RealMatrix> gs(g, Eigen::EigenvaluesOnly);
    if (gs.info() != Eigen::Success) throw Error(ErrorKind::EigSolverFailure, "Galerkin eigensolver failed");
    for (int k = 0; k < count; ++k) rep.galerkin.push_back(gs.eigenvalues()(k));
    return rep;
}

} // namespace opint::box

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace opint {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

enum class ErrorKind {
    NonEvaluable,
    DimensionMismatch,
    NotPositive,
    NotHermitian,
    DecompositionFailure,
    DomainViolation,
    SeparatingSubspaceTooSmall,
    IndexOutOfRange,
    ConfigError,
    EigSolverFailure,
    InsufficientBoundaryData,
    ScenarioFailure,
    IoFailure,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NonEvaluable: return "NonEvaluable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DecompositionFailure: return "DecompositionFailure";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::SeparatingSubspaceTooSmall: return "SeparatingSubspaceTooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::EigSolverFailure: return "EigSolverFailure";
    case ErrorKind::InsufficientBoundaryData: return "InsufficientBoundaryData";
    case ErrorKind::ScenarioFailure: return "ScenarioFailure";
    case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

/// Library exception. Every failure carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numerical tolerances shared across modules.
struct Tolerances {
    double psd = 1e-10;           // min eigenvalue floor for effects
    double hermitian = 1e-12;     // ||A - A^*|| for effects
    double conv_atomic = 1e-8;    // relative change N -> 2N, atomic series
    double conv_density = 1e-5;   // relative change T -> 2T, densities
    double divergence_margin = 5; // slope must exceed margin * fit residual
    double persistence = 0.95;    // last/first increment ratio required for divergence
};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace opint

#pragma once

// Dense complex linear algebra used by every other header: norms and residual
// scaling, Hermitian and general eigendecompositions, inversion, and the
// principal square root of a positive-definite matrix.
//
// Storage and kernels come from Eigen. The general solver is Eigen's complex
// Schur route (Hessenberg reduction followed by shifted QR); left eigenvectors
// are always taken as the inverse of the right-eigenvector matrix so that the
// pair is biorthonormal to working precision.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sturm/errors.hpp"

namespace sturm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Absolute floor applied to every denominator of a relative residual.
inline constexpr double kAbsoluteFloor = 1e-14;

/// Non-fatal diagnostics (the IllConditioned channel).
using Warnings = std::vector<std::string>;

inline double scaled(double numerator, double denominator) {
    return numerator / std::max(denominator, kAbsoluteFloor);
}

inline double max_abs(const ComplexMatrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

inline void require_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + " must be square and non-empty, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": shape mismatch");
    }
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
    if (!a.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN/Inf entries");
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblem

struct HermitianEigen {
    RealVector values;     // ascending
    ComplexMatrix vectors; // unitary, column j pairs with values[j]
};

/// `hermitian_tol` is relative to max|a_ij|.
inline HermitianEigen eig_hermitian(const ComplexMatrix& a, double hermitian_tol = 1e-10) {
    require_square(a, "eig_hermitian input");
    require_finite(a, "eig_hermitian input");
    const double asym = max_abs(a - a.adjoint());
    if (asym > hermitian_tol * std::max(max_abs(a), kAbsoluteFloor)) {
        throw Error(ErrorKind::NotHermitian,
                    "max|A - A^H| = " + std::to_string(asym) + " exceeds tolerance");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues of the Hermitian-definite pencil h x = lambda w x, ascending.
inline RealVector eig_hermitian_definite(const ComplexMatrix& h, const ComplexMatrix& w) {
    require_square(h, "pencil h");
    require_same_shape(h, w, "pencil (h, w)");
    Eigen::LLT<ComplexMatrix> chol(hermitian_part(w));
    if (chol.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "weight of Hermitian pencil is not positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> solver(
        hermitian_part(h), hermitian_part(w), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian-definite pencil solver did not converge");
    }
    return solver.eigenvalues();
}

// ---------------------------------------------------------------------------
// General (non-normal) eigenproblem

struct GeneralEigenDecomposition {
    ComplexVector eigenvalues; // ascending by real part, then imaginary part
    ComplexMatrix right;       // column j: right eigenvector of eigenvalue j
    ComplexMatrix left;        // right^-1; row j is the matched left functional
};

struct GeneralEigenOptions {
    /// Reject when min |l_i - l_j| <= degeneracy_tol * max |l|.
    double degeneracy_tol = 1e-8;
    /// Reject the eigenbasis when its reciprocal condition estimate falls below this.
    double singular_rcond = 1e-14;
};

inline double min_eigenvalue_gap(const ComplexVector& values) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        for (Eigen::Index j = i + 1; j < values.size(); ++j) {
            gap = std::min(gap, std::abs(values[i] - values[j]));
        }
    }
    return gap;
}

inline GeneralEigenDecomposition eig_general(const ComplexMatrix& a, const GeneralEigenOptions& opts = {}) {
    require_square(a, "eig_general input");
    require_finite(a, "eig_general input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "complex Schur iteration did not converge");
    }
    const Eigen::Index n = a.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const ComplexVector& raw = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (raw[i].real() != raw[j].real()) return raw[i].real() < raw[j].real();
        return raw[i].imag() < raw[j].imag();
    });

    GeneralEigenDecomposition out;
    out.eigenvalues.resize(n);
    out.right.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues[k] = raw[order[static_cast<std::size_t>(k)]];
        out.right.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    }

    const double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), kAbsoluteFloor);
    if (n > 1) {
        const double gap = min_eigenvalue_gap(out.eigenvalues);
        if (gap <= opts.degeneracy_tol * scale) {
            throw Error(ErrorKind::DegenerateSpectrum,
                        "minimum eigenvalue gap " + std::to_string(gap) + " below tolerance");
        }
    }

    Eigen::PartialPivLU<ComplexMatrix> lu(out.right);
    if (!(lu.rcond() > opts.singular_rcond)) {
        throw Error(ErrorKind::SingularEigenbasis,
                    "eigenvector matrix reciprocal condition " + std::to_string(lu.rcond()));
    }
    out.left = lu.inverse();
    return out;
}

// ---------------------------------------------------------------------------
// Inversion and linear solves

struct LinearSolveOptions {
    /// Smallest |pivot| relative to the largest before the matrix counts as singular.
    double pivot_tol = 1e-14;
    /// Condition estimate above which an IllConditioned warning is emitted.
    double condition_cap = 1e12;
};

inline Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& a, const LinearSolveOptions& opts,
                                                      Warnings* warnings) {
    require_square(a, "linear system matrix");
    require_finite(a, "linear system matrix");
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (!(pivots.minCoeff() > opts.pivot_tol * std::max(pivots.maxCoeff(), kAbsoluteFloor))) {
        throw Error(ErrorKind::SingularMatrix, "pivot below threshold");
    }
    const double rcond = lu.rcond();
    if (warnings && rcond * opts.condition_cap < 1.0) {
        warnings->push_back("IllConditioned: condition estimate " + std::to_string(1.0 / rcond));
    }
    return lu;
}

inline ComplexMatrix inverse(const ComplexMatrix& a, Warnings* warnings = nullptr,
                             const LinearSolveOptions& opts = {}) {
    return checked_lu(a, opts, warnings).inverse();
}

inline ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b, Warnings* warnings = nullptr,
                           const LinearSolveOptions& opts = {}) {
    if (b.rows() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve: row count mismatch");
    return checked_lu(a, opts, warnings).solve(b);
}

/// Reciprocal condition estimate in the 1-norm; 0 for singular input.
inline double reciprocal_condition(const ComplexMatrix& a) {
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const double r = lu.rcond();
    return std::isfinite(r) ? r : 0.0;
}

// ---------------------------------------------------------------------------
// Principal square root

/// Hermitian positive-definite square root. Rejects input whose smallest
/// eigenvalue is not above `positivity_tol * ||a||_F`.
inline ComplexMatrix sqrtm_positive(const ComplexMatrix& a, double positivity_tol = 1e-12) {
    const HermitianEigen eig = eig_hermitian(a);
    const double threshold = positivity_tol * std::max(a.norm(), kAbsoluteFloor);
    if (!(eig.values[0] > threshold)) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    "smallest eigenvalue " + std::to_string(eig.values[0]));
    }
    const ComplexMatrix root =
        eig.vectors * eig.values.cwiseSqrt().cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    return hermitian_part(root);
}

}  // namespace sturm

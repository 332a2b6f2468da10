#pragma once

// The Sturm-Schroedinger doublet H|l> = l W|l>, H^+|l>> = l W^+|l>> and the
// biorthogonal vector families built from it.
//
// Notation used throughout:
//   right       R, column j = |l_j>
//   left        L, row j    = {{l_j|      (L = R^-1, so {{l|l'> = delta)
//   dual        D, column j = |l_j>>  = W^-+ (row j of L)^+
//   curly       column j    = |l_j}   = W |l_j>
//   curly_dual  column j    = |l_j}}  = W^+ |l_j>> = (row j of L)^+

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sturm/matrix.hpp"

namespace sturm {

enum class Provenance { Dressed, Hermitian, Liouville, File, Canned };

inline constexpr std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::Dressed: return "dressed";
    case Provenance::Hermitian: return "hermitian";
    case Provenance::Liouville: return "liouville";
    case Provenance::File: return "file";
    case Provenance::Canned: return "canned";
    }
    return "file";
}

inline Provenance provenance_from_string(std::string_view s) {
    if (s == "dressed") return Provenance::Dressed;
    if (s == "hermitian") return Provenance::Hermitian;
    if (s == "liouville") return Provenance::Liouville;
    if (s == "canned") return Provenance::Canned;
    return Provenance::File;
}

/// The pair (H, W). W invertibility is only checked when the pencil is solved.
struct SturmianPencil {
    ComplexMatrix H;
    ComplexMatrix W;
    Provenance provenance = Provenance::File;
    std::string label;

    SturmianPencil() = default;
    SturmianPencil(ComplexMatrix h, ComplexMatrix w, Provenance prov = Provenance::File, std::string lbl = {})
        : H(std::move(h)), W(std::move(w)), provenance(prov), label(std::move(lbl)) {
        require_square(H, "H");
        require_same_shape(H, W, "pencil (H, W)");
        require_finite(H, "H");
        require_finite(W, "W");
    }

    Eigen::Index n() const { return H.rows(); }
};

/// How the per-mode scale of the right eigenvectors was fixed.
///
/// Every eigenvector is first brought to a base normalization: its largest
/// component is made real positive and it gets unit length in the Hermitian
/// part of W (plain Euclidean length if that part is not positive definite).
/// Afterwards the solver looks for per-mode positive factors that make the
/// single-series metric sum Hermitian:
///   Balanced   a unique (up to a global factor) positive rescaling exists and was applied;
///   Ambiguous  the rescaling is not unique (for instance W = I); base scale kept;
///   Infeasible no positive rescaling exists; base scale kept.
enum class ModeNormalization { Balanced, Ambiguous, Infeasible };

inline constexpr std::string_view to_string(ModeNormalization m) {
    switch (m) {
    case ModeNormalization::Balanced: return "balanced";
    case ModeNormalization::Ambiguous: return "ambiguous";
    case ModeNormalization::Infeasible: return "infeasible";
    }
    return "infeasible";
}

struct BiorthogonalSystem {
    RealVector lambdas;
    ComplexMatrix right;
    ComplexMatrix left;
    ComplexMatrix dual;
    ComplexMatrix curly;
    ComplexMatrix curly_dual;
    /// max |Im l| before the imaginary parts were dropped.
    double reality_residual = 0.0;
    ModeNormalization normalization = ModeNormalization::Ambiguous;
    /// sigma_min / sigma_max of the balancing system; 0 when exactly balanced.
    double balance_residual = 0.0;

    Eigen::Index n() const { return lambdas.size(); }
};

struct PencilOptions {
    /// Accept l when |Im l| <= reality_tol * max(1, |Re l|).
    double reality_tol = 1e-8;
    /// Balancing is accepted when sigma_min <= balance_tol * sigma_max.
    double balance_tol = 1e-8;
    GeneralEigenOptions eig{};
};

namespace detail {

inline void finalize_families(BiorthogonalSystem& sys, const SturmianPencil& pencil) {
    sys.curly = pencil.W * sys.right;
    sys.curly_dual = sys.left.adjoint();
    sys.dual = solve(pencil.W.adjoint(), sys.curly_dual);
}

inline Eigen::Index dominant_component(const ComplexVector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= (1.0 - 1e-12) * peak) return i;
    }
    return 0;
}

/// Column scale factors c_j applied as R_j *= c_j, L_j /= c_j.
inline void rescale_columns(BiorthogonalSystem& sys, const ComplexVector& c) {
    for (Eigen::Index j = 0; j < c.size(); ++j) {
        sys.right.col(j) *= c[j];
        sys.left.row(j) /= c[j];
    }
}

inline ComplexVector base_scale(const ComplexMatrix& right, const ComplexMatrix& weight) {
    const ComplexMatrix wh = hermitian_part(weight);
    Eigen::LLT<ComplexMatrix> chol(wh);
    const bool weighted = chol.info() == Eigen::Success;
    ComplexVector c(right.cols());
    for (Eigen::Index j = 0; j < right.cols(); ++j) {
        const ComplexVector v = right.col(j);
        const Complex pivot = v[dominant_component(v)];
        const Complex phase = std::conj(pivot) / std::abs(pivot);
        double length = weighted ? std::sqrt(std::abs((v.adjoint() * wh * v)(0, 0))) : v.norm();
        c[j] = phase / length;
    }
    return c;
}

/// Positive d with d_j G_jk = conj(G_kj) d_k, G = L W R; the single-series
/// sum built from R_j / sqrt(d_j) is Hermitian exactly when d solves this.
struct BalanceResult {
    ModeNormalization kind;
    RealVector d;
    double residual;
};

inline BalanceResult balance_weights(const BiorthogonalSystem& sys, const ComplexMatrix& weight, double tol) {
    const Eigen::Index n = sys.right.cols();
    const ComplexMatrix g = sys.left * weight * sys.right;
    BalanceResult out{ModeNormalization::Ambiguous, RealVector::Ones(n), 0.0};
    if (n < 2) return out;

    const Eigen::Index pairs = n * (n - 1) / 2;
    RealMatrix k = RealMatrix::Zero(2 * pairs + n, n);
    Eigen::Index row = 0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const Complex p = g(a, b);
            const Complex q = std::conj(g(b, a));
            k(row, a) = p.real();
            k(row, b) = -q.real();
            k(row + 1, a) = p.imag();
            k(row + 1, b) = -q.imag();
            row += 2;
        }
    }
    for (Eigen::Index a = 0; a < n; ++a) k(row++, a) = 2.0 * g(a, a).imag();

    Eigen::JacobiSVD<RealMatrix> svd(k, Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    const double top = sigma[0];
    if (!(top > kAbsoluteFloor * std::max(g.norm(), 1.0))) return out;
    out.residual = sigma[n - 1] / top;
    if (sigma[n - 1] > tol * top) {
        out.kind = ModeNormalization::Infeasible;
        return out;
    }
    if (sigma[n - 2] <= tol * top) return out;

    RealVector d = svd.matrixV().col(n - 1);
    if (d.sum() < 0) d = -d;
    if (!(d.minCoeff() > 1e-8 * d.maxCoeff())) {
        out.kind = ModeNormalization::Infeasible;
        return out;
    }
    out.kind = ModeNormalization::Balanced;
    out.d = d * (static_cast<double>(n) / d.sum());
    return out;
}

}  // namespace detail

/// Solves the doublet through A = W^-1 H. The dual family is derived from the
/// rows of R^-1, never from a second eigensolve of H^+.
inline BiorthogonalSystem solve_pencil(const SturmianPencil& pencil, const PencilOptions& opts = {}) {
    require_square(pencil.H, "H");
    require_same_shape(pencil.H, pencil.W, "pencil (H, W)");
    ComplexMatrix a;
    try {
        a = solve(pencil.W, pencil.H);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularWeight, "W is singular");
        throw;
    }
    GeneralEigenDecomposition eig = eig_general(a, opts.eig);

    BiorthogonalSystem sys;
    const Eigen::Index n = a.rows();
    std::ostringstream offending;
    bool complex_spectrum = false;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex l = eig.eigenvalues[j];
        sys.reality_residual = std::max(sys.reality_residual, std::abs(l.imag()));
        if (std::abs(l.imag()) > opts.reality_tol * std::max(1.0, std::abs(l.real()))) {
            offending << (complex_spectrum ? ", " : "") << l.real() << (l.imag() < 0 ? "" : "+")
                      << l.imag() << "i";
            complex_spectrum = true;
        }
    }
    if (complex_spectrum) {
        throw Error(ErrorKind::ComplexSpectrum, "non-real eigenvalues: " + offending.str());
    }

    sys.lambdas = eig.eigenvalues.real();
    sys.right = std::move(eig.right);
    sys.left = std::move(eig.left);
    detail::rescale_columns(sys, detail::base_scale(sys.right, pencil.W));

    const detail::BalanceResult bal = detail::balance_weights(sys, pencil.W, opts.balance_tol);
    sys.normalization = bal.kind;
    sys.balance_residual = bal.residual;
    if (bal.kind == ModeNormalization::Balanced) {
        detail::rescale_columns(sys, bal.d.cwiseSqrt().cwiseInverse().cast<Complex>());
    }
    detail::finalize_families(sys, pencil);
    return sys;
}

/// Replaces |l_j> by c|l_j> (and {{l_j| by {{l_j|/c), rebuilding the derived families.
inline BiorthogonalSystem rescale_mode(const BiorthogonalSystem& sys, const SturmianPencil& pencil,
                                       Eigen::Index j, Complex c) {
    if (j < 0 || j >= sys.n()) throw Error(ErrorKind::DimensionMismatch, "mode index out of range");
    if (c == Complex{}) throw Error(ErrorKind::NonpositiveWeight, "rescale factor must be nonzero");
    BiorthogonalSystem out = sys;
    ComplexVector factors = ComplexVector::Ones(sys.n());
    factors[j] = c;
    detail::rescale_columns(out, factors);
    detail::finalize_families(out, pencil);
    return out;
}

/// Scaled residuals of the biorthogonal identities. Identity-type residuals are
/// ||X - I||_F / sqrt(n); reconstructions are relative to the target's norm.
struct ConsistencyReport {
    double orthogonality = 0;          // L R = I
    double completeness = 0;           // R L = I
    double completeness_curly = 0;     // curly D^+ = I
    double weight_reconstruction = 0;  // sum |l}{{l| = W
    double hamiltonian_reconstruction = 0; // sum |l} l {{l| = H
    double right_problem = 0;          // H R = W R diag(l)
    double dual_problem = 0;           // H^+ D = W^+ D diag(l)
    double curly_dual_definition = 0;  // curly_dual = W^+ D
    ComplexMatrix pairing;             // {{l_j | l_k>

    double worst() const {
        return std::max({orthogonality, completeness, completeness_curly, weight_reconstruction,
                         hamiltonian_reconstruction, right_problem, dual_problem, curly_dual_definition});
    }
};

inline ConsistencyReport consistency_report(const BiorthogonalSystem& sys, const SturmianPencil& pencil) {
    const Eigen::Index n = sys.n();
    if (pencil.n() != n || sys.right.rows() != n || sys.left.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "system and pencil dimensions differ");
    }
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const double root_n = std::sqrt(static_cast<double>(n));
    const auto lambda = sys.lambdas.cast<Complex>().asDiagonal();
    const double hw = pencil.H.norm() + pencil.W.norm();

    ConsistencyReport r;
    r.pairing = sys.left * sys.right;
    r.orthogonality = (r.pairing - id).norm() / root_n;
    r.completeness = (sys.right * sys.left - id).norm() / root_n;
    r.completeness_curly = (sys.curly * sys.dual.adjoint() - id).norm() / root_n;
    r.weight_reconstruction = scaled((sys.curly * sys.left - pencil.W).norm(), pencil.W.norm());
    r.hamiltonian_reconstruction = scaled((sys.curly * lambda * sys.left - pencil.H).norm(), pencil.H.norm());
    r.right_problem = scaled((pencil.H * sys.right - pencil.W * sys.right * lambda).norm(), hw * sys.right.norm());
    r.dual_problem = scaled((pencil.H.adjoint() * sys.dual - pencil.W.adjoint() * sys.dual * lambda).norm(),
                            hw * sys.dual.norm());
    r.curly_dual_definition =
        scaled((sys.curly_dual - pencil.W.adjoint() * sys.dual).norm(), sys.curly_dual.norm());
    return r;
}

}  // namespace sturm

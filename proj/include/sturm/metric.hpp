#pragma once

// Metric operators for a solved pencil: the single-series sum
//     Theta = sum_j d_j |l_j>> {{l_j|,
// the double-series form Theta = sum_jk |l_j}} M_jk {{l_k|, verification of the
// quasi-Hermiticity relations, the Theta-weighted inner product, the Dyson
// dressing Omega = Theta^(1/2), and truncated partial sums.

#include <string>
#include <vector>

#include "sturm/matrix.hpp"
#include "sturm/pencil.hpp"

namespace sturm {

enum class MetricMethod { SingleSeries, DoubleSeries, GroundTruth, File };

inline constexpr std::string_view to_string(MetricMethod m) {
    switch (m) {
    case MetricMethod::SingleSeries: return "single-series";
    case MetricMethod::DoubleSeries: return "double-series";
    case MetricMethod::GroundTruth: return "ground-truth";
    case MetricMethod::File: return "file";
    }
    return "file";
}

struct MetricCandidate {
    ComplexMatrix theta;
    RealVector mode_weights;
    MetricMethod method = MetricMethod::SingleSeries;
};

inline void require_mode_weights(const RealVector& weights, Eigen::Index n) {
    if (weights.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(n) + " mode weights, got " +
                                                      std::to_string(weights.size()));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
            throw Error(ErrorKind::NonpositiveWeight, "mode weight " + std::to_string(j) + " is not positive");
        }
    }
}

/// Partial sum over the first `modes` terms, in ascending-lambda order. The
/// full metric is the same loop run to n, so truncated and full sums agree bit for bit.
inline ComplexMatrix truncated_metric(const BiorthogonalSystem& sys, const RealVector& weights, Eigen::Index modes) {
    const Eigen::Index n = sys.n();
    require_mode_weights(weights, n);
    if (modes < 0 || modes > n) throw Error(ErrorKind::DimensionMismatch, "truncation order out of range");
    ComplexMatrix theta = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < modes; ++j) {
        theta.noalias() += (weights[j] * sys.dual.col(j)) * sys.left.row(j);
    }
    return theta;
}

inline MetricCandidate build_metric_single(const BiorthogonalSystem& sys, const RealVector& weights) {
    return {truncated_metric(sys, weights, sys.n()), weights, MetricMethod::SingleSeries};
}

inline MetricCandidate build_metric_single(const BiorthogonalSystem& sys) {
    return build_metric_single(sys, RealVector::Ones(sys.n()));
}

/// M_jk = <<l_j|l_k>, the direct inner-product form.
inline ComplexMatrix compute_m(const BiorthogonalSystem& sys) {
    return sys.dual.adjoint() * sys.right;
}

/// M_jk = {{l_j| W^-1 |l_k>, the form that needs only the left functionals.
inline ComplexMatrix compute_m_via_weight(const BiorthogonalSystem& sys, const SturmianPencil& pencil) {
    if (pencil.n() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "system and pencil dimensions differ");
    try {
        return sys.left * solve(pencil.W, sys.right);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularWeight, "W is singular");
        throw;
    }
}

inline MetricCandidate build_metric_double(const BiorthogonalSystem& sys, const ComplexMatrix& m) {
    const Eigen::Index n = sys.n();
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::DimensionMismatch, "M must be n x n");
    return {sys.curly_dual * m * sys.left, RealVector::Ones(n), MetricMethod::DoubleSeries};
}

// ---------------------------------------------------------------------------
// Verification

enum class Definiteness { Positive, Singular, Indefinite };

inline constexpr std::string_view to_string(Definiteness d) {
    switch (d) {
    case Definiteness::Positive: return "positive";
    case Definiteness::Singular: return "singular";
    case Definiteness::Indefinite: return "indefinite";
    }
    return "indefinite";
}

struct MetricTolerances {
    double hermiticity = 1e-9;
    double intertwine = 1e-9;
    /// Hermitized minimum eigenvalue must exceed this times ||X||_F to count as positive.
    double positive = 1e-12;
    /// Minimum eigenvalues above -zero * ||X||_F are reported as numerically singular.
    double zero = 1e-10;
};

struct MetricReport {
    double hermiticity = 0;     // ||T - T^+||_F / ||T||_F
    double hermiticity_max = 0; // max |T - T^+|, unscaled
    double intertwine_h = 0;    // ||H^+ T - T H||_F / (||H||_F ||T||_F)
    double intertwine_w = 0;    // ||W^+ T - T W||_F / (||W||_F ||T||_F)
    double min_eig_theta = 0;
    double min_eig_theta_w = 0;
    Definiteness theta_definiteness = Definiteness::Indefinite;
    Definiteness theta_w_definiteness = Definiteness::Indefinite;
    bool hermitian_ok = false;
    bool intertwine_h_ok = false;
    bool intertwine_w_ok = false;

    bool theta_positive() const { return theta_definiteness == Definiteness::Positive; }
    bool theta_w_positive() const { return theta_w_definiteness == Definiteness::Positive; }
    bool pass() const {
        return hermitian_ok && intertwine_h_ok && intertwine_w_ok && theta_positive() && theta_w_positive();
    }
};

namespace detail {

inline Definiteness classify(double min_eig, double norm, const MetricTolerances& tol) {
    const double scale = std::max(norm, kAbsoluteFloor);
    if (min_eig > tol.positive * scale) return Definiteness::Positive;
    if (min_eig > -tol.zero * scale) return Definiteness::Singular;
    return Definiteness::Indefinite;
}

inline double min_hermitized_eigenvalue(const ComplexMatrix& x) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(x), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[0];
}

}  // namespace detail

/// Diagnoses a candidate; never throws on a bad metric, only on shape mismatch.
inline MetricReport verify_metric(const SturmianPencil& pencil, const MetricCandidate& cand,
                                  const MetricTolerances& tol = {}) {
    const ComplexMatrix& t = cand.theta;
    if (t.rows() != pencil.n() || t.cols() != pencil.n()) {
        throw Error(ErrorKind::DimensionMismatch, "metric and pencil dimensions differ");
    }
    const double tn = t.norm();
    MetricReport r;
    const ComplexMatrix asym = t - t.adjoint();
    r.hermiticity = scaled(asym.norm(), tn);
    r.hermiticity_max = max_abs(asym);
    r.intertwine_h = scaled((pencil.H.adjoint() * t - t * pencil.H).norm(), pencil.H.norm() * tn);
    r.intertwine_w = scaled((pencil.W.adjoint() * t - t * pencil.W).norm(), pencil.W.norm() * tn);

    const ComplexMatrix tw = t * pencil.W;
    r.min_eig_theta = detail::min_hermitized_eigenvalue(t);
    r.min_eig_theta_w = detail::min_hermitized_eigenvalue(tw);
    r.theta_definiteness = detail::classify(r.min_eig_theta, tn, tol);
    r.theta_w_definiteness = detail::classify(r.min_eig_theta_w, tw.norm(), tol);

    r.hermitian_ok = r.hermiticity <= tol.hermiticity;
    r.intertwine_h_ok = r.intertwine_h <= tol.intertwine;
    r.intertwine_w_ok = r.intertwine_w <= tol.intertwine;
    return r;
}

/// <<psi|phi> = psi^+ Theta phi.
inline Complex inner_product_s(const MetricCandidate& cand, const ComplexVector& psi, const ComplexVector& phi) {
    const Eigen::Index n = cand.theta.rows();
    if (psi.size() != n || phi.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "state length differs from metric dimension");
    }
    return psi.dot(cand.theta * phi);  // Eigen's dot conjugates its left operand
}

// ---------------------------------------------------------------------------
// Dressing

struct Dressing {
    ComplexMatrix omega;
    ComplexMatrix h;
    ComplexMatrix w;
    double h_residual = 0; // ||h - h^+||_F / ||h||_F
    double w_residual = 0;
    RealVector spectrum;   // generalized eigenvalues of (h, w), ascending
};

/// Omega = Theta^(1/2), h = Omega H Omega^-1, w = Omega W Omega^-1.
inline Dressing dress(const SturmianPencil& pencil, const MetricCandidate& cand) {
    if (cand.theta.rows() != pencil.n()) throw Error(ErrorKind::DimensionMismatch, "metric size");
    Dressing out;
    out.omega = sqrtm_positive(cand.theta);
    const ComplexMatrix omega_inv = inverse(out.omega);
    out.h = out.omega * pencil.H * omega_inv;
    out.w = out.omega * pencil.W * omega_inv;
    out.h_residual = scaled((out.h - out.h.adjoint()).norm(), out.h.norm());
    out.w_residual = scaled((out.w - out.w.adjoint()).norm(), out.w.norm());

    Eigen::LLT<ComplexMatrix> chol(hermitian_part(out.w));
    if (chol.info() == Eigen::Success) {
        out.spectrum = eig_hermitian_definite(out.h, out.w);
    } else {
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(solve(out.w, out.h), false);
        out.spectrum = solver.eigenvalues().real();
        std::sort(out.spectrum.begin(), out.spectrum.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Truncation

struct TruncationPoint {
    Eigen::Index modes = 0;
    MetricReport report;
};

/// Reports for K = 1..n partial sums.
inline std::vector<TruncationPoint> truncate_scan(const BiorthogonalSystem& sys, const SturmianPencil& pencil,
                                                  const RealVector& weights, const MetricTolerances& tol = {}) {
    const Eigen::Index n = sys.n();
    require_mode_weights(weights, n);
    std::vector<TruncationPoint> curve;
    curve.reserve(static_cast<std::size_t>(n));
    ComplexMatrix theta = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        theta.noalias() += (weights[k] * sys.dual.col(k)) * sys.left.row(k);
        curve.push_back({k + 1, verify_metric(pencil, {theta, weights, MetricMethod::SingleSeries}, tol)});
    }
    return curve;
}

}  // namespace sturm

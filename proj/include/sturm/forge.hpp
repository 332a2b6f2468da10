#pragma once

// Seeded fixture generators. Every matrix draws from its own stream:
// std::mt19937_64 keyed by std::seed_seq{seed_lo, seed_hi, stream}, with
// doubles formed from the top 53 bits. Both pieces are fully specified by the
// standard, so fixtures are identical across platforms and compilers.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "sturm/matrix.hpp"
#include "sturm/pencil.hpp"

namespace sturm {

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint32_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                          stream};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform on [-1, 1).
    double symmetric() { return 2.0 * unit() - 1.0; }
    Complex complex_symmetric() {
        const double re = symmetric();
        return {re, symmetric()};
    }

    ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
        ComplexMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_symmetric();
        return m;
    }

private:
    std::mt19937_64 engine_;
};

struct DressedModel {
    SturmianPencil pencil;
    ComplexMatrix omega_true;
    ComplexMatrix theta_true;
    ComplexMatrix h_hermitian;
    ComplexMatrix w_hermitian;
    RealVector spectrum_true;
    std::uint64_t seed = 0;
};

struct DressingOptions {
    double condition_cap = 1e3;
    /// Strength of Omega = I + eps G; defaults to 0.3 / sqrt(n).
    std::optional<double> epsilon;
    int max_attempts = 16;
};

namespace detail {

enum StreamId : std::uint32_t { kHamiltonian = 1, kWeightFactor = 2, kDysonPerturbation = 3, kStreamsPerAttempt = 8 };

inline std::uint32_t stream_id(int attempt, StreamId id) {
    return static_cast<std::uint32_t>(attempt) * kStreamsPerAttempt + id;
}

inline double condition_2norm(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const RealVector& s = svd.singularValues();
    return s[0] / s[s.size() - 1];
}

/// w = B^+ B + I, with B shrunk until cond(w) <= cap.
inline ComplexMatrix random_weight(RandomStream& rng, Eigen::Index n, double cap) {
    ComplexMatrix b = rng.matrix(n, n) / std::sqrt(static_cast<double>(n));
    const double top = eig_hermitian(hermitian_part(b.adjoint() * b)).values[n - 1];
    if (1.0 + top > cap) b *= std::sqrt((cap - 1.0) / top);
    return hermitian_part(b.adjoint() * b + ComplexMatrix::Identity(n, n));
}

inline ComplexMatrix random_hermitian(RandomStream& rng, Eigen::Index n) { return hermitian_part(rng.matrix(n, n)); }

}  // namespace detail

inline DressedModel gen_dressed(Eigen::Index n, std::uint64_t seed, const DressingOptions& opts = {}) {
    if (n < 2) throw Error(ErrorKind::DimensionMismatch, "dressed models need n >= 2");
    if (!(opts.condition_cap >= 1.0)) throw Error(ErrorKind::DimensionMismatch, "condition cap must be >= 1");
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        RandomStream h_rng(seed, detail::stream_id(attempt, detail::kHamiltonian));
        RandomStream w_rng(seed, detail::stream_id(attempt, detail::kWeightFactor));
        RandomStream g_rng(seed, detail::stream_id(attempt, detail::kDysonPerturbation));

        DressedModel m;
        m.seed = seed;
        m.h_hermitian = detail::random_hermitian(h_rng, n);
        m.w_hermitian = detail::random_weight(w_rng, n, opts.condition_cap);
        m.spectrum_true = eig_hermitian_definite(m.h_hermitian, m.w_hermitian);
        const double spread = std::max(m.spectrum_true.cwiseAbs().maxCoeff(), kAbsoluteFloor);
        if (min_eigenvalue_gap(m.spectrum_true.cast<Complex>()) <= 1e-6 * spread) continue;

        const ComplexMatrix g = g_rng.matrix(n, n);
        double eps = opts.epsilon.value_or(0.3 / std::sqrt(static_cast<double>(n)));
        m.omega_true = id + eps * g;
        for (int halving = 0; halving < 8 && detail::condition_2norm(m.omega_true) > opts.condition_cap; ++halving) {
            eps *= 0.5;
            m.omega_true = id + eps * g;
        }
        if (detail::condition_2norm(m.omega_true) > opts.condition_cap) continue;

        const ComplexMatrix omega_inv = inverse(m.omega_true);
        m.theta_true = hermitian_part(m.omega_true.adjoint() * m.omega_true);
        m.pencil = SturmianPencil(omega_inv * m.h_hermitian * m.omega_true, omega_inv * m.w_hermitian * m.omega_true,
                                  Provenance::Dressed,
                                  "dressed-n" + std::to_string(n) + "-seed" + std::to_string(seed));
        return m;
    }
    throw Error(ErrorKind::ConditioningFailure, "could not meet condition cap within the retry budget");
}

/// H Hermitian, W = B^+ B / n + I Hermitian positive definite.
inline SturmianPencil gen_hermitian_pencil(Eigen::Index n, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorKind::DimensionMismatch, "Hermitian pencils need n >= 2");
    RandomStream h_rng(seed, detail::stream_id(0, detail::kHamiltonian));
    RandomStream w_rng(seed, detail::stream_id(0, detail::kWeightFactor));
    ComplexMatrix h = detail::random_hermitian(h_rng, n);
    const ComplexMatrix b = w_rng.matrix(n, n) / std::sqrt(static_cast<double>(n));
    ComplexMatrix w = hermitian_part(b.adjoint() * b + ComplexMatrix::Identity(n, n));
    return {std::move(h), std::move(w), Provenance::Hermitian,
            "hermitian-n" + std::to_string(n) + "-seed" + std::to_string(seed)};
}

/// H = [[1,1],[0,2]], W = [[1,1],[0,1]]: real spectrum, no common metric.
inline SturmianPencil canned_incompatible() {
    ComplexMatrix h(2, 2), w(2, 2);
    h << 1.0, 1.0, 0.0, 2.0;
    w << 1.0, 1.0, 0.0, 1.0;
    return {std::move(h), std::move(w), Provenance::Canned, "incompatible-2x2"};
}

}  // namespace sturm

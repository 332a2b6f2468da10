#pragma once

// Liouville change of variables r = g(x), psi1(g(x)) = sqrt(g'(x)) psi2(x), which
// turns -psi1'' + V1 psi1 = E psi1 into the Sturmian form
//     -psi2'' + V2 psi2 = E W psi2,
//     W  = g'^2,
//     V2 = g'^2 V1(g) + (3/4)(g''/g')^2 - (1/2)(g'''/g').
// Both problems are discretized with the three-point stencil on uniform grids
// with Dirichlet ends.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sturm/matrix.hpp"
#include "sturm/pencil.hpp"

namespace sturm {

using RealFunction = std::function<double(double)>;

/// Uniform grid x_0 .. x_{interior+1}; only the interior points are unknowns.
struct UniformGrid {
    double start = 0.0;
    double step = 1.0;
    Eigen::Index interior = 0;

    static UniformGrid spanning(double lo, double hi, Eigen::Index interior_points) {
        if (!(hi > lo)) throw Error(ErrorKind::DimensionMismatch, "grid interval must have hi > lo");
        if (interior_points < 1) throw Error(ErrorKind::GridTooSmall, "grid needs interior points");
        return {lo, (hi - lo) / static_cast<double>(interior_points + 1), interior_points};
    }

    Eigen::Index size() const { return interior + 2; }
    double at(Eigen::Index i) const { return start + step * static_cast<double>(i); }
    RealVector points() const {
        RealVector x(size());
        for (Eigen::Index i = 0; i < size(); ++i) x[i] = at(i);
        return x;
    }
};

/// A monotone substitution r = g(x) with its first three derivatives and inverse.
struct Substitution {
    std::string name;
    RealFunction g, g1, g2, g3;
    RealFunction inverse;
};

inline Substitution identity_substitution() {
    return {"identity", [](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; },
            [](double) { return 0.0; }, [](double r) { return r; }};
}

inline Substitution exponential_substitution() {
    const auto e = [](double x) { return std::exp(x); };
    return {"exp", e, e, e, e, [](double r) { return std::log(r); }};
}

/// g(x) = x + x^3/3.
inline Substitution cubic_substitution() {
    return {"cubic",
            [](double x) { return x + x * x * x / 3.0; },
            [](double x) { return 1.0 + x * x; },
            [](double x) { return 2.0 * x; },
            [](double) { return 2.0; },
            [](double r) {
                // Real root of x^3 + 3x - 3r = 0 (Cardano; discriminant is always positive).
                const double half_q = -1.5 * r;
                const double root = std::sqrt(half_q * half_q + 1.0);
                return std::cbrt(-half_q + root) + std::cbrt(-half_q - root);
            }};
}

struct LiouvilleMap {
    UniformGrid grid;
    RealVector g, g1, g2, g3;
};

inline void validate(const LiouvilleMap& map) {
    const Eigen::Index m = map.grid.size();
    if (!(map.grid.step > 0.0)) throw Error(ErrorKind::DimensionMismatch, "grid step must be positive");
    if (map.g.size() != m || map.g1.size() != m || map.g2.size() != m || map.g3.size() != m) {
        throw Error(ErrorKind::DimensionMismatch, "map samples do not cover the grid");
    }
    if (!map.g.allFinite() || !map.g1.allFinite() || !map.g2.allFinite() || !map.g3.allFinite()) {
        throw Error(ErrorKind::NonFinite, "map samples contain NaN/Inf");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(map.g1[i] > 0.0)) {
            throw Error(ErrorKind::NonMonotoneMap, "g'(x) <= 0 at x = " + std::to_string(map.grid.at(i)));
        }
    }
}

inline LiouvilleMap sample_map(const Substitution& s, const UniformGrid& grid) {
    LiouvilleMap map{grid, RealVector(grid.size()), RealVector(grid.size()), RealVector(grid.size()),
                     RealVector(grid.size())};
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double x = grid.at(i);
        map.g[i] = s.g(x);
        map.g1[i] = s.g1(x);
        map.g2[i] = s.g2(x);
        map.g3[i] = s.g3(x);
    }
    validate(map);
    return map;
}

struct TransformedPotential {
    RealVector potential; // V2 on the map grid
    RealVector weight;    // W on the map grid
};

/// `v1_at_g` holds V1(g(x_i)) for every grid point.
inline TransformedPotential transform_potential(const RealVector& v1_at_g, const LiouvilleMap& map) {
    validate(map);
    if (v1_at_g.size() != map.grid.size()) throw Error(ErrorKind::DimensionMismatch, "potential samples");
    TransformedPotential out{RealVector(map.grid.size()), RealVector(map.grid.size())};
    for (Eigen::Index i = 0; i < map.grid.size(); ++i) {
        const double d1 = map.g1[i];
        const double ratio = map.g2[i] / d1;
        out.weight[i] = d1 * d1;
        out.potential[i] = d1 * d1 * v1_at_g[i] + 0.75 * ratio * ratio - 0.5 * map.g3[i] / d1;
    }
    return out;
}

inline TransformedPotential transform_potential(const RealFunction& v1, const LiouvilleMap& map) {
    RealVector samples(map.g.size());
    for (Eigen::Index i = 0; i < map.g.size(); ++i) samples[i] = v1(map.g[i]);
    return transform_potential(samples, map);
}

/// sum_k c_k r^k.
inline RealFunction polynomial_potential(std::vector<double> coefficients) {
    return [c = std::move(coefficients)](double r) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
        return acc;
    };
}

// ---------------------------------------------------------------------------
// Finite differences

/// Tridiagonal H (off-diagonal -1/h^2) and diagonal W, stored as bands.
struct DiscretizedProblem {
    UniformGrid grid;
    RealVector diagonal;
    double off_diagonal = 0.0;
    RealVector weight;
    std::string meta;

    Eigen::Index n() const { return diagonal.size(); }

    ComplexMatrix dense_h() const {
        const Eigen::Index m = n();
        ComplexMatrix h = ComplexMatrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            h(i, i) = diagonal[i];
            if (i + 1 < m) h(i, i + 1) = h(i + 1, i) = off_diagonal;
        }
        return h;
    }
    ComplexMatrix dense_w() const { return weight.cast<Complex>().asDiagonal(); }
    SturmianPencil pencil() const { return {dense_h(), dense_w(), Provenance::Liouville, meta}; }
};

inline DiscretizedProblem discretize_sturmian(const RealVector& potential, const RealVector& weight,
                                              const UniformGrid& grid, std::string meta = {}) {
    if (grid.interior < 3) throw Error(ErrorKind::GridTooSmall, "need at least 3 interior points");
    if (potential.size() != grid.size() || weight.size() != grid.size()) {
        throw Error(ErrorKind::DimensionMismatch, "samples must cover the full grid including ends");
    }
    const double inv_h2 = 1.0 / (grid.step * grid.step);
    DiscretizedProblem p{grid, RealVector(grid.interior), -inv_h2, RealVector(grid.interior), std::move(meta)};
    for (Eigen::Index i = 0; i < grid.interior; ++i) {
        const double w = weight[i + 1];
        if (!(w > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "weight must be positive at interior points");
        p.diagonal[i] = 2.0 * inv_h2 + potential[i + 1];
        p.weight[i] = w;
    }
    return p;
}

inline DiscretizedProblem discretize_schrodinger(const RealVector& potential, const UniformGrid& grid,
                                                 std::string meta = {}) {
    return discretize_sturmian(potential, RealVector::Ones(grid.size()), grid, std::move(meta));
}

inline RealVector sample(const RealFunction& f, const UniformGrid& grid) {
    RealVector v(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) v[i] = f(grid.at(i));
    return v;
}

/// Lowest `k` eigenvalues via the symmetrized tridiagonal W^-1/2 H W^-1/2.
inline RealVector lowest_eigenvalues(const DiscretizedProblem& p, Eigen::Index k) {
    const Eigen::Index m = p.n();
    if (k < 1 || k > m) throw Error(ErrorKind::DimensionMismatch, "requested eigenvalue count out of range");
    RealVector diag = p.diagonal.cwiseQuotient(p.weight);
    RealVector sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = p.off_diagonal / std::sqrt(p.weight[i] * p.weight[i + 1]);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "tridiagonal eigensolver did not converge");
    }
    return solver.eigenvalues().head(k);
}

struct IsospectralComparison {
    RealVector first;
    RealVector second;
    RealVector relative_difference;
    double worst = 0.0;
    bool pass = false;
};

inline IsospectralComparison isospectral_check(const DiscretizedProblem& p1, const DiscretizedProblem& p2,
                                               Eigen::Index k, double tol) {
    if (k < 1 || k > std::min(p1.n(), p2.n())) throw Error(ErrorKind::DimensionMismatch, "k out of range");
    IsospectralComparison c;
    c.first = lowest_eigenvalues(p1, k);
    c.second = lowest_eigenvalues(p2, k);
    c.relative_difference.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c.relative_difference[i] = std::abs(c.first[i] - c.second[i]) / std::max(std::abs(c.first[i]), kAbsoluteFloor);
    }
    c.worst = c.relative_difference.maxCoeff();
    c.pass = c.worst <= tol;
    return c;
}

/// The untransformed problem on r in (r_lo, r_hi) and its Liouville image on
/// x in (g^-1(r_lo), g^-1(r_hi)), both with `interior` unknowns.
struct LiouvillePair {
    DiscretizedProblem original;
    DiscretizedProblem sturmian;
    LiouvilleMap map;
};

inline LiouvillePair liouville_pair(const RealFunction& v1, const Substitution& s, double r_lo, double r_hi,
                                    Eigen::Index interior) {
    if (interior < 3) throw Error(ErrorKind::GridTooSmall, "need at least 3 interior points");
    const UniformGrid r_grid = UniformGrid::spanning(r_lo, r_hi, interior);
    const UniformGrid x_grid = UniformGrid::spanning(s.inverse(r_lo), s.inverse(r_hi), interior);
    LiouvilleMap map = sample_map(s, x_grid);
    const TransformedPotential tp = transform_potential(v1, map);
    return {discretize_schrodinger(sample(v1, r_grid), r_grid, "original"),
            discretize_sturmian(tp.potential, tp.weight, x_grid, "sturmian:" + s.name), std::move(map)};
}

}  // namespace sturm

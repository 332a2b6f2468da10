#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sturm/forge.hpp"
#include "sturm/matrix.hpp"

using namespace sturm;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
    RandomStream rng(seed, 99);
    return rng.matrix(n, n);
}

}  // namespace

TEST(EigHermitian, IdentityReconstructs) {
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    const HermitianEigen e = eig_hermitian(id);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.values[i], 1.0, 1e-15);
    EXPECT_LT((e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - id).norm(), 1e-14);
}

TEST(EigHermitian, RealSymmetric2x2) {
    const auto [l1, l2] = oracle::eig2x2(2.0, 1.0, 1.0, 2.0);
    const HermitianEigen e = eig_hermitian(mat2(2, 1, 1, 2));
    EXPECT_NEAR(e.values[0], l1.real(), 1e-14);
    EXPECT_NEAR(e.values[1], l2.real(), 1e-14);
    EXPECT_NEAR(e.values[0], 1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 3.0, 1e-14);
}

TEST(EigHermitian, PauliY) {
    const Complex i{0, 1};
    const HermitianEigen e = eig_hermitian(mat2(0, -i, i, 0));
    EXPECT_NEAR(e.values[0], -1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(EigHermitian, RejectsNonHermitian) {
    try {
        eig_hermitian(mat2(1, 1, 0, 2));
        FAIL() << "expected NotHermitian";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(EigHermitian, RandomReconstructionAndUnitarity) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ComplexMatrix a = hermitian_part(random_matrix(12, seed));
        const HermitianEigen e = eig_hermitian(a);
        for (Eigen::Index k = 1; k < e.values.size(); ++k) EXPECT_LE(e.values[k - 1], e.values[k]);
        const ComplexMatrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        EXPECT_LE((rebuilt - a).norm(), 1e-11 * a.norm());
        EXPECT_LE((e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(12, 12)).norm(), 1e-12);
    }
}

TEST(EigGeneral, IdentityIsDegenerate) {
    try {
        eig_general(ComplexMatrix::Identity(2, 2));
        FAIL() << "expected DegenerateSpectrum";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateSpectrum);
    }
}

TEST(EigGeneral, UpperTriangular2x2) {
    const GeneralEigenDecomposition d = eig_general(mat2(1, 1, 0, 2));
    EXPECT_NEAR(std::abs(d.eigenvalues[0] - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d.eigenvalues[1] - 2.0), 0.0, 1e-14);
    // Column 0 parallel to (1,0), column 1 parallel to (1,1).
    EXPECT_NEAR(std::abs(d.right(1, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d.right(0, 1) - d.right(1, 1)), 0.0, 1e-14);
    EXPECT_LT((d.left * d.right - ComplexMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(EigGeneral, AgreesWithHermitianSolver) {
    const GeneralEigenDecomposition d = eig_general(mat2(2, 1, 1, 2));
    const HermitianEigen e = eig_hermitian(mat2(2, 1, 1, 2));
    for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(d.eigenvalues[k].real(), e.values[k], 1e-12);
        EXPECT_NEAR(d.eigenvalues[k].imag(), 0.0, 1e-12);
    }
}

TEST(EigGeneral, ComplexEigenvaluesMatchCharacteristicPolynomial) {
    const Complex i{0, 1};
    const ComplexMatrix a = mat2(1, i, i, 1);
    const auto [l1, l2] = oracle::eig2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    const GeneralEigenDecomposition d = eig_general(a);
    EXPECT_LT(std::abs(d.eigenvalues[0] - l1), 1e-14);
    EXPECT_LT(std::abs(d.eigenvalues[1] - l2), 1e-14);
}

TEST(EigGeneral, RandomInvariantsUpTo64) {
    for (Eigen::Index n : {3, 8, 20, 64}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const ComplexMatrix a = random_matrix(n, 1000 * n + seed);
            const GeneralEigenDecomposition d = eig_general(a);
            const ComplexMatrix resid = a * d.right - d.right * d.eigenvalues.asDiagonal();
            EXPECT_LE(resid.norm(), 1e-10 * a.norm() * d.right.norm()) << "n=" << n;
            EXPECT_LE(max_abs(d.left * d.right - ComplexMatrix::Identity(n, n)), 1e-10) << "n=" << n;
            for (Eigen::Index k = 1; k < n; ++k) {
                const Complex p = d.eigenvalues[k - 1], q = d.eigenvalues[k];
                EXPECT_TRUE(p.real() < q.real() || (p.real() == q.real() && p.imag() <= q.imag()));
            }
        }
    }
}

TEST(Inverse, IdentityAndUnipotent) {
    EXPECT_EQ(inverse(ComplexMatrix::Identity(3, 3)), ComplexMatrix::Identity(3, 3));
    const ComplexMatrix inv = inverse(mat2(1, 1, 0, 1));
    EXPECT_LT((inv - mat2(1, -1, 0, 1)).norm(), 1e-15);
}

TEST(Inverse, SolveSelfGivesIdentity) {
    const ComplexMatrix a = random_matrix(5, 7) + 3.0 * ComplexMatrix::Identity(5, 5);
    EXPECT_LT((solve(a, a) - ComplexMatrix::Identity(5, 5)).norm(), 1e-13);
    const ComplexMatrix b = random_matrix(5, 8);
    EXPECT_LT((a * solve(a, b) - b).norm(), 1e-13 * b.norm());
}

TEST(Inverse, SingularMatrixRejected) {
    try {
        inverse(mat2(1, 2, 2, 4));
        FAIL() << "expected SingularMatrix";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
    }
}

TEST(Inverse, IllConditionedWarnsButProceeds) {
    Warnings warnings;
    const ComplexMatrix a = mat2(1, 0, 0, 1e-13);
    const ComplexMatrix inv = inverse(a, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("IllConditioned"), std::string::npos);
    EXPECT_NEAR(inv(1, 1).real(), 1e13, 1.0);
}

TEST(Inverse, DoubleInverseIsIdentityMap) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ComplexMatrix a = random_matrix(10, seed) + 2.0 * ComplexMatrix::Identity(10, 10);
        ASSERT_LT(1.0 / reciprocal_condition(a), 1e6);
        EXPECT_LE((inverse(inverse(a)) - a).norm(), 1e-9 * a.norm());
    }
}

TEST(SqrtmPositive, IdentityAndDiagonal) {
    EXPECT_LT((sqrtm_positive(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
    const ComplexMatrix r = sqrtm_positive(mat2(4, 0, 0, 9));
    EXPECT_LT((r - mat2(2, 0, 0, 3)).norm(), 1e-14);
}

TEST(SqrtmPositive, Symmetric2x2) {
    // Eigenvalues 1 and 9 with eigenvectors (1,-1)/sqrt2 and (1,1)/sqrt2 give root [[2,1],[1,2]].
    const ComplexMatrix a = mat2(5, 4, 4, 5);
    const ComplexMatrix r = sqrtm_positive(a);
    EXPECT_LT((r * r - a).norm(), 1e-12);
    EXPECT_LT((r - mat2(2, 1, 1, 2)).norm(), 1e-13);
}

TEST(SqrtmPositive, RandomPositiveDefinite) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ComplexMatrix b = random_matrix(9, seed);
        const ComplexMatrix a = b.adjoint() * b + 0.1 * ComplexMatrix::Identity(9, 9);
        const ComplexMatrix r = sqrtm_positive(a);
        EXPECT_LE((r * r - a).norm(), 1e-10 * a.norm());
        EXPECT_EQ(max_abs(r - r.adjoint()), 0.0);
        EXPECT_GT(eig_hermitian(r).values[0], 0.0);
    }
}

TEST(SqrtmPositive, RejectsIndefinite) {
    try {
        sqrtm_positive(mat2(1, 2, 2, 1));
        FAIL() << "expected NotPositiveDefinite";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
    }
    EXPECT_THROW(sqrtm_positive(mat2(1, 1, 0, 1)), Error);
}

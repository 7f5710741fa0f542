#include <gtest/gtest.h>

#include <random>

#include "phqm/basisops.hpp"
#include "phqm/spectral.hpp"
#include "test_support.hpp"

using namespace phqm;
using phqm::testing::random_matrix;

namespace {

OperatorMatrix cubic(double eps, int n) {
    const CubicModelSpec spec{1.0, 1.0, eps};
    return build_cubic_hamiltonian(spec, cubic_basis(spec, n));
}

OperatorMatrix random_hermitian(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    const CMatrix a = random_matrix(n, rng);
    return OperatorMatrix(0.5 * (a + a.adjoint()), BasisSpec{n, 1.0, 1.0, 1.0});
}

}  // namespace

TEST(Biorthonormal, HermitianLeftEqualsRight) {
    const auto sys = biorthonormal_diagonalize(random_hermitian(20, 3));
    EXPECT_LT((sys.left - sys.right).norm(), 1e-10);
    EXPECT_LT(sys.eigenvalues.imag().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Biorthonormal, Completeness) {
    for (double eps : {0.0, 0.05, 0.1}) {
        const auto sys = biorthonormal_diagonalize(cubic(eps, 32));
        EXPECT_LT(completeness_residual(sys), 1e-10);
        EXPECT_LT(reconstruction_residual(cubic(eps, 32), sys), 1e-9);
    }
    std::mt19937_64 rng(11);
    const OperatorMatrix r(random_matrix(16, rng), {16, 1.0, 1.0, 1.0});
    const auto sys = biorthonormal_diagonalize(r);
    EXPECT_LT(completeness_residual(sys), 1e-10);
    EXPECT_LT(biorthonormality_residual(sys), 1e-10);
    EXPECT_LT(reconstruction_residual(r, sys), 1e-9);
}

TEST(Biorthonormal, OrderingAndPhase) {
    const auto sys = biorthonormal_diagonalize(cubic(0.1, 32));
    for (Index n = 1; n < sys.size(); ++n) {
        EXPECT_LE(sys.eigenvalues(n - 1).real(), sys.eigenvalues(n).real() + 1e-10);
    }
    for (Index n = 0; n < sys.size(); ++n) {
        Index k = 0;
        sys.right.col(n).cwiseAbs().maxCoeff(&k);
        EXPECT_NEAR(sys.right.col(n).norm(), 1.0, 1e-13);
        EXPECT_GT(sys.right(k, n).real(), 0.0);
        EXPECT_EQ(sys.right(k, n).imag(), 0.0);
    }
}

TEST(Biorthonormal, ComplexPairsTieBreak) {
    CMatrix a = CMatrix::Zero(2, 2);
    a << 0.0, 1.0, -1.0, 0.0;  // eigenvalues -i, +i
    const auto sys = biorthonormal_diagonalize(OperatorMatrix(a, {2, 1.0, 1.0, 1.0}));
    EXPECT_LT(sys.eigenvalues(0).imag(), sys.eigenvalues(1).imag());
}

TEST(Biorthonormal, Deterministic) {
    const auto a = biorthonormal_diagonalize(cubic(0.1, 48));
    const auto b = biorthonormal_diagonalize(cubic(0.1, 48));
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.right, b.right);
    EXPECT_EQ(a.left, b.left);
}

TEST(Biorthonormal, AdjointSwapsRoles) {
    const OperatorMatrix H = cubic(0.1, 24);
    const OperatorMatrix Hd(H.matrix().adjoint(), H.basis());
    const auto s = biorthonormal_diagonalize(H);
    const auto t = biorthonormal_diagonalize(Hd);
    for (Index n = 0; n < s.size(); ++n) {
        // eigenvalue E_n of H pairs with conj(E_n) of H^dag
        Index m = 0;
        (t.eigenvalues.array() - std::conj(s.eigenvalues(n))).abs().minCoeff(&m);
        EXPECT_LT(std::abs(t.eigenvalues(m) - std::conj(s.eigenvalues(n))), 1e-8);
        const CVector u = s.left.col(n).normalized();
        const CVector v = t.right.col(m).normalized();
        EXPECT_NEAR(std::abs(u.dot(v)), 1.0, 1e-8);
    }
}

TEST(Biorthonormal, DefectiveRejected) {
    CMatrix j = CMatrix::Zero(3, 3);
    j(0, 1) = 1.0;
    j(1, 2) = 1.0;
    EXPECT_THROW(biorthonormal_diagonalize(OperatorMatrix(j, {3, 1.0, 1.0, 1.0})), NumericalError);
}

TEST(Reality, Hermitian) {
    const auto sys = biorthonormal_diagonalize(random_hermitian(16, 5));
    const auto r = spectrum_reality_report(sys, 16);
    EXPECT_LT(r.max_relative_imag, 1e-12);
    EXPECT_TRUE(r.pass);
}

TEST(Reality, CubicTrustedBlock) {
    const auto sys = biorthonormal_diagonalize(cubic(0.1, 64));
    EXPECT_EQ(default_trusted_modes(64), 16);
    const auto r = spectrum_reality_report(sys, 16);
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.max_relative_imag, 1e-8);
    for (Index n = 0; n < 16; ++n) EXPECT_LT(std::abs(sys.eigenvalues(n).imag()), 1e-8);
}

TEST(Reality, CubicAllModesFail) {
    const auto sys = biorthonormal_diagonalize(cubic(0.1, 64));
    const auto r = spectrum_reality_report(sys, 64);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.max_relative_imag, 2.01, 0.01);  // regression value
}

TEST(GroundEnergy, FourthOrderOracle) {
    const double eps = 0.1;
    const auto sys = biorthonormal_diagonalize(cubic(eps, 64));
    const double e0 = sys.eigenvalues(0).real();
    EXPECT_NEAR(e0, 0.5125381459, 1e-9);  // regression value, N=64
    EXPECT_NEAR(e0, 0.5 + 11.0 / 8.0 * eps * eps - 465.0 / 32.0 * std::pow(eps, 4), 3e-4);
    EXPECT_NEAR(e0, biorthonormal_diagonalize(cubic(eps, 128)).eigenvalues(0).real(), 1e-10);
}

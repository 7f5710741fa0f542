#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "phqm/basisops.hpp"
#include "phqm/linalg.hpp"
#include "phqm/metric.hpp"
#include "phqm/models.hpp"
#include "test_support.hpp"

using namespace phqm;
using phqm::testing::random_matrix;
using phqm::testing::random_positive;
using phqm::testing::rel;

namespace {

BiorthonormalSystem cubic_system(double eps, int n) {
    const CubicModelSpec spec{1.0, 1.0, eps};
    return biorthonormal_diagonalize(build_cubic_hamiltonian(spec, cubic_basis(spec, n)));
}

}  // namespace

TEST(Metric, HermitianSystemGivesIdentity) {
    const auto sys = cubic_system(0.0, 24);
    const auto m = metric_from_biorthonormal(sys);
    EXPECT_LT((m.eta() - CMatrix::Identity(24, 24)).norm(), 1e-10);
}

TEST(Metric, EqualsInverseGram) {
    const auto sys = cubic_system(0.1, 16);
    const auto m = metric_from_biorthonormal(sys);
    const CMatrix expected = (sys.right * sys.right.adjoint()).inverse();
    EXPECT_LT((m.eta() - expected).norm() / expected.norm(), 1e-9);
}

TEST(Metric, MapsRightToLeft) {
    for (double eps : {0.05, 0.1}) {
        const auto sys = cubic_system(eps, 64);
        const auto m = metric_from_biorthonormal(sys);
        EXPECT_LT(metric_mapping_residual(sys, m), 1e-9);
    }
}

TEST(Metric, PseudoHermiticityFull) {
    const CubicModelSpec spec{1.0, 1.0, 0.05};
    const auto H = build_cubic_hamiltonian(spec, cubic_basis(spec, 64));
    const auto sys = biorthonormal_diagonalize(H);
    const auto m = metric_from_biorthonormal(sys);
    // the top truncated modes come in complex pairs, so the full matrix misses 1e-8
    const double full = pseudo_hermiticity_residual(H.matrix(), m.eta());
    EXPECT_NEAR(full, 4.66e-4, 0.01e-4);  // regression value
    const CMatrix real_part = sys.right * sys.eigenvalues.real().cast<cplx>().asDiagonal() * sys.left.adjoint();
    EXPECT_LT(pseudo_hermiticity_residual(real_part, m.eta()), 1e-8);
}

TEST(Metric, PseudoHermiticityShiftedFull) {
    for (double alpha : {0.05, 0.1}) {
        const ShiftedModelSpec spec{{0.0, 0.0, 0.5}, alpha, 1.0, 8};
        const auto H = build_shifted_hamiltonian(spec, shifted_basis(spec, 64));
        const auto m = metric_from_biorthonormal(biorthonormal_diagonalize(H));
        EXPECT_LT(pseudo_hermiticity_residual(H.matrix(), m.eta()), 1e-8) << alpha;
    }
}

TEST(Metric, FunctionsConsistent) {
    std::mt19937_64 rng(1);
    const CMatrix eta = random_positive(10, rng);
    const auto m = MetricOperator::from_hermitian(eta);
    EXPECT_LT((m.sqrt() * m.sqrt() - eta).norm(), 1e-12 * eta.norm());
    EXPECT_LT((m.sqrt() * m.inv_sqrt() - CMatrix::Identity(10, 10)).norm(), 1e-12);
    EXPECT_LT((m.eta() - expm_scaling_squaring(-m.generator())).norm(), 1e-11 * eta.norm());
    EXPECT_GT(m.lambda_min(), 0.0);
}

TEST(Metric, RefusesIndefinite) {
    CMatrix a = CMatrix::Identity(3, 3);
    a(2, 2) = -1.0;
    EXPECT_THROW(MetricOperator::from_hermitian(a), NumericalError);
    a(2, 2) = 0.0;
    EXPECT_THROW(MetricOperator::from_hermitian(a), NumericalError);
    CMatrix b = CMatrix::Identity(3, 3);
    b(0, 1) = 0.5;
    EXPECT_THROW(MetricOperator::from_hermitian(b), Error);
}

TEST(Rescale, UnitScalesIdentical) {
    const auto sys = cubic_system(0.1, 16);
    const std::vector<cplx> ones(16, 1.0);
    const auto r = rescale_biorthonormal(sys, ones);
    EXPECT_EQ(r.right, sys.right);
    EXPECT_EQ(r.left, sys.left);
}

TEST(Rescale, RankOneUpdate) {
    const auto sys = cubic_system(0.1, 16);
    std::vector<cplx> s(16, 1.0);
    s[0] = 2.0;
    const auto r = rescale_biorthonormal(sys, s);
    const CMatrix old_eta = metric_from_biorthonormal(sys).eta();
    const CMatrix new_eta = metric_from_biorthonormal(r).eta();
    const CVector phi0 = sys.left.col(0);
    const CMatrix expected = old_eta - 0.75 * phi0 * phi0.adjoint();
    EXPECT_LT((new_eta - expected).norm() / expected.norm(), 1e-9);
}

TEST(Rescale, ZeroScaleRejected) {
    const auto sys = cubic_system(0.1, 8);
    std::vector<cplx> s(8, 1.0);
    s[3] = 0.0;
    EXPECT_THROW(rescale_biorthonormal(sys, s), ArgumentError);
    EXPECT_THROW(rescale_biorthonormal(sys, std::vector<cplx>(7, 1.0)), ArgumentError);
}

TEST(HermitianEquivalent, IdentityMetric) {
    const CubicModelSpec spec{1.0, 1.0, 0.0};
    const auto H = build_cubic_hamiltonian(spec, cubic_basis(spec, 12));
    const auto h = hermitian_equivalent(H, MetricOperator::identity(12));
    EXPECT_LT((h.matrix() - H.matrix()).norm(), 1e-13);
}

TEST(HermitianEquivalent, PreservesSpectrum) {
    const CubicModelSpec spec{1.0, 1.0, 0.05};
    const auto H = build_cubic_hamiltonian(spec, cubic_basis(spec, 32));
    const auto sys = biorthonormal_diagonalize(H);
    const auto h = hermitian_equivalent(H, metric_from_biorthonormal(sys));
    const auto hs = biorthonormal_diagonalize(h);
    for (Index n = 0; n < 8; ++n) EXPECT_LT(std::abs(hs.eigenvalues(n) - sys.eigenvalues(n)), 1e-9);
}

TEST(HermitianEquivalent, InteriorHermiticityShifted) {
    // on the shifted family every mode is PT-unbroken, so h is Hermitian on the interior block
    for (int n : {64, 128}) {
        const ShiftedModelSpec spec{{0.0, 0.0, 0.5}, 0.1, 1.0, 8};
        const BasisSpec b = shifted_basis(spec, n);
        const auto H = build_shifted_hamiltonian(spec, b);
        const auto h = hermitian_equivalent(H, momentum_metric_operator(0.1, b));
        EXPECT_LT(block_relative_difference(h.matrix(), h.matrix().adjoint(), n / 4), 1e-6);
    }
}

TEST(PseudoObservable, InverseOfConjugation) {
    std::mt19937_64 rng(4);
    const auto m = MetricOperator::from_hermitian(random_positive(12, rng));
    const OperatorMatrix o(random_matrix(12, rng), {12, 1.0, 1.0, 1.0});
    const auto X = pseudo_observable(o, m);
    EXPECT_LT((hermitian_equivalent(X, m).matrix() - o.matrix()).norm() / o.matrix().norm(), 1e-12);
    EXPECT_LT((pseudo_observable(o, MetricOperator::identity(12)).matrix() - o.matrix()).norm(), 1e-14);
}

TEST(PhysInner, Properties) {
    std::mt19937_64 rng(9);
    const CMatrix eta = random_positive(10, rng);
    const auto m = MetricOperator::from_hermitian(eta);
    std::normal_distribution<double> d;
    for (int k = 0; k < 20; ++k) {
        CVector u(10);
        for (Index i = 0; i < 10; ++i) u(i) = cplx(d(rng), d(rng));
        const cplx v = phys_inner(u, u, m);
        EXPECT_GT(v.real(), 0.0);
        EXPECT_LT(std::abs(v.imag()), 1e-12 * v.real());
        EXPECT_LT(std::abs(phys_inner(u, u, MetricOperator::identity(10)) - u.squaredNorm()), 1e-12);
    }
}

TEST(PhysInner, GeneratingSystemOrthonormal) {
    const auto sys = cubic_system(0.05, 32);
    const auto m = metric_from_biorthonormal(sys);
    for (Index a = 0; a < 8; ++a)
        for (Index b = 0; b < 8; ++b)
            EXPECT_LT(std::abs(phys_inner(sys.right.col(a), sys.right.col(b), m) - (a == b ? 1.0 : 0.0)), 1e-9);
}

TEST(MetricTrace, Identity) {
    std::mt19937_64 rng(2);
    const auto m = MetricOperator::from_hermitian(random_positive(9, rng));
    const OperatorMatrix id(CMatrix::Identity(9, 9), {9, 1.0, 1.0, 1.0});
    EXPECT_LT(std::abs(metric_trace(id, m) - 9.0), 1e-12);
}

TEST(MetricTrace, UnitaryEquivalentAndMetricIndependent) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const OperatorMatrix a(random_matrix(16, rng), {16, 1.0, 1.0, 1.0});
        const auto m1 = MetricOperator::from_hermitian(random_positive(16, rng));
        const auto m2 = MetricOperator::from_hermitian(random_positive(16, rng, 2.0));
        const cplx t1 = metric_trace(a, m1);
        const cplx direct = (m1.sqrt() * a.matrix() * m1.inv_sqrt()).trace();
        EXPECT_LT(rel(t1, direct), 1e-11);
        EXPECT_LT(rel(metric_trace(a, m2), t1), 1e-11);
        EXPECT_LT(rel(t1, a.matrix().trace()), 1e-11);
    }
}

TEST(MetricTrace, Linear) {
    std::mt19937_64 rng(13);
    const auto m = MetricOperator::from_hermitian(random_positive(8, rng));
    const CMatrix a = random_matrix(8, rng), b = random_matrix(8, rng);
    const BasisSpec bs{8, 1.0, 1.0, 1.0};
    const cplx lhs = metric_trace(OperatorMatrix(2.0 * a + kI * b, bs), m);
    const cplx rhs = 2.0 * metric_trace(OperatorMatrix(a, bs), m) + kI * metric_trace(OperatorMatrix(b, bs), m);
    EXPECT_LT(rel(lhs, rhs), 1e-12);
}

TEST(Cpt, NormalizesUnbrokenModes) {
    const CubicModelSpec spec{1.0, 1.0, 0.1};
    const BasisSpec b = cubic_basis(spec, 32);
    const auto sys = biorthonormal_diagonalize(build_cubic_hamiltonian(spec, b));
    const auto P = parity_operator(b);
    const auto c = cpt_normalize(sys, P);
    EXPECT_GT(cpt_normalizable_modes(sys, P), 8);
    for (Index n = 0; n < 8; ++n) {
        const cplx pt = c.right.col(n).dot(P.matrix() * c.right.col(n));
        EXPECT_NEAR(std::abs(pt), 1.0, 1e-10);
    }
    EXPECT_LT(completeness_residual(c), 1e-8);
}

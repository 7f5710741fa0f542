// Metric operators, the physical inner product and trace, and maps between
// the pseudo-Hermitian and Hermitian representations.
#ifndef PHQM_METRIC_HPP
#define PHQM_METRIC_HPP

#include <span>

#include "phqm/spectral.hpp"
#include "phqm/types.hpp"

namespace phqm {

inline constexpr double kDefaultMinEigenRatio = 1e-40;

/// Positive-definite Hermitian eta with eta^{1/2}, eta^{-1/2} and
/// Q = -ln eta, all held as functions of one spectral decomposition
/// eta = U diag(lambda) U^dag. Immutable once built.
class MetricOperator {
public:
    /// Builds from an eigenbasis (unitary columns) and positive eigenvalues.
    /// Throws NumericalError ("degenerate metric") when an eigenvalue is not
    /// positive and finite or lambda_min/lambda_max <= min_eigen_ratio.
    static MetricOperator from_spectral(CMatrix eigenvectors, RVector eigenvalues,
                                        double min_eigen_ratio = kDefaultMinEigenRatio);

    /// Diagonalizes a Hermitian positive-definite matrix. Rejects matrices that
    /// are not Hermitian to 1e-12 relative; never clamps eigenvalues.
    static MetricOperator from_hermitian(const CMatrix& eta, double min_eigen_ratio = kDefaultMinEigenRatio);

    static MetricOperator identity(Index dimension);

    const CMatrix& eta() const noexcept { return eta_; }
    const CMatrix& sqrt() const noexcept { return sqrt_; }
    const CMatrix& inv_sqrt() const noexcept { return inv_sqrt_; }
    const CMatrix& generator() const noexcept { return q_; }  // Q = -ln eta
    const CMatrix& eigenvectors() const noexcept { return u_; }
    const RVector& eigenvalues() const noexcept { return lambda_; }
    double lambda_min() const noexcept { return lambda_.minCoeff(); }
    double lambda_max() const noexcept { return lambda_.maxCoeff(); }
    Index dim() const noexcept { return lambda_.size(); }

private:
    MetricOperator() = default;

    CMatrix u_;
    RVector lambda_;
    CMatrix eta_;
    CMatrix sqrt_;
    CMatrix inv_sqrt_;
    CMatrix q_;
};

/// eta = sum_n |phi_n><phi_n| = (Psi Psi^dag)^{-1}, decomposed through the
/// SVD Psi = U S W^dag so that lambda = S^-2 without forming eta first.
MetricOperator metric_from_biorthonormal(const BiorthonormalSystem& sys,
                                         double min_eigen_ratio = kDefaultMinEigenRatio);

/// psi_n -> c_n psi_n, phi_n -> phi_n / conj(c_n).
BiorthonormalSystem rescale_biorthonormal(const BiorthonormalSystem& sys, std::span<const cplx> scales);

struct CptNormalization {
    double reality_tolerance = 1e-8;  // |Im E| <= tol * max(1, |Re E|)
    double norm_floor = 1e-10;        // minimum |<psi|P psi>| for unit-norm psi
};

/// Rescales every PT-unbroken mode so that |<psi_n|P psi_n>| = 1, the
/// normalization whose metric is eta = P C = exp(-Q) with parity-odd Q.
/// Modes that are complex or have a vanishing PT norm are left unchanged.
BiorthonormalSystem cpt_normalize(const BiorthonormalSystem& sys, const OperatorMatrix& parity,
                                  const CptNormalization& options = {});

/// Number of modes cpt_normalize would rescale.
Index cpt_normalizable_modes(const BiorthonormalSystem& sys, const OperatorMatrix& parity,
                             const CptNormalization& options = {});

/// h = eta^{1/2} H eta^{-1/2}, evaluated in the metric eigenbasis.
OperatorMatrix hermitian_equivalent(const OperatorMatrix& h, const MetricOperator& metric);

/// X = eta^{-1/2} O eta^{1/2}, evaluated in the metric eigenbasis.
OperatorMatrix pseudo_observable(const OperatorMatrix& o, const MetricOperator& metric);

/// <u|eta v>.
cplx phys_inner(const CVector& u, const CVector& v, const MetricOperator& metric);

/// sum_n <b_n|eta A b_n> over the eta-orthonormal basis b_n = u_n/sqrt(lambda_n).
cplx metric_trace(const OperatorMatrix& a, const MetricOperator& metric);

/// ||H^dag eta - eta H|| / (||H|| ||eta||) on the leading block (0: full).
double pseudo_hermiticity_residual(const CMatrix& h, const CMatrix& eta, Index block = 0);

/// max_n ||phi_n - eta psi_n|| / (||eta|| ||psi_n||).
double metric_mapping_residual(const BiorthonormalSystem& sys, const MetricOperator& metric);

}  // namespace phqm

#endif  // PHQM_METRIC_HPP

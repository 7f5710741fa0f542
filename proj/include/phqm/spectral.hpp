// Biorthonormal eigensystems of non-Hermitian Hamiltonians.
#ifndef PHQM_SPECTRAL_HPP
#define PHQM_SPECTRAL_HPP

#include <limits>

#include "phqm/types.hpp"

namespace phqm {

/// Eigenvalues E_n with right vectors psi_n (columns of `right`) and left
/// vectors phi_n (columns of `left`) such that <psi_n|phi_m> = delta_nm and
/// sum_n |phi_n><psi_n| = 1.
struct BiorthonormalSystem {
    CVector eigenvalues;
    CMatrix right;
    CMatrix left;
    double reality_tolerance = 1e-8;
    double condition_number = 1.0;  // of `right` as produced by the eigensolve
    BasisSpec basis;

    Index size() const noexcept { return eigenvalues.size(); }
};

struct DiagonalizeOptions {
    double reality_tolerance = 1e-8;
    // Eigenvector matrices closer to singular than this are rejected as
    // near-defective. 1/DBL_EPSILON: see README "numerics".
    double condition_bound = 1.0 / std::numeric_limits<double>::epsilon();
};

/// Dense eigensolve; left vectors are the inverse-adjoint of the right-vector
/// matrix. Eigenvalues ascend by real part, ties (|dRe| <= 1e-10 max(1,|Re|))
/// broken by ascending imaginary part. Each psi_n has unit norm and its
/// largest-magnitude component real positive.
BiorthonormalSystem biorthonormal_diagonalize(const OperatorMatrix& h, const DiagonalizeOptions& options = {});

struct SpectrumRealityReport {
    Index trusted_modes = 0;
    double max_relative_imag = 0.0;  // max |Im E|/max(1,|Re E|) over trusted modes
    double tolerance = 0.0;
    bool pass = false;
};

SpectrumRealityReport spectrum_reality_report(const BiorthonormalSystem& sys, Index trusted_modes);

/// N/4, at least 1.
Index default_trusted_modes(Index dimension);

/// max_nm |<psi_n|phi_m> - delta_nm|.
double biorthonormality_residual(const BiorthonormalSystem& sys);

/// || sum_n |phi_n><psi_n| - I ||_F.
double completeness_residual(const BiorthonormalSystem& sys);

/// ||H - Psi diag(E) Psi^-1|| / ||H||.
double reconstruction_residual(const OperatorMatrix& h, const BiorthonormalSystem& sys);

}  // namespace phqm

#endif  // PHQM_SPECTRAL_HPP

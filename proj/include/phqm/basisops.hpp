// Truncated position/momentum operators and model Hamiltonians in a
// harmonic-oscillator eigenbasis.
#ifndef PHQM_BASISOPS_HPP
#define PHQM_BASISOPS_HPP

#include <vector>

#include "phqm/types.hpp"

namespace phqm {

/// H = p^2/2m + mu^2 x^2/2 + i eps x^3.
struct CubicModelSpec {
    double mass = 1.0;
    double mu = 1.0;
    double epsilon = 0.0;

    void validate() const;
    bool operator==(const CubicModelSpec&) const = default;
};

/// H_alpha = p^2/2m + V(x + i alpha), V(xi) = sum_k coefficients[k] xi^k.
struct ShiftedModelSpec {
    std::vector<double> coefficients;
    double alpha = 0.0;
    double mass = 1.0;
    int degree_cap = 8;

    void validate() const;
    int degree() const;
    bool operator==(const ShiftedModelSpec&) const = default;
};

struct OscillatorOps {
    OperatorMatrix x;
    OperatorMatrix p;
};

/// x = sqrt(hbar/2m w)(a + a^dag), p = i sqrt(m w hbar/2)(a^dag - a).
OscillatorOps oscillator_ops(const BasisSpec& basis);

/// Diagonal parity operator diag((-1)^n).
OperatorMatrix parity_operator(const BasisSpec& basis);

/// Basis with w_b = mu/sqrt(m), the unperturbed oscillator frequency.
BasisSpec cubic_basis(const CubicModelSpec& spec, int dimension, double hbar = 1.0);

/// Basis frequency implied by the confining coefficients of V: sqrt(2 c2/m)
/// when the quadratic coefficient is positive, otherwise the quartic scale
/// (4 c4 hbar / m^2)^(1/3), otherwise 1.
BasisSpec shifted_basis(const ShiftedModelSpec& spec, int dimension, double hbar = 1.0);

OperatorMatrix build_cubic_hamiltonian(const CubicModelSpec& spec, const BasisSpec& basis);

OperatorMatrix build_shifted_hamiltonian(const ShiftedModelSpec& spec, const BasisSpec& basis);

/// Evaluates V at the matrix argument `arg` by accumulating powers.
CMatrix polynomial_of_matrix(const std::vector<double>& coefficients, const CMatrix& arg);

inline constexpr double kDefaultMetricOverflowGuard = 30.0;

/// eta_alpha = exp(2 alpha p / hbar). Refuses when |alpha| ||p|| / hbar
/// exceeds `overflow_guard`.
OperatorMatrix build_momentum_metric(double alpha, const BasisSpec& basis,
                                     double overflow_guard = kDefaultMetricOverflowGuard);

/// The three-parameter PT-symmetric quartic family as a shifted model:
/// alpha = b/(4a), c2 = a, c1 = c + 3b^2/(8a), c0 = b^2(16ac + 5b^2)/(256 a^3).
ShiftedModelSpec quartic_family(double a, double b, double c, double mass = 1.0);

}  // namespace phqm

#endif  // PHQM_BASISOPS_HPP
